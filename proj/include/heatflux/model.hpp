// model.hpp — Physical model ingestion, validation, and thermal populations
//
// A model is a nondegenerate spectrum, two inverse temperatures (system and
// bath, k_B = 1, hbar = 1) and a symmetric nonnegative coupling matrix whose
// positive entries must form a connected graph on the levels.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heatflux/report.hpp"

namespace heatflux {

// Thrown by config parsing/validation; message names the offending field.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Population = Eigen::VectorXd;

struct ModelSpec {
    int dimension{0};
    // strictly increasing, stored shifted so the minimum is zero
    Eigen::VectorXd bare_energies;
    // defaults to bare_energies; only gaps enter the dynamics
    Eigen::VectorXd effective_energies;
    double beta_s{0.0};  // system initial inverse temperature
    double beta_b{0.0};  // bath inverse temperature
    // symmetric, nonnegative off-diagonal, zero diagonal
    Eigen::MatrixXd coupling;

    double delta_beta() const { return beta_s - beta_b; }
    double energy_range() const {
        return bare_energies(dimension - 1) - bare_energies(0);
    }
};

// beta*(E_max - E_min) beyond this overflows e^{+-beta*E/2} factors.
inline constexpr double kOverflowGuard = 300.0;

// Parse a JSON config (see README for the schema) into a validated spec.
// Energies are shifted so min(bare) = 0; the shift leaves all rates, Gibbs
// weights and heat values unchanged. Accepted-but-ignored fields (coupling
// diagonal) append a note to `warnings` when given.
ModelSpec load_model(const std::string& config_text,
                     std::vector<std::string>* warnings = nullptr);

// Schema parsing and normalization only; invariant violations (degenerate
// spectrum, asymmetric coupling, ...) are left for validate_model to report.
ModelSpec parse_model(const std::string& config_text,
                      std::vector<std::string>* warnings = nullptr);

// Gibbs weights e^{-beta E_m} / sum_k e^{-beta E_k}, max-shifted so the
// largest exponent is zero.
Population gibbs_populations(const Eigen::VectorXd& energies, double beta);

// Re-check every ModelSpec invariant on an already-built spec. Failures are
// report entries, not exceptions, so deliberately broken specs can be probed.
VerificationReport validate_model(const ModelSpec& spec);

// Number of connected components of the graph with edges where C_mn > 0.
int coupling_components(const Eigen::MatrixXd& coupling);

bool is_population(const Population& v, double tol = 1e-12);

// Hermiticity/trace-1/positivity residuals for a density matrix.
VerificationReport validate_density(const Eigen::MatrixXcd& rho);

}  // namespace heatflux
