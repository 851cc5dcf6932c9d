// propagator.hpp — The column-stochastic propagator e^{-tau A} and density
// matrix evolution
//
// Two independent exponential routes: the production path goes through the
// symmetric eigendecomposition of B A B^{-1}; a scaled Taylor series exists
// as an oracle so that propagator identities can be verified without
// circularity.

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "heatflux/generator.hpp"
#include "heatflux/model.hpp"

namespace heatflux {

// Signals a propagator that failed its stochasticity contract (an upstream
// bug, not a user error).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StochasticMatrix {
    // entries(n, m) = p(n, tau | m, 0); columns sum to 1
    Eigen::MatrixXd entries;
    double tau{0.0};

    int dimension() const { return static_cast<int>(entries.rows()); }
};

// Cached eigensystem of the symmetric form; lets a tau grid reuse one solve.
struct SpectralDecomposition {
    SymmetricForm form;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    static SpectralDecomposition build(const Generator& gen, const ModelSpec& spec);

    // e^{-tau A} = B^{-1} U e^{-tau Lambda} U^T B with clamping of
    // round-off negatives (entries below -1e-12 raise NumericalError).
    StochasticMatrix propagate(double tau) const;
};

StochasticMatrix propagator(const Generator& gen, const ModelSpec& spec, double tau);

// Oracle route: plain scaled-and-squared Taylor series for e^{-tau A},
// independent of the eigendecomposition path.
Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& a, double tau, int terms = 40);

Population evolve_populations(const StochasticMatrix& p, const Population& v0);

// Diagonal part through e^{-tau A}; each coherence decays independently as
// rho_mn(tau) = e^{-(i omega_mn + gamma_mn) tau} rho_mn(0).
Eigen::MatrixXcd evolve_density(const Eigen::MatrixXcd& rho0, const ModelSpec& spec,
                                const Generator& gen, double tau);

// Half-Boltzmann-weighted symmetry of A^s for s <= s_max, plus the
// propagator ratio identity at `tau` via the Taylor oracle.
VerificationReport power_symmetry_check(const Generator& gen, const ModelSpec& spec,
                                        int s_max, double tau);

// max_m |column sum - 1|
double stochastic_deviation(const StochasticMatrix& p);

// Raises NumericalError when entries fall below -1e-12 or a column sum is
// off by more than 1e-8. Exposed so corrupted matrices can be probed.
void require_stochastic(const Eigen::MatrixXd& entries);

}  // namespace heatflux
