// generator.hpp — Jump rates, the population generator A, dephasing rates,
// and the detailed-balance symmetrization used for all spectral work
//
// Rates obey R_mn = C_mn e^{-beta_B (E_m - E_n)/2} (rate INTO m FROM n), so
// the bath Gibbs vector is stationary and A is symmetrizable by
// B = diag(e^{beta_B E_m / 2}).

#pragma once

#include <Eigen/Dense>

#include "heatflux/model.hpp"
#include "heatflux/report.hpp"

namespace heatflux {

struct RateMatrix {
    // rates(m, n) = transition rate into m from n; diagonal zero
    Eigen::MatrixXd rates;

    int dimension() const { return static_cast<int>(rates.rows()); }
};

struct Generator {
    // a(m,m) = total escape rate from m, a(m,n) = -rates(m,n) for m != n;
    // columns sum to zero
    Eigen::MatrixXd a;
    RateMatrix rate_matrix;

    int dimension() const { return static_cast<int>(a.rows()); }
    double norm_inf() const { return a.cwiseAbs().rowwise().sum().maxCoeff(); }
};

struct DephasingTable {
    Eigen::MatrixXd gamma;  // gamma(m,n) = (1/2) sum_j (R_jm + R_jn), symmetric
    Eigen::MatrixXd omega;  // omega(m,n) = E_m - E_n (effective), antisymmetric
};

struct SymmetricForm {
    Eigen::MatrixXd sym;      // B A B^{-1}, symmetric; off-diagonal -C_mn
    Eigen::VectorXd weights;  // b_m = e^{beta_B E_m / 2}
    // max |S - S^T| of the raw similarity transform, before the stored form
    // is averaged to exact symmetry
    double asymmetry{0.0};
};

struct SpectralReport {
    Eigen::VectorXd eigenvalues;  // ascending, real by construction
    Population stationary;        // lambda=0 eigenvector, normalized to sum 1
    double gap{0.0};              // lambda_2
    VerificationReport report;
};

RateMatrix jump_rates(const ModelSpec& spec);

Generator build_generator(const RateMatrix& rates);

DephasingTable decay_rates(const RateMatrix& rates, const ModelSpec& spec);

SymmetricForm symmetrize(const Generator& gen, const ModelSpec& spec);

// Eigenvalues via the symmetric form; asserts a zero mode with spectral gap
// and that its eigenvector reproduces the bath Gibbs populations.
SpectralReport spectral_report(const Generator& gen, const ModelSpec& spec);

}  // namespace heatflux
