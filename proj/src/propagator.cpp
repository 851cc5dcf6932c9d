#include "heatflux/propagator.hpp"

#include <cmath>
#include <sstream>

namespace heatflux {

namespace {

constexpr double kClampFloor = -1e-12;
constexpr double kColumnSumTol = 1e-8;

}  // namespace

void require_stochastic(const Eigen::MatrixXd& entries) {
    const int dim = static_cast<int>(entries.rows());
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if (entries(n, m) < kClampFloor) {
                std::ostringstream msg;
                msg << "propagator not stochastic: entry (" << n << "," << m
                    << ") = " << entries(n, m) << " below " << kClampFloor;
                throw NumericalError(msg.str());
            }
        }
        const double col_sum = entries.col(m).sum();
        if (std::abs(col_sum - 1.0) > kColumnSumTol) {
            std::ostringstream msg;
            msg << "propagator not stochastic: column " << m << " sums to "
                << col_sum;
            throw NumericalError(msg.str());
        }
    }
}

SpectralDecomposition SpectralDecomposition::build(const Generator& gen,
                                                   const ModelSpec& spec) {
    SpectralDecomposition decomp;
    decomp.form = symmetrize(gen, spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(decomp.form.sym);
    decomp.eigenvalues = solver.eigenvalues();
    decomp.eigenvectors = solver.eigenvectors();
    return decomp;
}

StochasticMatrix SpectralDecomposition::propagate(double tau) const {
    if (tau < 0.0) throw NumericalError("propagation time must be nonnegative");
    const int dim = static_cast<int>(eigenvalues.size());

    StochasticMatrix out;
    out.tau = tau;
    if (tau == 0.0) {
        out.entries = Eigen::MatrixXd::Identity(dim, dim);
        return out;
    }

    const Eigen::VectorXd decay = (-tau * eigenvalues.array()).exp();
    Eigen::MatrixXd sym_exp =
        eigenvectors * decay.asDiagonal() * eigenvectors.transpose();
    // e^{-tau S} is symmetric; storing the exact average makes the pair
    // ratio identity hold to rounding in the log domain
    sym_exp = 0.5 * (sym_exp + sym_exp.transpose()).eval();

    out.entries = Eigen::MatrixXd(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            out.entries(n, m) =
                sym_exp(n, m) * (form.weights(m) / form.weights(n));
        }
    }

    require_stochastic(out.entries);

    // clamp harmless round-off negatives; renormalize touched columns
    for (int m = 0; m < dim; ++m) {
        bool clamped = false;
        for (int n = 0; n < dim; ++n) {
            if (out.entries(n, m) < 0.0) {
                out.entries(n, m) = 0.0;
                clamped = true;
            }
        }
        if (clamped) out.entries.col(m) /= out.entries.col(m).sum();
    }
    return out;
}

StochasticMatrix propagator(const Generator& gen, const ModelSpec& spec, double tau) {
    return SpectralDecomposition::build(gen, spec).propagate(tau);
}

Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& a, double tau, int terms) {
    const int dim = static_cast<int>(a.rows());
    const Eigen::MatrixXd x = -tau * a;

    // scale until ||X||_inf <= 1/2, sum the series, square back
    const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    const Eigen::MatrixXd xs = scale * x;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(dim, dim);
    for (int s = 1; s <= terms; ++s) {
        term = (term * xs / static_cast<double>(s)).eval();
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
    return sum;
}

Population evolve_populations(const StochasticMatrix& p, const Population& v0) {
    if (v0.size() != p.dimension()) {
        throw ModelError("population vector dimension does not match propagator");
    }
    if (p.tau == 0.0) return v0;
    return p.entries * v0;
}

Eigen::MatrixXcd evolve_density(const Eigen::MatrixXcd& rho0, const ModelSpec& spec,
                                const Generator& gen, double tau) {
    const int dim = spec.dimension;
    if (rho0.rows() != dim || rho0.cols() != dim) {
        throw ModelError("density matrix dimension does not match model");
    }
    if (tau == 0.0) return rho0;

    const StochasticMatrix p = propagator(gen, spec, tau);
    const DephasingTable table = decay_rates(gen.rate_matrix, spec);

    const Eigen::VectorXd diag0 = rho0.diagonal().real();
    const Eigen::VectorXd diag_tau = p.entries * diag0;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho.diagonal() = diag_tau.cast<std::complex<double>>();
    for (int m = 0; m < dim; ++m) {
        for (int n = m + 1; n < dim; ++n) {
            const std::complex<double> factor = std::exp(
                std::complex<double>(-table.gamma(m, n) * tau, -table.omega(m, n) * tau));
            rho(m, n) = factor * rho0(m, n);
            rho(n, m) = std::conj(rho(m, n));  // exact Hermiticity
        }
    }
    return rho;
}

VerificationReport power_symmetry_check(const Generator& gen, const ModelSpec& spec,
                                        int s_max, double tau) {
    VerificationReport report;
    report.check = "power_symmetry";
    report.tolerance = 1e-10;
    if (s_max < 1) throw ModelError("s_max must be >= 1");

    const int dim = gen.dimension();
    Eigen::MatrixXd weight(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m)
            weight(n, m) = std::exp(
                0.5 * spec.beta_b * (spec.bare_energies(n) - spec.bare_energies(m)));

    // M^(s)_nm = <n|A^s|m> e^{beta_B (E_n - E_m)/2} must be symmetric
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(dim, dim);
    for (int s = 1; s <= s_max; ++s) {
        power = (power * gen.a).eval();
        const Eigen::MatrixXd weighted = power.cwiseProduct(weight);
        const double scale = weighted.cwiseAbs().maxCoeff();
        const double asym =
            (weighted - weighted.transpose()).cwiseAbs().maxCoeff() /
            std::max(scale, 1e-300);
        report.add_residual("s=" + std::to_string(s), asym, 0.0, asym);
    }

    // propagator-level ratio identity at tau, via the Taylor oracle only
    const Eigen::MatrixXd taylor = expm_taylor(gen.a, tau);
    const double ratio_tol = 1e-9;
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if (n == m) continue;
            const double forward = taylor(n, m);
            const double backward = taylor(m, n);
            std::ostringstream label;
            label << "taylor ratio (" << n << "," << m << ") tau=" << tau;
            if (forward <= 1e-300 || backward <= 1e-300) {
                report.skip(label.str() + ": entry underflow");
                continue;
            }
            const double gap = spec.bare_energies(n) - spec.bare_energies(m);
            const double residual =
                std::log(forward) - std::log(backward) + spec.beta_b * gap;
            CheckItem it;
            it.label = label.str();
            it.measured = std::log(forward / backward);
            it.expected = -spec.beta_b * gap;
            it.residual = residual;
            it.pass = std::abs(residual) <= ratio_tol;
            report.add(std::move(it));
        }
    }
    return report;
}

double stochastic_deviation(const StochasticMatrix& p) {
    return (p.entries.colwise().sum().array() - 1.0).abs().maxCoeff();
}

}  // namespace heatflux
