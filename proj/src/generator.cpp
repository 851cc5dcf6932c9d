#include "heatflux/generator.hpp"

#include <cmath>
#include <string>

namespace heatflux {

RateMatrix jump_rates(const ModelSpec& spec) {
    const int dim = spec.dimension;
    RateMatrix out;
    out.rates = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if (m == n) continue;
            const double gap = spec.bare_energies(m) - spec.bare_energies(n);
            out.rates(m, n) = spec.coupling(m, n) * std::exp(-0.5 * spec.beta_b * gap);
        }
    }
    return out;
}

Generator build_generator(const RateMatrix& rates) {
    const int dim = rates.dimension();
    Generator gen;
    gen.rate_matrix = rates;
    gen.a = -rates.rates;
    for (int m = 0; m < dim; ++m) {
        // escape rate; compensated sum keeps column sums at rounding level
        // even for large dimensions
        long double escape = 0.0L;
        for (int j = 0; j < dim; ++j) {
            if (j != m) escape += static_cast<long double>(rates.rates(j, m));
        }
        gen.a(m, m) = static_cast<double>(escape);
    }
    return gen;
}

DephasingTable decay_rates(const RateMatrix& rates, const ModelSpec& spec) {
    const int dim = rates.dimension();
    Eigen::VectorXd escape(dim);
    for (int m = 0; m < dim; ++m) escape(m) = rates.rates.col(m).sum();

    DephasingTable table;
    table.gamma = Eigen::MatrixXd::Zero(dim, dim);
    table.omega = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if (m == n) continue;
            table.gamma(m, n) = 0.5 * (escape(m) + escape(n));
            table.omega(m, n) =
                spec.effective_energies(m) - spec.effective_energies(n);
        }
    }
    return table;
}

SymmetricForm symmetrize(const Generator& gen, const ModelSpec& spec) {
    const int dim = gen.dimension();
    SymmetricForm form;
    form.weights = (0.5 * spec.beta_b * spec.bare_energies.array()).exp();
    form.sym = Eigen::MatrixXd(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            form.sym(m, n) = form.weights(m) * gen.a(m, n) / form.weights(n);
        }
    }
    form.asymmetry = (form.sym - form.sym.transpose()).cwiseAbs().maxCoeff();
    // store the exactly symmetric representative; the raw transform differs
    // from it by rounding only (recorded in `asymmetry`)
    form.sym = 0.5 * (form.sym + form.sym.transpose()).eval();
    return form;
}

SpectralReport spectral_report(const Generator& gen, const ModelSpec& spec) {
    const int dim = gen.dimension();
    const SymmetricForm form = symmetrize(gen, spec);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form.sym);
    SpectralReport out;
    out.eigenvalues = solver.eigenvalues();  // ascending

    const double scale = std::max(gen.norm_inf(), 1e-300);
    const double zero_tol = 1e-10 * scale;

    out.report.check = "spectral";
    out.report.tolerance = zero_tol;

    out.report.add_residual("lambda_1 == 0", out.eigenvalues(0), 0.0,
                            out.eigenvalues(0));
    {
        CheckItem it;
        it.label = "eigenvalues nonnegative";
        it.measured = out.eigenvalues(0);
        it.residual = std::min(out.eigenvalues(0), 0.0);
        it.pass = out.eigenvalues(0) >= -zero_tol;
        out.report.add(std::move(it));
    }
    out.gap = dim > 1 ? out.eigenvalues(1) : 0.0;
    {
        CheckItem it;
        it.label = "simple zero mode";
        it.measured = out.gap;
        it.pass = out.gap > zero_tol;
        if (!it.pass) it.note = "degenerate stationary state";
        out.report.add(std::move(it));
    }

    // stationary state: zero mode of the symmetric form mapped back through
    // B^{-1}, sign-fixed and normalized to sum 1
    Eigen::VectorXd stationary =
        solver.eigenvectors().col(0).cwiseQuotient(form.weights);
    if (stationary.sum() < 0.0) stationary = -stationary;
    out.stationary = stationary / stationary.sum();

    const Population gibbs = gibbs_populations(spec.bare_energies, spec.beta_b);
    const double dev = (out.stationary - gibbs).cwiseAbs().maxCoeff();
    {
        CheckItem it;
        it.label = "stationary state is bath Gibbs";
        it.measured = dev;
        it.expected = 0.0;
        it.residual = dev;
        it.pass = dev <= 1e-10;
        out.report.add(std::move(it));
    }
    return out;
}

}  // namespace heatflux
