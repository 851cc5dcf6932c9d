#include "heatflux/ensemble.hpp"

#include <cmath>
#include <sstream>

#include "heatflux/heat.hpp"
#include "heatflux/propagator.hpp"
#include "heatflux/rng.hpp"

namespace heatflux {

namespace {

constexpr std::uint64_t kModelDomain = 0x4d4f44454cULL;  // "MODEL"

// fold a sweep-level residual into the named aggregate report
void fold(std::map<std::string, VerificationReport>& checks, const std::string& name,
          double tol, const std::string& label, double residual, bool pass) {
    auto [it, inserted] = checks.try_emplace(name);
    VerificationReport& report = it->second;
    if (inserted) {
        report.check = name;
        report.tolerance = tol;
    }
    CheckItem item;
    item.label = label;
    item.residual = residual;
    item.pass = pass;
    report.add(std::move(item));
}

void fold_report(std::map<std::string, VerificationReport>& checks,
                 const std::string& name, const VerificationReport& sub,
                 const std::string& context) {
    fold(checks, name, sub.tolerance, context + " [" + sub.worst_label + "]",
         sub.worst_residual, sub.pass);
}

}  // namespace

ModelSpec random_model(int dim, std::uint64_t seed, const RandomModelOptions& opts) {
    if (dim < 2) throw ModelError("dimension must be >= 2");
    RngStream stream = make_stream(seed, kModelDomain, 0);

    ModelSpec spec;
    spec.dimension = dim;
    spec.bare_energies.resize(dim);
    spec.bare_energies(0) = 0.0;
    for (int m = 1; m < dim; ++m) {
        spec.bare_energies(m) =
            spec.bare_energies(m - 1) + stream.uniform(opts.gap_low, opts.gap_high);
    }
    spec.effective_energies = spec.bare_energies;
    spec.beta_s = stream.uniform(opts.beta_low, opts.beta_high);
    spec.beta_b = stream.uniform(opts.beta_low, opts.beta_high);

    Eigen::MatrixXd x(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            x(m, n) = stream.uniform(opts.coupling_low, opts.coupling_high);
    spec.coupling = 0.5 * (x + x.transpose());
    spec.coupling.diagonal().setZero();
    return spec;
}

EnsembleResult run_ensemble(const EnsembleOptions& opts) {
    EnsembleResult result;

    for (int dim : opts.dims) {
        for (int s = 0; s < opts.seeds; ++s) {
            const std::uint64_t seed =
                mix64(opts.master_seed ^ mix64((static_cast<std::uint64_t>(dim) << 32) |
                                               static_cast<std::uint64_t>(s)));
            const ModelSpec spec = random_model(dim, seed, opts.model);
            const Generator gen = build_generator(jump_rates(spec));
            const double norm = gen.norm_inf();
            const HeatSupport support = heat_support(spec);
            const SpectralDecomposition decomp = SpectralDecomposition::build(gen, spec);
            ++result.models_run;

            std::ostringstream model_tag;
            model_tag << "D=" << dim << " seed=" << s;

            {
                const SpectralReport spectral = spectral_report(gen, spec);
                fold_report(result.checks, "spectral", spectral.report, model_tag.str());
            }
            {
                // weighted powers of A are tau-independent
                const VerificationReport power =
                    power_symmetry_check(gen, spec, opts.power_s_max, 1.0 / norm);
                fold_report(result.checks, "power_symmetry", power, model_tag.str());
            }
            {
                // stationarity of the bath Gibbs vector under A itself
                const Population gibbs = gibbs_populations(spec.bare_energies, spec.beta_b);
                const double res = (gen.a * gibbs).cwiseAbs().maxCoeff() / norm;
                fold(result.checks, "gibbs_annihilated", 1e-12, model_tag.str(), res,
                     res <= 1e-12);
            }

            for (double unit : opts.tau_units) {
                const double tau = unit / norm;
                const StochasticMatrix p = decomp.propagate(tau);
                ++result.taus_run;

                std::ostringstream tag;
                tag << model_tag.str() << " tau=" << unit << "/||A||";

                fold_report(result.checks, "fluctuation_relation",
                            fr_check(spec, p, support, opts.tol_fr), tag.str());
                fold_report(result.checks, "detailed_balance",
                            detailed_balance_check(p, spec, opts.tol_db), tag.str());

                {
                    // the same identity through the independent Taylor route,
                    // plus elementwise agreement between the two routes
                    const Eigen::MatrixXd taylor = expm_taylor(gen.a, tau);
                    StochasticMatrix pt;
                    pt.entries = taylor;
                    pt.tau = tau;
                    fold_report(result.checks, "detailed_balance_taylor",
                                detailed_balance_check(pt, spec, opts.tol_db), tag.str());

                    double worst = 0.0;
                    for (int m = 0; m < dim; ++m) {
                        for (int n = 0; n < dim; ++n) {
                            const double denom = std::max(std::abs(taylor(n, m)), 1e-300);
                            worst = std::max(
                                worst, std::abs(p.entries(n, m) - taylor(n, m)) / denom);
                        }
                    }
                    fold(result.checks, "route_agreement", opts.tol_route_agreement,
                         tag.str(), worst, worst <= opts.tol_route_agreement);
                }
                {
                    const double dev = stochastic_deviation(p);
                    const double min_entry = p.entries.minCoeff();
                    fold(result.checks, "column_stochastic", opts.tol_stochastic,
                         tag.str(), dev, dev <= opts.tol_stochastic && min_entry >= 0.0);
                }
                {
                    const Population gibbs =
                        gibbs_populations(spec.bare_energies, spec.beta_b);
                    const double res =
                        (p.entries * gibbs - gibbs).cwiseAbs().maxCoeff();
                    fold(result.checks, "gibbs_stationary", opts.tol_stochastic,
                         tag.str(), res, res <= opts.tol_stochastic);
                }
                {
                    const StochasticMatrix half = decomp.propagate(0.5 * tau);
                    const double res =
                        (half.entries * half.entries - p.entries).cwiseAbs().maxCoeff();
                    fold(result.checks, "semigroup", opts.tol_semigroup, tag.str(), res,
                         res <= opts.tol_semigroup);
                }

                const HeatDistribution fwd = forward_distribution(spec, p, support);
                {
                    const HeatDistribution rev = reverse_distribution(spec, p, support);
                    double norm_res = std::abs(fwd.total() - 1.0);
                    norm_res = std::max(norm_res, std::abs(rev.total() - 1.0));
                    fold(result.checks, "distribution_normalized", 1e-10, tag.str(),
                         norm_res, norm_res <= 1e-10);
                }
                {
                    const MeanHeatResult mh = mean_heat(fwd, spec, p);
                    fold(result.checks, "first_law", opts.tol_first_law, tag.str(),
                         mh.first_law_residual,
                         std::abs(mh.first_law_residual) <= opts.tol_first_law);
                    if (spec.delta_beta() >= 0.0) {
                        fold(result.checks, "mean_heat_sign", 1e-12, tag.str(),
                             std::min(mh.mean_heat, 0.0), mh.mean_heat >= -1e-12);
                    }
                }
                if (spec.delta_beta() >= 0.0) {
                    std::vector<double> q_grid;
                    for (double q : support.values)
                        if (q <= 0.0) q_grid.push_back(q);
                    const VerificationReport tail = tail_bound_check(fwd, spec, q_grid);
                    fold_report(result.checks, "tail_bound", tail, tag.str());
                }
            }
        }
    }

    for (const auto& [name, report] : result.checks) {
        result.pass = result.pass && report.pass;
    }
    return result;
}

nlohmann::json to_json(const EnsembleResult& result) {
    nlohmann::json j;
    j["models_run"] = result.models_run;
    j["taus_run"] = result.taus_run;
    j["pass"] = result.pass;
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& [name, report] : result.checks) {
        checks[name] = to_json(report, /*with_items=*/false);
    }
    j["checks"] = checks;
    return j;
}

}  // namespace heatflux
