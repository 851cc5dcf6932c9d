#include "heatflux/heat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatflux {

namespace {

constexpr double kUnderflowFloor = 1e-300;

std::string pair_label(const StatePair& pr) {
    std::ostringstream os;
    os << "(m=" << pr.first << ",n=" << pr.second << ")";
    return os.str();
}

}  // namespace

int HeatSupport::index_of_zero() const {
    for (int k = 0; k < size(); ++k) {
        if (values[k] == 0.0) return k;
    }
    return -1;
}

double HeatDistribution::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

HeatSupport heat_support(const ModelSpec& spec, double tol) {
    const int dim = spec.dimension;
    if (tol <= 0.0) tol = 1e-9 * std::max(spec.energy_range(), 1e-300);

    // positive gaps only; the negative side is the exact mirror
    struct Gap {
        double value;
        StatePair pair;  // (m, n) with E_n > E_m
    };
    std::vector<Gap> gaps;
    gaps.reserve(dim * (dim - 1) / 2);
    for (int m = 0; m < dim; ++m) {
        for (int n = m + 1; n < dim; ++n) {
            gaps.push_back({spec.bare_energies(n) - spec.bare_energies(m), {m, n}});
        }
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const Gap& a, const Gap& b) { return a.value < b.value; });

    // greedy clustering against the running bin center
    std::vector<double> centers;
    std::vector<std::vector<StatePair>> members;
    for (const Gap& g : gaps) {
        const double nearest = centers.empty() ? 0.0 : centers.back();
        const double dist = g.value - nearest;  // sorted, so nonnegative vs last center
        if (!centers.empty() && dist <= tol) {
            members.back().push_back(g.pair);
        } else if (g.value <= tol) {
            // would merge with the Q=0 bin; nondegeneracy makes this a
            // tolerance misconfiguration rather than physics
            std::ostringstream msg;
            msg << "ambiguous binning: positive gap " << g.value
                << " within tol " << tol << " of 0";
            throw ModelError(msg.str());
        } else if (!centers.empty() && dist < 10.0 * tol) {
            std::ostringstream msg;
            msg << "ambiguous binning: gaps " << nearest << " and " << g.value
                << " separated by " << dist << " (between tol and 10*tol); adjust tol";
            throw ModelError(msg.str());
        } else if (g.value < 10.0 * tol) {
            std::ostringstream msg;
            msg << "ambiguous binning: gap " << g.value
                << " between tol and 10*tol of 0; adjust tol";
            throw ModelError(msg.str());
        } else {
            centers.push_back(g.value);
            members.push_back({g.pair});
        }
    }

    // representative value = mean of member gaps; negation is exact, so the
    // support is symmetric bit for bit
    HeatSupport support;
    support.tol = tol;
    const int positive = static_cast<int>(centers.size());
    for (int k = 0; k < positive; ++k) {
        double mean = 0.0;
        for (const StatePair& pr : members[k]) {
            mean += spec.bare_energies(pr.second) - spec.bare_energies(pr.first);
        }
        centers[k] = mean / static_cast<double>(members[k].size());
    }

    support.values.reserve(2 * positive + 1);
    support.pairs.reserve(2 * positive + 1);
    for (int k = positive - 1; k >= 0; --k) {
        support.values.push_back(-centers[k]);
        std::vector<StatePair> reversed;
        reversed.reserve(members[k].size());
        for (const StatePair& pr : members[k]) reversed.push_back({pr.second, pr.first});
        support.pairs.push_back(std::move(reversed));
    }
    support.values.push_back(0.0);
    {
        std::vector<StatePair> diagonal;
        diagonal.reserve(dim);
        for (int m = 0; m < dim; ++m) diagonal.push_back({m, m});
        support.pairs.push_back(std::move(diagonal));
    }
    for (int k = 0; k < positive; ++k) {
        support.values.push_back(centers[k]);
        support.pairs.push_back(members[k]);
    }
    return support;
}

namespace {

HeatDistribution accumulate_distribution(const ModelSpec& spec,
                                         const StochasticMatrix& p,
                                         const HeatSupport& support, bool forward) {
    if (p.dimension() != spec.dimension) {
        throw ModelError("propagator dimension does not match model");
    }
    const Population initial = gibbs_populations(spec.bare_energies, spec.beta_s);

    HeatDistribution dist;
    dist.support = support;
    dist.tau = p.tau;
    dist.forward = forward;
    dist.mass.resize(support.size(), 0.0);
    dist.pair_mass.resize(support.size());

    for (int k = 0; k < support.size(); ++k) {
        dist.pair_mass[k].reserve(support.pairs[k].size());
        double sum = 0.0;
        for (const StatePair& pr : support.pairs[k]) {
            const int m = pr.first;
            const int n = pr.second;
            // forward: start thermal in m, land in n, absorb Q = E_n - E_m
            // reverse: start thermal in n, land in m, release the same Q
            const double w = forward ? initial(m) * p.entries(n, m)
                                     : initial(n) * p.entries(m, n);
            dist.pair_mass[k].push_back(w);
            sum += w;
        }
        dist.mass[k] = sum;
    }
    return dist;
}

}  // namespace

HeatDistribution forward_distribution(const ModelSpec& spec, const StochasticMatrix& p,
                                      const HeatSupport& support) {
    return accumulate_distribution(spec, p, support, true);
}

HeatDistribution reverse_distribution(const ModelSpec& spec, const StochasticMatrix& p,
                                      const HeatSupport& support) {
    return accumulate_distribution(spec, p, support, false);
}

VerificationReport fr_check(const ModelSpec& spec, const StochasticMatrix& p,
                            const HeatSupport& support, double tol) {
    VerificationReport report;
    report.check = "fluctuation_relation";
    report.tolerance = tol;
    const double delta_beta = spec.delta_beta();
    const Population initial = gibbs_populations(spec.bare_energies, spec.beta_s);

    // tier (a): every ordered pair
    const int dim = spec.dimension;
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if (n == m) continue;
            const double fwd = initial(m) * p.entries(n, m);
            const double rev = initial(n) * p.entries(m, n);
            const std::string label = "pair " + pair_label({m, n});
            if (fwd <= kUnderflowFloor || rev <= kUnderflowFloor) {
                report.skip(label + ": mass underflow");
                continue;
            }
            const double heat = spec.bare_energies(n) - spec.bare_energies(m);
            const double residual =
                std::log(fwd) - std::log(rev) - heat * delta_beta;
            CheckItem it;
            it.label = label;
            it.measured = std::log(fwd) - std::log(rev);
            it.expected = heat * delta_beta;
            it.residual = residual;
            it.pass = std::abs(residual) <= tol;
            report.add(std::move(it));
        }
    }

    // tier (b): aggregated masses per support value
    const HeatDistribution fwd_dist = forward_distribution(spec, p, support);
    for (int k = 0; k < support.size(); ++k) {
        const double q = support.values[k];
        if (q <= 0.0) continue;
        // locate the mirrored value (support symmetric by construction)
        const auto mirror = std::lower_bound(support.values.begin(),
                                             support.values.end(), -q);
        const int km = static_cast<int>(mirror - support.values.begin());
        const double plus = fwd_dist.mass[k];
        const double minus = fwd_dist.mass[km];
        std::ostringstream label;
        label << "aggregated Q=" << q;
        if (plus <= kUnderflowFloor || minus <= kUnderflowFloor) {
            report.skip(label.str() + ": mass underflow");
            continue;
        }
        const double residual = std::log(plus) - std::log(minus) - q * delta_beta;
        CheckItem it;
        it.label = label.str();
        it.measured = std::log(plus) - std::log(minus);
        it.expected = q * delta_beta;
        it.residual = residual;
        it.pass = std::abs(residual) <= tol;
        report.add(std::move(it));
    }
    return report;
}

VerificationReport detailed_balance_check(const StochasticMatrix& p,
                                          const ModelSpec& spec, double tol) {
    VerificationReport report;
    report.check = "detailed_balance";
    report.tolerance = tol;
    const int dim = spec.dimension;
    for (int m = 0; m < dim; ++m) {
        for (int n = m + 1; n < dim; ++n) {
            const double fwd = p.entries(n, m);
            const double rev = p.entries(m, n);
            const std::string label = "pair " + pair_label({m, n});
            if (fwd <= kUnderflowFloor || rev <= kUnderflowFloor) {
                report.skip(label + ": entry underflow");
                continue;
            }
            const double heat = spec.bare_energies(n) - spec.bare_energies(m);
            const double residual = std::log(fwd) - std::log(rev) + spec.beta_b * heat;
            CheckItem it;
            it.label = label;
            it.measured = std::log(fwd) - std::log(rev);
            it.expected = -spec.beta_b * heat;
            it.residual = residual;
            it.pass = std::abs(residual) <= tol;
            report.add(std::move(it));
        }
    }
    return report;
}

VerificationReport tail_bound_check(const HeatDistribution& forward,
                                    const ModelSpec& spec,
                                    const std::vector<double>& q_grid) {
    if (spec.delta_beta() < 0.0) {
        throw RegimeError("inapplicable regime: requires beta_S >= beta_B");
    }
    VerificationReport report;
    report.check = "tail_bound";
    report.tolerance = 1e-12;
    const double delta_beta = spec.delta_beta();

    for (double q : q_grid) {
        if (q > 0.0) {
            throw RegimeError("tail bound is defined for q <= 0 only");
        }
        double cumulative = 0.0;
        for (int k = 0; k < forward.support.size(); ++k) {
            if (forward.support.values[k] <= q + forward.support.tol) {
                cumulative += forward.mass[k];
            }
        }
        const double bound = std::exp(q * delta_beta);
        const double margin = bound + 1e-12 - cumulative;
        std::ostringstream label;
        label << "q=" << q;
        CheckItem it;
        it.label = label.str();
        it.measured = cumulative;
        it.expected = bound;
        it.residual = std::min(margin, 0.0);
        it.pass = margin >= 0.0;
        it.note = "margin " + std::to_string(margin);
        report.add(std::move(it));
    }
    return report;
}

MeanHeatResult mean_heat(const HeatDistribution& forward, const ModelSpec& spec,
                         const StochasticMatrix& p) {
    MeanHeatResult result;

    // pair-exact sum: each contribution weighted by its own bare gap, not
    // the aggregated bin value, so the first-law residual is rounding-level
    double mean = 0.0;
    for (int k = 0; k < forward.support.size(); ++k) {
        for (size_t i = 0; i < forward.support.pairs[k].size(); ++i) {
            const StatePair& pr = forward.support.pairs[k][i];
            const double q =
                spec.bare_energies(pr.second) - spec.bare_energies(pr.first);
            mean += q * forward.pair_mass[k][i];
        }
    }
    result.mean_heat = mean;

    const Population v0 = gibbs_populations(spec.bare_energies, spec.beta_s);
    const Population v_tau = evolve_populations(p, v0);
    result.energy_change =
        spec.bare_energies.dot(v_tau) - spec.bare_energies.dot(v0);
    result.first_law_residual = result.mean_heat - result.energy_change;
    return result;
}

}  // namespace heatflux
