#include "heatflux/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace heatflux {

namespace {

// domain tag separating heat-sampling streams from per-start-state batches
constexpr std::uint64_t kHeatDomain = 0x4845415453414d50ULL;  // "HEATSAMP"

struct JumpTable {
    Eigen::VectorXd escape;       // total rate out of each state
    Eigen::MatrixXd cumulative;   // per column m: running sum of R_jm over j
    int dim{0};

    explicit JumpTable(const RateMatrix& rates) {
        dim = rates.dimension();
        escape.resize(dim);
        cumulative.resize(dim, dim);
        for (int m = 0; m < dim; ++m) {
            double run = 0.0;
            for (int j = 0; j < dim; ++j) {
                run += (j == m) ? 0.0 : rates.rates(j, m);
                cumulative(j, m) = run;
            }
            escape(m) = run;
        }
    }

    int jump_from(int state, RngStream& stream) const {
        const double target = stream.uniform() * escape(state);
        for (int j = 0; j < dim; ++j) {
            if (j != state && target < cumulative(j, state)) return j;
        }
        // target landed on the total mass boundary; take the last channel
        for (int j = dim - 1; j >= 0; --j) {
            if (j != state && cumulative(j, state) > (j == 0 ? 0.0 : cumulative(j - 1, state))) return j;
        }
        return state;
    }
};

int run_path(const JumpTable& table, int start, double tau, RngStream& stream) {
    int state = start;
    double t = 0.0;
    for (;;) {
        const double rate = table.escape(state);
        if (rate <= 0.0) break;  // absorbing: hold until tau
        t += stream.exponential(rate);
        if (t > tau) break;
        state = table.jump_from(state, stream);
    }
    return state;
}

// static split over [0, n); each worker owns a private accumulator
template <typename Body>
void parallel_chunks(std::int64_t n, const Body& body) {
    const int workers = std::min<std::int64_t>(worker_count(), std::max<std::int64_t>(n, 1));
    if (workers <= 1) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = w * chunk;
        const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("HEATFLUX_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) hw = static_cast<int>(std::min<long>(hw, cap));
    }
    return hw;
}

int sample_path(const RateMatrix& rates, int start, double tau, RngStream& stream) {
    if (start < 0 || start >= rates.dimension()) {
        throw ModelError("start state out of range");
    }
    if (tau < 0.0) throw ModelError("tau must be nonnegative");
    const JumpTable table(rates);
    return run_path(table, start, tau, stream);
}

EmpiricalConditional empirical_conditional(const RateMatrix& rates, double tau,
                                           std::int64_t n_traj,
                                           std::uint64_t master_seed) {
    if (n_traj < 1) throw ModelError("n_traj must be >= 1");
    const int dim = rates.dimension();
    const JumpTable table(rates);
    const int workers = worker_count();

    EmpiricalConditional out;
    out.batch.n_traj = n_traj;
    out.batch.master_seed = master_seed;
    out.batch.tau = tau;
    out.batch.counts = CountMatrix::Zero(dim, dim);

    for (int m = 0; m < dim; ++m) {
        std::vector<CountMatrix> local(workers, CountMatrix::Zero(dim, 1));
        parallel_chunks(n_traj, [&](std::int64_t begin, std::int64_t end, int slot) {
            for (std::int64_t i = begin; i < end; ++i) {
                RngStream stream = make_stream(master_seed, static_cast<std::uint64_t>(m),
                                               static_cast<std::uint64_t>(i));
                const int final_state = run_path(table, m, tau, stream);
                local[slot](final_state, 0) += 1;
            }
        });
        for (int w = 0; w < workers; ++w) out.batch.counts.col(m) += local[w].col(0);
    }

    out.probs.resize(dim, dim);
    out.std_error.resize(dim, dim);
    const double n = static_cast<double>(n_traj);
    for (int m = 0; m < dim; ++m) {
        for (int j = 0; j < dim; ++j) {
            const double p = static_cast<double>(out.batch.counts(j, m)) / n;
            out.probs(j, m) = p;
            out.std_error(j, m) = std::sqrt(p * (1.0 - p) / n);
        }
    }
    return out;
}

EmpiricalHeat empirical_heat_distribution(const ModelSpec& spec, const RateMatrix& rates,
                                          const HeatSupport& support, double tau,
                                          std::int64_t n_traj, std::uint64_t master_seed) {
    if (n_traj < 1) throw ModelError("n_traj must be >= 1");
    const int dim = spec.dimension;
    const JumpTable table(rates);
    const Population initial = gibbs_populations(spec.bare_energies, spec.beta_s);
    Eigen::VectorXd initial_cdf(dim);
    {
        double run = 0.0;
        for (int m = 0; m < dim; ++m) {
            run += initial(m);
            initial_cdf(m) = run;
        }
    }
    const int workers = worker_count();

    // endpoint tally: counts(n, m) over (start m, end n)
    std::vector<CountMatrix> local(workers, CountMatrix::Zero(dim, dim));
    parallel_chunks(n_traj, [&](std::int64_t begin, std::int64_t end, int slot) {
        for (std::int64_t i = begin; i < end; ++i) {
            RngStream stream =
                make_stream(master_seed, kHeatDomain, static_cast<std::uint64_t>(i));
            const double u = stream.uniform();
            int start = dim - 1;
            for (int m = 0; m < dim; ++m) {
                if (u < initial_cdf(m)) {
                    start = m;
                    break;
                }
            }
            const int final_state = run_path(table, start, tau, stream);
            local[slot](final_state, start) += 1;
        }
    });
    CountMatrix endpoint = CountMatrix::Zero(dim, dim);
    for (int w = 0; w < workers; ++w) endpoint += local[w];

    EmpiricalHeat out;
    out.n_traj = n_traj;
    out.master_seed = master_seed;
    out.dist.support = support;
    out.dist.tau = tau;
    out.dist.forward = true;
    out.dist.mass.resize(support.size(), 0.0);
    out.dist.pair_mass.resize(support.size());
    out.counts.resize(support.size(), 0);
    out.std_error.resize(support.size(), 0.0);

    const double n = static_cast<double>(n_traj);
    for (int k = 0; k < support.size(); ++k) {
        std::int64_t bin = 0;
        out.dist.pair_mass[k].reserve(support.pairs[k].size());
        for (const StatePair& pr : support.pairs[k]) {
            const std::int64_t c = endpoint(pr.second, pr.first);
            bin += c;
            out.dist.pair_mass[k].push_back(static_cast<double>(c) / n);
        }
        out.counts[k] = bin;
        const double p = static_cast<double>(bin) / n;
        out.dist.mass[k] = p;
        out.std_error[k] = std::sqrt(p * (1.0 - p) / n);
    }
    return out;
}

namespace {

void add_z_item(VerificationReport& report, const std::string& label, double exact,
                double empirical, double n) {
    const double sigma = std::sqrt(exact * (1.0 - exact) / n);
    CheckItem it;
    it.label = label;
    it.measured = empirical;
    it.expected = exact;
    if (sigma == 0.0) {
        // degenerate binomial: exact 0 or 1 admits no fluctuation
        it.residual = (empirical == exact) ? 0.0 : std::numeric_limits<double>::infinity();
        it.pass = empirical == exact;
        it.note = "sigma = 0";
    } else {
        it.residual = (empirical - exact) / sigma;
        it.pass = std::abs(it.residual) < 5.0;
    }
    report.add(std::move(it));
}

void finish_z_report(VerificationReport& report) {
    int beyond_three = 0;
    for (const auto& it : report.items) {
        if (std::abs(it.residual) > 3.0) ++beyond_three;
    }
    const double fraction =
        report.items.empty() ? 0.0
                             : static_cast<double>(beyond_three) /
                                   static_cast<double>(report.items.size());
    CheckItem it;
    it.label = "fraction |z| > 3";
    it.measured = fraction;
    it.expected = 0.01;
    it.residual = 0.0;
    it.pass = fraction < 0.01;
    report.add(std::move(it));
}

}  // namespace

VerificationReport oracle_compare(const Eigen::MatrixXd& exact,
                                  const EmpiricalConditional& empirical) {
    if (exact.rows() != empirical.probs.rows() || exact.cols() != empirical.probs.cols()) {
        throw ModelError("oracle_compare: shape mismatch");
    }
    VerificationReport report;
    report.check = "mc_oracle_conditional";
    report.tolerance = 5.0;  // z-score gate
    const double n = static_cast<double>(empirical.batch.n_traj);
    for (int m = 0; m < exact.cols(); ++m) {
        for (int j = 0; j < exact.rows(); ++j) {
            std::ostringstream label;
            label << "p(" << j << ",tau|" << m << ",0)";
            add_z_item(report, label.str(), exact(j, m), empirical.probs(j, m), n);
        }
    }
    finish_z_report(report);
    return report;
}

VerificationReport oracle_compare(const HeatDistribution& exact,
                                  const EmpiricalHeat& empirical) {
    if (exact.support.size() != empirical.dist.support.size() ||
        exact.tau != empirical.dist.tau) {
        throw ModelError("oracle_compare: support or tau mismatch");
    }
    VerificationReport report;
    report.check = "mc_oracle_heat";
    report.tolerance = 5.0;
    const double n = static_cast<double>(empirical.n_traj);
    for (int k = 0; k < exact.support.size(); ++k) {
        std::ostringstream label;
        label << "mass(Q=" << exact.support.values[k] << ")";
        add_z_item(report, label.str(), exact.mass[k], empirical.dist.mass[k], n);
    }
    finish_z_report(report);
    return report;
}

}  // namespace heatflux
