// trajectory.hpp — Gillespie sampling of the population jump process as an
// independent statistical oracle for the exact propagator and heat statistics
//
// Every trajectory owns an RNG stream keyed by (master_seed, domain, index),
// and results are integer tallies merged by addition, so any parallel
// schedule reproduces the serial run exactly.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "heatflux/generator.hpp"
#include "heatflux/heat.hpp"
#include "heatflux/model.hpp"
#include "heatflux/rng.hpp"

namespace heatflux {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct TrajectoryBatch {
    std::int64_t n_traj{0};  // per start state
    std::uint64_t master_seed{0};
    double tau{0.0};
    // counts(n, m) = trajectories launched in m that ended in n
    CountMatrix counts;
};

struct EmpiricalConditional {
    TrajectoryBatch batch;
    Eigen::MatrixXd probs;       // counts / n_traj, column-stochastic
    Eigen::MatrixXd std_error;   // binomial standard error per entry
};

struct EmpiricalHeat {
    HeatDistribution dist;           // masses are count fractions
    std::vector<double> std_error;   // per support value
    std::vector<std::int64_t> counts;
    std::int64_t n_traj{0};
    std::uint64_t master_seed{0};
};

// Exact simulation of the chain with generator -A: exponential waiting time
// with the total escape rate, jump target n with probability R_nm / escape.
// A state with zero escape rate holds until tau.
int sample_path(const RateMatrix& rates, int start, double tau, RngStream& stream);

// n_traj paths from every start state; trajectory (m, i) draws from stream
// (master_seed, domain=m, index=i).
EmpiricalConditional empirical_conditional(const RateMatrix& rates, double tau,
                                           std::int64_t n_traj,
                                           std::uint64_t master_seed);

// Initial state drawn thermally at beta_S, heat recorded as the bare-energy
// difference between the endpoints (two-point bookkeeping).
EmpiricalHeat empirical_heat_distribution(const ModelSpec& spec, const RateMatrix& rates,
                                          const HeatSupport& support, double tau,
                                          std::int64_t n_traj, std::uint64_t master_seed);

// z-scores of empirical entries against exact probabilities; passes when
// max |z| < 5 and fewer than 1% of compared entries exceed |z| = 3.
VerificationReport oracle_compare(const Eigen::MatrixXd& exact,
                                  const EmpiricalConditional& empirical);
VerificationReport oracle_compare(const HeatDistribution& exact,
                                  const EmpiricalHeat& empirical);

// Worker count for trajectory batches: hardware concurrency capped by the
// HEATFLUX_THREADS environment variable (>=1).
int worker_count();

}  // namespace heatflux
