// heat.hpp — Discrete heat support, exact forward/reverse heat statistics,
// and the fluctuation-relation, detailed-balance, tail-bound and first-law
// checks
//
// Sign convention everywhere: Q = E_n - E_m (bare energies) is heat ABSORBED
// by the system on the transition m -> n.

#pragma once

#include <utility>
#include <vector>

#include "heatflux/model.hpp"
#include "heatflux/propagator.hpp"
#include "heatflux/report.hpp"

namespace heatflux {

// Thrown when a check is requested outside its declared range of validity
// (tail bound with beta_S < beta_B).
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ordered pair (start m, end n); carries heat Q = E_n - E_m
using StatePair = std::pair<int, int>;

struct HeatSupport {
    std::vector<double> values;                // sorted distinct heat values
    std::vector<std::vector<StatePair>> pairs; // contributing pairs per value
    double tol{0.0};                           // aggregation tolerance

    int size() const { return static_cast<int>(values.size()); }
    int index_of_zero() const;
};

struct HeatDistribution {
    HeatSupport support;
    std::vector<double> mass;  // probability per support value
    // per support value, the summand for each contributing pair (same order
    // as support.pairs); keeps pair-exact bookkeeping available
    std::vector<std::vector<double>> pair_mass;
    double tau{0.0};
    bool forward{true};  // absorbed-by-system convention when true

    double total() const;
};

struct MeanHeatResult {
    double mean_heat{0.0};       // sum Q * mass(Q), pair-exact
    double energy_change{0.0};   // Tr[H_0 rho(tau)] - Tr[H_0 rho(0)]
    double first_law_residual{0.0};
};

// Bin all D^2 ordered pairs by their bare-energy gap. Gaps closer than tol
// aggregate; a gap landing between tol and 10*tol of an existing value is an
// ambiguous binning error.
HeatSupport heat_support(const ModelSpec& spec, double tol = -1.0);

// mass(Q) = sum over pairs (m,n) of p_m(beta_S) p(n,tau|m,0)
HeatDistribution forward_distribution(const ModelSpec& spec, const StochasticMatrix& p,
                                      const HeatSupport& support);

// mass(Q) = sum over pairs (m,n) of p_n(beta_S) p(m,tau|n,0); coincides with
// the forward distribution evaluated at -Q
HeatDistribution reverse_distribution(const ModelSpec& spec, const StochasticMatrix& p,
                                      const HeatSupport& support);

// Two tiers: pairwise log[p_m P_nm] - log[p_n P_mn] - Q(beta_S - beta_B),
// and the same identity on aggregated masses per support value.
VerificationReport fr_check(const ModelSpec& spec, const StochasticMatrix& p,
                            const HeatSupport& support, double tol = 1e-9);

// log P_nm - log P_mn + beta_B (E_n - E_m) per level pair (the swapped pair
// carries the same residual negated).
VerificationReport detailed_balance_check(const StochasticMatrix& p,
                                          const ModelSpec& spec, double tol = 1e-9);

// Cumulative mass at or below each q <= 0 must not exceed e^{q delta_beta}.
// Requires beta_S >= beta_B; throws RegimeError otherwise.
VerificationReport tail_bound_check(const HeatDistribution& forward,
                                    const ModelSpec& spec,
                                    const std::vector<double>& q_grid);

// Mean absorbed heat with its first-law cross-check against the independent
// population-evolution energy bookkeeping.
MeanHeatResult mean_heat(const HeatDistribution& forward, const ModelSpec& spec,
                         const StochasticMatrix& p);

}  // namespace heatflux
