// ensemble.hpp — Randomized model generation and property sweeps over
// (model, tau) grids
//
// The sweep drives every exact check — fluctuation relation, detailed
// balance through both exponential routes, weighted power symmetry, tail
// bound, stochasticity/spectral structure, first law — and aggregates worst
// residuals per check.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heatflux/model.hpp"
#include "heatflux/report.hpp"

namespace heatflux {

struct RandomModelOptions {
    double beta_low{0.2};
    double beta_high{3.0};
    double gap_low{0.08};     // adjacent bare-energy spacing
    double gap_high{0.25};
    double coupling_low{0.5};
    double coupling_high{2.0};
};

// Deterministic random model: energies with uniform adjacent gaps, uniform
// symmetric coupling, betas in [beta_low, beta_high].
ModelSpec random_model(int dim, std::uint64_t seed,
                       const RandomModelOptions& opts = {});

struct EnsembleOptions {
    std::vector<int> dims{2, 3, 4, 5, 6, 7, 8, 9, 10};
    int seeds{50};
    // in units of 1 / ||A||_inf
    std::vector<double> tau_units{0.1, 0.5, 1.0, 2.0, 5.0};
    RandomModelOptions model;
    double tol_fr{1e-9};
    double tol_db{1e-9};
    double tol_power{1e-10};
    double tol_route_agreement{1e-9};
    double tol_stochastic{1e-10};
    double tol_semigroup{1e-9};
    double tol_first_law{1e-12};
    int power_s_max{10};
    std::uint64_t master_seed{1};
};

struct EnsembleResult {
    // check name -> aggregate (worst residual across the whole sweep)
    std::map<std::string, VerificationReport> checks;
    int models_run{0};
    int taus_run{0};
    bool pass{true};

    const VerificationReport& at(const std::string& name) const {
        return checks.at(name);
    }
};

EnsembleResult run_ensemble(const EnsembleOptions& opts);

nlohmann::json to_json(const EnsembleResult& result);

}  // namespace heatflux
