// heatflux_cli.cpp — single-binary front end
//
// Subcommands: validate, dump, evolve, heatdist, verify, sample, ensemble.
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatflux/ensemble.hpp"
#include "heatflux/generator.hpp"
#include "heatflux/heat.hpp"
#include "heatflux/io.hpp"
#include "heatflux/model.hpp"
#include "heatflux/propagator.hpp"
#include "heatflux/trajectory.hpp"
#include "heatflux/version.hpp"

namespace hf = heatflux;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct LoadedConfig {
    hf::ModelSpec spec;
    json resolved;
    std::vector<std::string> warnings;
};

LoadedConfig read_config(const std::string& path, bool enforce_invariants = true) {
    std::ifstream in(path);
    if (!in) throw hf::ModelError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();

    LoadedConfig out;
    out.spec = enforce_invariants ? hf::load_model(buffer.str(), &out.warnings)
                                  : hf::parse_model(buffer.str(), &out.warnings);

    // echo the spec as actually used (post shift, coupling materialized)
    json resolved;
    resolved["dimension"] = out.spec.dimension;
    resolved["energies"] = std::vector<double>(
        out.spec.bare_energies.data(),
        out.spec.bare_energies.data() + out.spec.dimension);
    resolved["effective_energies"] = std::vector<double>(
        out.spec.effective_energies.data(),
        out.spec.effective_energies.data() + out.spec.dimension);
    resolved["beta_S"] = out.spec.beta_s;
    resolved["beta_B"] = out.spec.beta_b;
    json rows = json::array();
    for (int r = 0; r < out.spec.dimension; ++r) {
        json row = json::array();
        for (int c = 0; c < out.spec.dimension; ++c) row.push_back(out.spec.coupling(r, c));
        rows.push_back(std::move(row));
    }
    resolved["coupling"] = {{"type", "explicit"}, {"matrix", std::move(rows)}};
    out.resolved = std::move(resolved);
    return out;
}

void print_warnings(const LoadedConfig& config) {
    for (const auto& w : config.warnings) std::cout << "warning: " << w << '\n';
}

json report_envelope(const std::string& subcommand, const hf::RunManifest& manifest) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = "heatflux";
    j["version"] = HEATFLUX_VERSION;
    j["subcommand"] = subcommand;
    j["run_hash"] = manifest.run_hash();
    return j;
}

// tau flags are in units of 1/||A||_inf unless --tau-absolute is given
double resolve_tau(double tau_flag, bool absolute, const hf::Generator& gen) {
    if (tau_flag < 0.0) throw hf::ModelError("tau must be nonnegative");
    return absolute ? tau_flag : tau_flag / gen.norm_inf();
}

std::string heatdist_csv(const hf::ModelSpec& spec, const hf::HeatDistribution& fwd,
                         const hf::HeatDistribution& rev, double tau,
                         const std::string& run_hash) {
    hf::CsvBuilder csv;
    csv.header("heatflux v" HEATFLUX_VERSION " heat distribution");
    csv.header("run_hash: " + run_hash);
    csv.header("tau: " + hf::format_double(tau));
    csv.header("beta_S: " + hf::format_double(spec.beta_s) +
               " beta_B: " + hf::format_double(spec.beta_b) +
               " delta_beta: " + hf::format_double(spec.delta_beta()));
    csv.header("binning_tol: " + hf::format_double(fwd.support.tol));
    csv.header("sign convention: Q = E_n - E_m (bare) is heat absorbed by the system");
    csv.columns({"Q", "mass_forward", "mass_reverse", "log_ratio",
                 "expected_log_ratio", "residual"});
    for (int k = 0; k < fwd.support.size(); ++k) {
        const double q = fwd.support.values[k];
        const double mf = fwd.mass[k];
        const double mr = rev.mass[k];
        if (mf == 0.0 && mr == 0.0) continue;  // unreachable at this tau
        const double expected = q * spec.delta_beta();
        // forward/reverse ratio at the same Q; reverse mass equals forward
        // mass at -Q, so this is the fluctuation-relation column
        double log_ratio = std::numeric_limits<double>::quiet_NaN();
        double residual = std::numeric_limits<double>::quiet_NaN();
        if (mf > 1e-300 && mr > 1e-300) {
            log_ratio = std::log(mf) - std::log(mr);
            residual = log_ratio - expected;
        }
        csv.row({q, mf, mr, log_ratio, expected, residual});
    }
    return csv.str();
}

int cmd_validate(const std::string& config_path, const std::string& out_path) {
    // invariant violations become report entries (exit 1); malformed JSON or
    // schema errors still throw (exit 2)
    const LoadedConfig config = read_config(config_path, /*enforce_invariants=*/false);
    print_warnings(config);
    const hf::VerificationReport report = hf::validate_model(config.spec);
    std::cout << hf::summary_line(report) << '\n';
    for (const auto& item : report.items) {
        std::cout << "  " << (item.pass ? "ok   " : "FAIL ") << item.label;
        if (!item.note.empty()) std::cout << " (" << item.note << ")";
        std::cout << '\n';
    }
    if (!out_path.empty()) {
        hf::RunManifest manifest("validate", config.resolved);
        json j = report_envelope("validate", manifest);
        j["report"] = hf::to_json(report);
        j["pass"] = report.pass;
        manifest.emit(out_path, j.dump(2) + "\n");
    }
    return report.pass ? kExitPass : kExitCheckFailure;
}

int cmd_dump(const std::string& config_path, const std::string& out_dir) {
    const LoadedConfig config = read_config(config_path);
    print_warnings(config);
    const hf::RateMatrix rates = hf::jump_rates(config.spec);
    const hf::Generator gen = hf::build_generator(rates);
    const hf::DephasingTable table = hf::decay_rates(rates, config.spec);

    hf::RunManifest manifest("dump", config.resolved);
    const std::filesystem::path dir(out_dir);
    manifest.emit(dir / "a_matrix.csv",
                  hf::matrix_csv(gen.a, "A (population generator)", manifest.run_hash()));
    manifest.emit(dir / "rates.csv",
                  hf::matrix_csv(rates.rates, "R (jump rates, into row from column)",
                                 manifest.run_hash()));
    manifest.emit(dir / "gamma.csv",
                  hf::matrix_csv(table.gamma, "gamma (dephasing rates)", manifest.run_hash()));
    manifest.emit(dir / "omega.csv",
                  hf::matrix_csv(table.omega, "omega (effective gaps)", manifest.run_hash()));
    manifest.write(dir / "manifest.json");
    std::cout << "wrote a_matrix.csv rates.csv gamma.csv omega.csv manifest.json to "
              << out_dir << '\n';
    return kExitPass;
}

int cmd_evolve(const std::string& config_path, double tau_flag, bool tau_absolute,
               const std::string& initial, const std::string& out_path) {
    const LoadedConfig config = read_config(config_path);
    print_warnings(config);
    const hf::ModelSpec& spec = config.spec;
    const hf::Generator gen = hf::build_generator(hf::jump_rates(spec));
    const double tau = resolve_tau(tau_flag, tau_absolute, gen);

    hf::RunManifest manifest("evolve", config.resolved);
    manifest.note_tolerance("tau", tau);

    if (initial == "thermal" || initial.empty()) {
        const hf::Population v0 = hf::gibbs_populations(spec.bare_energies, spec.beta_s);
        const hf::StochasticMatrix p = hf::propagator(gen, spec, tau);
        const hf::Population v = hf::evolve_populations(p, v0);
        hf::CsvBuilder csv;
        csv.header("heatflux v" HEATFLUX_VERSION " populations");
        csv.header("run_hash: " + manifest.run_hash());
        csv.header("tau: " + hf::format_double(tau) + " initial: thermal(beta_S)");
        csv.columns({"state", "probability"});
        for (int m = 0; m < spec.dimension; ++m)
            csv.row({static_cast<double>(m), v(m)});
        manifest.emit(out_path, csv.str());
    } else {
        // initial state from file: {"populations": [...]} or
        // {"density_real": [[...]], "density_imag": [[...]]}
        std::ifstream in(initial);
        if (!in) throw hf::ModelError("cannot open initial-state file: " + initial);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw hf::ModelError(std::string("initial-state parse failure: ") + e.what());
        }
        if (j.contains("populations")) {
            const auto vals = j["populations"].get<std::vector<double>>();
            if (static_cast<int>(vals.size()) != spec.dimension)
                throw hf::ModelError("initial populations length != dimension");
            hf::Population v0 = Eigen::Map<const Eigen::VectorXd>(
                vals.data(), static_cast<Eigen::Index>(vals.size()));
            if (!hf::is_population(v0))
                throw hf::ModelError("initial populations must be nonnegative and sum to 1");
            const hf::StochasticMatrix p = hf::propagator(gen, spec, tau);
            const hf::Population v = hf::evolve_populations(p, v0);
            hf::CsvBuilder csv;
            csv.header("heatflux v" HEATFLUX_VERSION " populations");
            csv.header("run_hash: " + manifest.run_hash());
            csv.header("tau: " + hf::format_double(tau) + " initial: " + initial);
            csv.columns({"state", "probability"});
            for (int m = 0; m < spec.dimension; ++m)
                csv.row({static_cast<double>(m), v(m)});
            manifest.emit(out_path, csv.str());
        } else if (j.contains("density_real")) {
            const auto re = j["density_real"].get<std::vector<std::vector<double>>>();
            std::vector<std::vector<double>> im;
            if (j.contains("density_imag"))
                im = j["density_imag"].get<std::vector<std::vector<double>>>();
            Eigen::MatrixXcd rho0(spec.dimension, spec.dimension);
            for (int r = 0; r < spec.dimension; ++r) {
                if (static_cast<int>(re.at(r).size()) != spec.dimension)
                    throw hf::ModelError("density_real rows must have 'dimension' entries");
                for (int c = 0; c < spec.dimension; ++c) {
                    const double imag = im.empty() ? 0.0 : im.at(r).at(c);
                    rho0(r, c) = std::complex<double>(re[r][c], imag);
                }
            }
            const hf::VerificationReport density_check = hf::validate_density(rho0);
            if (!density_check.pass)
                throw hf::ModelError("initial density matrix invalid: " +
                                     hf::summary_line(density_check));
            const Eigen::MatrixXcd rho = hf::evolve_density(rho0, spec, gen, tau);
            hf::CsvBuilder csv;
            csv.header("heatflux v" HEATFLUX_VERSION " density matrix");
            csv.header("run_hash: " + manifest.run_hash());
            csv.header("tau: " + hf::format_double(tau) + " initial: " + initial);
            csv.columns({"row", "col", "re", "im"});
            for (int r = 0; r < spec.dimension; ++r)
                for (int c = 0; c < spec.dimension; ++c)
                    csv.row({static_cast<double>(r), static_cast<double>(c),
                             rho(r, c).real(), rho(r, c).imag()});
            manifest.emit(out_path, csv.str());
        } else {
            throw hf::ModelError(
                "initial-state file must contain 'populations' or 'density_real'");
        }
    }
    manifest.write(std::filesystem::path(out_path).parent_path() / "manifest.json");
    std::cout << "wrote " << out_path << '\n';
    return kExitPass;
}

int cmd_heatdist(const std::string& config_path, double tau_flag, bool tau_absolute,
                 const std::string& out_path) {
    const LoadedConfig config = read_config(config_path);
    print_warnings(config);
    const hf::ModelSpec& spec = config.spec;
    const hf::Generator gen = hf::build_generator(hf::jump_rates(spec));
    const double tau = resolve_tau(tau_flag, tau_absolute, gen);
    const hf::HeatSupport support = hf::heat_support(spec);
    const hf::StochasticMatrix p = hf::propagator(gen, spec, tau);
    const hf::HeatDistribution fwd = hf::forward_distribution(spec, p, support);
    const hf::HeatDistribution rev = hf::reverse_distribution(spec, p, support);

    hf::RunManifest manifest("heatdist", config.resolved);
    manifest.note_tolerance("binning_tol", support.tol);
    manifest.emit(out_path, heatdist_csv(spec, fwd, rev, tau, manifest.run_hash()));
    manifest.write(std::filesystem::path(out_path).parent_path() / "manifest.json");
    std::cout << "wrote " << out_path << '\n';
    return kExitPass;
}

int cmd_verify(const std::string& config_path, std::vector<std::string> checks,
               std::vector<double> tau_grid, bool tau_absolute, double tol,
               int s_max, const std::string& out_path) {
    const LoadedConfig config = read_config(config_path);
    print_warnings(config);
    const hf::ModelSpec& spec = config.spec;
    const hf::Generator gen = hf::build_generator(hf::jump_rates(spec));
    const hf::SpectralDecomposition decomp = hf::SpectralDecomposition::build(gen, spec);
    const hf::HeatSupport support = hf::heat_support(spec);
    const double norm = gen.norm_inf();
    if (tau_grid.empty()) tau_grid = {0.1, 0.5, 1.0, 2.0, 5.0};

    const std::vector<std::string> known{"fr", "db", "tail", "spectral", "powersym",
                                         "firstlaw"};
    if (checks.empty()) checks = known;
    for (const auto& c : checks) {
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw hf::ModelError("unknown check '" + c +
                                 "'; expected fr,db,tail,spectral,powersym,firstlaw");
    }
    const auto wants = [&](const std::string& name) {
        return std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    // the tail bound is only defined for beta_S >= beta_B; refuse up front
    if (wants("tail") && spec.delta_beta() < 0.0) {
        throw hf::RegimeError("inapplicable regime: requires beta_S >= beta_B");
    }

    hf::RunManifest manifest("verify", config.resolved);
    manifest.note_tolerance("tol", tol);

    std::vector<hf::VerificationReport> reports;
    if (wants("spectral")) {
        reports.push_back(hf::spectral_report(gen, spec).report);
    }
    if (wants("powersym")) {
        reports.push_back(hf::power_symmetry_check(gen, spec, s_max, 1.0 / norm));
    }
    for (double unit : tau_grid) {
        const double tau = tau_absolute ? unit : unit / norm;
        const hf::StochasticMatrix p = decomp.propagate(tau);
        const std::string suffix =
            " tau=" + hf::format_double(unit) + (tau_absolute ? "" : "/||A||");
        if (wants("fr")) {
            auto r = hf::fr_check(spec, p, support, tol);
            r.check += suffix;
            reports.push_back(std::move(r));
        }
        if (wants("db")) {
            auto r = hf::detailed_balance_check(p, spec, tol);
            r.check += suffix;
            reports.push_back(std::move(r));
        }
        const hf::HeatDistribution fwd = hf::forward_distribution(spec, p, support);
        if (wants("tail")) {
            std::vector<double> q_grid;
            for (double q : support.values)
                if (q <= 0.0) q_grid.push_back(q);
            auto r = hf::tail_bound_check(fwd, spec, q_grid);
            r.check += suffix;
            reports.push_back(std::move(r));
        }
        if (wants("firstlaw")) {
            const hf::MeanHeatResult mh = hf::mean_heat(fwd, spec, p);
            hf::VerificationReport r;
            r.check = "first_law" + suffix;
            r.tolerance = 1e-12;
            r.add_residual("mean heat vs energy change", mh.mean_heat, mh.energy_change,
                           mh.first_law_residual);
            if (spec.delta_beta() >= 0.0) {
                hf::CheckItem it;
                it.label = "mean heat sign (delta_beta >= 0)";
                it.measured = mh.mean_heat;
                it.residual = std::min(mh.mean_heat, 0.0);
                it.pass = mh.mean_heat >= -1e-12;
                r.add(std::move(it));
            }
            reports.push_back(std::move(r));
        }
    }

    bool all_pass = true;
    double worst = 0.0;
    std::string worst_check;
    for (const auto& r : reports) {
        std::cout << hf::summary_line(r) << '\n';
        all_pass = all_pass && r.pass;
        if (std::abs(r.worst_residual) > std::abs(worst)) {
            worst = r.worst_residual;
            worst_check = r.check;
        }
    }
    std::cout << (all_pass ? "VERIFY PASS" : "VERIFY FAIL") << " (worst residual "
              << worst << " in " << (worst_check.empty() ? "-" : worst_check) << ")\n";

    if (!out_path.empty()) {
        json j = report_envelope("verify", manifest);
        j["tau_grid"] = tau_grid;
        j["tau_units"] = tau_absolute ? "absolute" : "1/||A||_inf";
        j["tol"] = tol;
        json rs = json::array();
        for (const auto& r : reports) rs.push_back(hf::to_json(r));
        j["checks"] = std::move(rs);
        j["pass"] = all_pass;
        manifest.emit(out_path, j.dump(2) + "\n");
        manifest.write(std::filesystem::path(out_path).parent_path() / "manifest.json");
    }
    return all_pass ? kExitPass : kExitCheckFailure;
}

int cmd_sample(const std::string& config_path, std::int64_t n_traj, std::uint64_t seed,
               double tau_flag, bool tau_absolute, bool compare,
               const std::string& out_dir) {
    const LoadedConfig config = read_config(config_path);
    print_warnings(config);
    const hf::ModelSpec& spec = config.spec;
    const hf::RateMatrix rates = hf::jump_rates(spec);
    const hf::Generator gen = hf::build_generator(rates);
    const double tau = resolve_tau(tau_flag, tau_absolute, gen);
    const hf::HeatSupport support = hf::heat_support(spec);

    const hf::EmpiricalConditional cond =
        hf::empirical_conditional(rates, tau, n_traj, seed);
    const hf::EmpiricalHeat heat =
        hf::empirical_heat_distribution(spec, rates, support, tau, n_traj, seed);

    hf::RunManifest manifest("sample", config.resolved);
    manifest.note_seed(seed);
    manifest.note_tolerance("tau", tau);
    const std::filesystem::path dir(out_dir);

    {
        hf::CsvBuilder csv;
        csv.header("heatflux v" HEATFLUX_VERSION " empirical conditional probabilities");
        csv.header("run_hash: " + manifest.run_hash());
        csv.header("tau: " + hf::format_double(tau) + " trajectories_per_state: " +
                   std::to_string(n_traj) + " seed: " + std::to_string(seed));
        csv.columns({"end_state", "start_state", "count", "probability", "std_error"});
        for (int m = 0; m < spec.dimension; ++m)
            for (int n = 0; n < spec.dimension; ++n)
                csv.row({static_cast<double>(n), static_cast<double>(m),
                         static_cast<double>(cond.batch.counts(n, m)), cond.probs(n, m),
                         cond.std_error(n, m)});
        manifest.emit(dir / "empirical_conditional.csv", csv.str());
    }
    {
        hf::CsvBuilder csv;
        csv.header("heatflux v" HEATFLUX_VERSION " empirical heat distribution");
        csv.header("run_hash: " + manifest.run_hash());
        csv.header("tau: " + hf::format_double(tau) + " trajectories: " +
                   std::to_string(n_traj) + " seed: " + std::to_string(seed));
        csv.header("sign convention: Q = E_n - E_m (bare) is heat absorbed by the system");
        csv.columns({"Q", "count", "mass", "std_error"});
        for (int k = 0; k < support.size(); ++k)
            csv.row({support.values[k], static_cast<double>(heat.counts[k]),
                     heat.dist.mass[k], heat.std_error[k]});
        manifest.emit(dir / "empirical_heat.csv", csv.str());
    }

    int exit_code = kExitPass;
    if (compare) {
        const hf::StochasticMatrix p = hf::propagator(gen, spec, tau);
        const hf::HeatDistribution fwd = hf::forward_distribution(spec, p, support);
        const hf::VerificationReport rc = hf::oracle_compare(p.entries, cond);
        const hf::VerificationReport rh = hf::oracle_compare(fwd, heat);
        std::cout << hf::summary_line(rc) << '\n' << hf::summary_line(rh) << '\n';
        json j = report_envelope("sample", manifest);
        j["conditional"] = hf::to_json(rc);
        j["heat"] = hf::to_json(rh);
        j["pass"] = rc.pass && rh.pass;
        manifest.emit(dir / "zscore_report.json", j.dump(2) + "\n");
        if (!(rc.pass && rh.pass)) exit_code = kExitCheckFailure;
    }
    manifest.write(dir / "manifest.json");
    std::cout << "wrote empirical_conditional.csv empirical_heat.csv to " << out_dir
              << '\n';
    return exit_code;
}

int cmd_ensemble(int dim, int seeds, std::vector<double> tau_grid, double beta_low,
                 double beta_high, std::uint64_t master_seed,
                 const std::string& out_path) {
    hf::EnsembleOptions opts;
    opts.dims = {dim};
    opts.seeds = seeds;
    if (!tau_grid.empty()) opts.tau_units = std::move(tau_grid);
    opts.model.beta_low = beta_low;
    opts.model.beta_high = beta_high;
    opts.master_seed = master_seed;

    const hf::EnsembleResult result = hf::run_ensemble(opts);
    for (const auto& [name, report] : result.checks) {
        std::cout << hf::summary_line(report) << '\n';
    }
    std::cout << (result.pass ? "ENSEMBLE PASS" : "ENSEMBLE FAIL") << " ("
              << result.models_run << " models, " << result.taus_run
              << " propagators)\n";

    if (!out_path.empty()) {
        json cfg;
        cfg["dim"] = dim;
        cfg["seeds"] = seeds;
        cfg["tau_units"] = opts.tau_units;
        cfg["beta_low"] = beta_low;
        cfg["beta_high"] = beta_high;
        cfg["master_seed"] = master_seed;
        hf::RunManifest manifest("ensemble", cfg);
        manifest.note_seed(master_seed);
        json j = report_envelope("ensemble", manifest);
        j["result"] = hf::to_json(result);
        manifest.emit(out_path, j.dump(2) + "\n");
        manifest.write(std::filesystem::path(out_path).parent_path() / "manifest.json");
    }
    return result.pass ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heatflux: thermalizing-generator builder and heat-exchange "
                 "statistics verifier"};
    app.set_version_flag("--version", HEATFLUX_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string out_dir = ".";
    std::string initial = "thermal";
    double tau_flag = 1.0;
    bool tau_absolute = false;
    std::vector<std::string> checks;
    std::vector<double> tau_grid;
    double tol = 1e-9;
    int s_max = 10;
    std::int64_t n_traj = 100000;
    std::uint64_t seed = 1;
    bool compare = false;
    int dim = 4;
    int seeds = 50;
    double beta_low = 0.2;
    double beta_high = 3.0;

    auto* validate = app.add_subcommand("validate", "check model invariants");
    validate->add_option("--config", config_path, "model config JSON")->required();
    validate->add_option("--out", out_path, "JSON report path");

    auto* dump = app.add_subcommand("dump", "write A, R, gamma, omega as CSV");
    dump->add_option("--config", config_path)->required();
    dump->add_option("--out-dir", out_dir, "output directory");

    auto* evolve = app.add_subcommand("evolve", "evolve populations or a density matrix");
    evolve->add_option("--config", config_path)->required();
    evolve->add_option("--tau", tau_flag, "time in units of 1/||A||_inf")->required();
    evolve->add_flag("--tau-absolute", tau_absolute, "interpret --tau as absolute time");
    evolve->add_option("--initial", initial, "'thermal' or an initial-state JSON file");
    evolve->add_option("--out", out_path, "output CSV path")->required();

    auto* heatdist = app.add_subcommand("heatdist", "exact heat distribution CSV");
    heatdist->add_option("--config", config_path)->required();
    heatdist->add_option("--tau", tau_flag, "time in units of 1/||A||_inf")->required();
    heatdist->add_flag("--tau-absolute", tau_absolute);
    heatdist->add_option("--out", out_path, "output CSV path")->required();

    auto* verify = app.add_subcommand("verify", "run exact checks, exit 0 iff all pass");
    verify->add_option("--config", config_path)->required();
    verify->add_option("--checks", checks,
                       "subset of fr,db,tail,spectral,powersym,firstlaw")
        ->delimiter(',');
    verify->add_option("--tau-grid", tau_grid, "times in units of 1/||A||_inf")
        ->delimiter(',');
    verify->add_flag("--tau-absolute", tau_absolute);
    verify->add_option("--tol", tol, "log-residual tolerance for fr/db");
    verify->add_option("--s-max", s_max, "max power for the weighted symmetry check");
    verify->add_option("--out", out_path, "JSON report path");

    auto* sample = app.add_subcommand("sample", "Gillespie sampling oracle");
    sample->add_option("--config", config_path)->required();
    sample->add_option("--trajectories", n_traj, "trajectories per start state");
    sample->add_option("--seed", seed, "master seed");
    sample->add_option("--tau", tau_flag, "time in units of 1/||A||_inf")->required();
    sample->add_flag("--tau-absolute", tau_absolute);
    sample->add_flag("--compare", compare, "z-score report against the exact solution");
    sample->add_option("--out-dir", out_dir, "output directory");

    auto* ensemble = app.add_subcommand("ensemble", "randomized property sweep");
    ensemble->add_option("--dim", dim, "Hilbert-space dimension")->required();
    ensemble->add_option("--seeds", seeds, "number of random models");
    ensemble->add_option("--tau-grid", tau_grid, "times in units of 1/||A||_inf")
        ->delimiter(',');
    ensemble->add_option("--beta-low", beta_low);
    ensemble->add_option("--beta-high", beta_high);
    ensemble->add_option("--seed", seed, "master seed");
    ensemble->add_option("--out", out_path, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // CLI11 returns 0 for --help/--version; anything else is usage
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(config_path, out_path);
        if (app.got_subcommand(dump)) return cmd_dump(config_path, out_dir);
        if (app.got_subcommand(evolve))
            return cmd_evolve(config_path, tau_flag, tau_absolute, initial, out_path);
        if (app.got_subcommand(heatdist))
            return cmd_heatdist(config_path, tau_flag, tau_absolute, out_path);
        if (app.got_subcommand(verify))
            return cmd_verify(config_path, checks, tau_grid, tau_absolute, tol, s_max,
                              out_path);
        if (app.got_subcommand(sample))
            return cmd_sample(config_path, n_traj, seed, tau_flag, tau_absolute, compare,
                              out_dir);
        if (app.got_subcommand(ensemble))
            return cmd_ensemble(dim, seeds, tau_grid, beta_low, beta_high, seed, out_path);
    } catch (const hf::RegimeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hf::ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailure;
    }
    return kExitUsage;
}
