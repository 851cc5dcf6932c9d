#include "heatflux/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "heatflux/rng.hpp"

namespace heatflux {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number()) {
        throw ModelError("config field '" + field + "' missing or not a number");
    }
    return j[field].get<double>();
}

Eigen::VectorXd read_energy_array(const json& j, const std::string& field, int dim) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw ModelError("config field '" + field + "' missing or not an array");
    }
    const auto& arr = j[field];
    if (static_cast<int>(arr.size()) != dim) {
        std::ostringstream msg;
        msg << "config field '" << field << "' has " << arr.size()
            << " entries, expected dimension " << dim;
        throw ModelError(msg.str());
    }
    Eigen::VectorXd out(dim);
    for (int i = 0; i < dim; ++i) {
        if (!arr[i].is_number()) {
            throw ModelError("config field '" + field + "' entry is not a number");
        }
        out(i) = arr[i].get<double>();
    }
    return out;
}

Eigen::MatrixXd read_coupling(const json& j, int dim,
                              std::vector<std::string>* warnings) {
    if (!j.contains("coupling") || !j["coupling"].is_object()) {
        throw ModelError("config field 'coupling' missing or not an object");
    }
    const auto& c = j["coupling"];
    const std::string type = c.value("type", std::string{});
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);

    if (type == "explicit") {
        if (!c.contains("matrix") || !c["matrix"].is_array() ||
            static_cast<int>(c["matrix"].size()) != dim) {
            throw ModelError("coupling.matrix must be a row-major array of 'dimension' rows");
        }
        bool diagonal_seen = false;
        for (int r = 0; r < dim; ++r) {
            const auto& row = c["matrix"][r];
            if (!row.is_array() || static_cast<int>(row.size()) != dim) {
                throw ModelError("coupling.matrix rows must each have 'dimension' entries");
            }
            for (int k = 0; k < dim; ++k) {
                const double v = row[k].get<double>();
                if (r == k) {
                    if (v != 0.0) diagonal_seen = true;
                    continue;  // jump operators exist only for m != n
                }
                m(r, k) = v;
            }
        }
        if (diagonal_seen && warnings != nullptr) {
            warnings->push_back("coupling diagonal entries are ignored (no m=n jump operators)");
        }
    } else if (type == "uniform") {
        const double value = require_number(c, "value");
        if (value <= 0.0) throw ModelError("coupling.value must be > 0");
        m.setConstant(value);
        m.diagonal().setZero();
    } else if (type == "random") {
        if (!c.contains("seed") || !c["seed"].is_number_unsigned()) {
            throw ModelError("coupling.seed missing or not an unsigned integer");
        }
        const auto seed = c["seed"].get<std::uint64_t>();
        const double low = require_number(c, "low");
        const double high = require_number(c, "high");
        if (low <= 0.0) throw ModelError("coupling.low must be > 0 to keep entries positive");
        if (high < low) throw ModelError("coupling.high must be >= coupling.low");
        RngStream stream = make_stream(seed, /*domain=*/0x434f5550ULL, 0);  // "COUP"
        Eigen::MatrixXd x(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int k = 0; k < dim; ++k) x(r, k) = stream.uniform(low, high);
        m = 0.5 * (x + x.transpose());
        m.diagonal().setZero();
    } else {
        throw ModelError("coupling.type must be one of \"explicit\", \"uniform\", \"random\"");
    }
    return m;
}

void check_or_throw(const VerificationReport& report) {
    for (const auto& item : report.items) {
        if (!item.pass) {
            throw ModelError(item.label + (item.note.empty() ? "" : ": " + item.note));
        }
    }
}

}  // namespace

ModelSpec parse_model(const std::string& config_text,
                      std::vector<std::string>* warnings) {
    json j;
    try {
        j = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("config parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ModelError("config must be a JSON object");

    ModelSpec spec;
    if (!j.contains("dimension") || !j["dimension"].is_number_integer()) {
        throw ModelError("config field 'dimension' missing or not an integer");
    }
    spec.dimension = j["dimension"].get<int>();
    if (spec.dimension < 2) throw ModelError("dimension must be >= 2");

    spec.bare_energies = read_energy_array(j, "energies", spec.dimension);
    spec.effective_energies = j.contains("effective_energies")
                                  ? read_energy_array(j, "effective_energies", spec.dimension)
                                  : spec.bare_energies;
    spec.beta_s = require_number(j, "beta_S");
    spec.beta_b = require_number(j, "beta_B");
    spec.coupling = read_coupling(j, spec.dimension, warnings);

    // normalize: only gaps matter, and the shift keeps e^{beta E / 2} in range
    spec.bare_energies.array() -= spec.bare_energies.minCoeff();
    spec.effective_energies.array() -= spec.effective_energies.minCoeff();
    return spec;
}

ModelSpec load_model(const std::string& config_text,
                     std::vector<std::string>* warnings) {
    ModelSpec spec = parse_model(config_text, warnings);
    check_or_throw(validate_model(spec));
    return spec;
}

Population gibbs_populations(const Eigen::VectorXd& energies, double beta) {
    if (beta <= 0.0) throw ModelError("beta must be positive");
    const double shift = energies.minCoeff();
    Population p = (-beta * (energies.array() - shift)).exp();
    return p / p.sum();
}

int coupling_components(const Eigen::MatrixXd& coupling) {
    const int dim = static_cast<int>(coupling.rows());
    std::vector<int> label(dim, -1);
    int components = 0;
    for (int start = 0; start < dim; ++start) {
        if (label[start] >= 0) continue;
        std::vector<int> stack{start};
        label[start] = components;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            for (int other = 0; other < dim; ++other) {
                if (other != node && label[other] < 0 && coupling(node, other) > 0.0) {
                    label[other] = components;
                    stack.push_back(other);
                }
            }
        }
        ++components;
    }
    return components;
}

VerificationReport validate_model(const ModelSpec& spec) {
    VerificationReport report;
    report.check = "model_validation";
    report.tolerance = 0.0;

    const int dim = spec.dimension;
    {
        CheckItem it;
        it.label = "dimension >= 2";
        it.measured = dim;
        it.expected = 2;
        it.pass = dim >= 2;
        report.add(std::move(it));
        if (dim < 2) return report;  // nothing else is well-defined
    }
    {
        CheckItem it;
        it.label = "bare_energies length";
        it.measured = static_cast<double>(spec.bare_energies.size());
        it.expected = dim;
        it.pass = spec.bare_energies.size() == dim;
        report.add(std::move(it));
        if (!report.pass) return report;
    }
    {
        CheckItem it;
        it.label = "effective_energies length";
        it.measured = static_cast<double>(spec.effective_energies.size());
        it.expected = dim;
        it.pass = spec.effective_energies.size() == dim;
        report.add(std::move(it));
        if (!report.pass) return report;
    }
    {
        // strictly increasing; equal adjacent values are a degenerate spectrum
        double min_gap = std::numeric_limits<double>::infinity();
        bool degenerate = false;
        bool decreasing = false;
        for (int i = 0; i + 1 < dim; ++i) {
            const double gap = spec.bare_energies(i + 1) - spec.bare_energies(i);
            min_gap = std::min(min_gap, gap);
            if (gap == 0.0) degenerate = true;
            if (gap < 0.0) decreasing = true;
        }
        CheckItem it;
        it.label = degenerate ? "degenerate spectrum" : "bare_energies strictly increasing";
        it.measured = min_gap;
        it.pass = !degenerate && !decreasing;
        if (degenerate) it.note = "bare_energies contains equal adjacent values";
        if (decreasing) it.note = "bare_energies not sorted ascending";
        report.add(std::move(it));
    }
    {
        CheckItem it;
        it.label = "beta_S positive";
        it.measured = spec.beta_s;
        it.pass = spec.beta_s > 0.0;
        if (!it.pass) it.note = "beta_S must be > 0";
        report.add(std::move(it));
    }
    {
        CheckItem it;
        it.label = "beta_B positive";
        it.measured = spec.beta_b;
        it.pass = spec.beta_b > 0.0;
        if (!it.pass) it.note = "beta_B must be > 0";
        report.add(std::move(it));
    }
    if (spec.coupling.rows() != dim || spec.coupling.cols() != dim) {
        CheckItem it;
        it.label = "coupling shape";
        it.pass = false;
        it.note = "coupling must be dimension x dimension";
        report.add(std::move(it));
        return report;
    }
    {
        double asym = 0.0;
        for (int m = 0; m < dim; ++m)
            for (int n = m + 1; n < dim; ++n)
                asym = std::max(asym, std::abs(spec.coupling(m, n) - spec.coupling(n, m)));
        CheckItem it;
        it.label = "coupling asymmetry";
        it.measured = asym;
        it.expected = 0.0;
        it.residual = asym;
        it.pass = asym == 0.0;
        if (!it.pass) it.note = "coupling must satisfy C_mn = C_nm exactly";
        report.add(std::move(it));
    }
    {
        double min_offdiag = std::numeric_limits<double>::infinity();
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n)
                if (m != n) min_offdiag = std::min(min_offdiag, spec.coupling(m, n));
        CheckItem it;
        it.label = "negative coupling";
        it.measured = min_offdiag;
        it.pass = min_offdiag >= 0.0;
        if (!it.pass) it.note = "coupling entries must be >= 0";
        report.add(std::move(it));
    }
    {
        const int components = coupling_components(spec.coupling);
        CheckItem it;
        it.label = "coupling graph disconnected";
        it.measured = components;
        it.expected = 1;
        it.pass = components == 1;
        if (!it.pass) it.note = "positive couplings must connect all levels";
        report.add(std::move(it));
    }
    {
        const double range = spec.bare_energies.maxCoeff() - spec.bare_energies.minCoeff();
        const double worst = std::max(spec.beta_b, spec.beta_s) * range;
        CheckItem it;
        it.label = "overflow guard";
        it.measured = worst;
        it.expected = kOverflowGuard;
        it.pass = worst <= kOverflowGuard;
        if (!it.pass) it.note = "beta*(E_max-E_min) exceeds 300; exponent out of double range";
        report.add(std::move(it));
    }
    return report;
}

bool is_population(const Population& v, double tol) {
    if (v.size() == 0) return false;
    if (v.minCoeff() < 0.0) return false;
    return std::abs(v.sum() - 1.0) <= tol;
}

VerificationReport validate_density(const Eigen::MatrixXcd& rho) {
    VerificationReport report;
    report.check = "density_validation";
    report.tolerance = 1e-12;

    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    report.add_residual("hermiticity", herm, 0.0, herm);

    const double trace_dev = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    report.add_residual("trace 1", 1.0 - trace_dev, 1.0, trace_dev);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (rho + rho.adjoint()));
    const double min_eig = solver.eigenvalues().minCoeff();
    CheckItem it;
    it.label = "positive semidefinite";
    it.measured = min_eig;
    it.expected = 0.0;
    it.residual = std::min(min_eig, 0.0);
    it.pass = min_eig >= -1e-10;
    report.add(std::move(it));
    return report;
}

}  // namespace heatflux
