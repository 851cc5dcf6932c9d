// report.hpp — Structured pass/fail reports with per-item residuals

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

namespace heatflux {

// One measured quantity inside a check: a pair, a support point, an
// eigenvalue, ... `label` identifies it, `residual` is compared against
// the check tolerance.
struct CheckItem {
    std::string label;
    double measured{0.0};
    double expected{0.0};
    double residual{0.0};
    bool pass{true};
    std::string note;
};

struct VerificationReport {
    std::string check;
    double tolerance{0.0};
    bool pass{true};
    double worst_residual{0.0};
    std::string worst_label;
    std::vector<CheckItem> items;
    // entries excluded from comparison (underflow, zero mass); listed, not failed
    std::vector<std::string> skipped;

    void add(CheckItem item) {
        if (std::abs(item.residual) > std::abs(worst_residual)) {
            worst_residual = item.residual;
            worst_label = item.label;
        }
        pass = pass && item.pass;
        items.push_back(std::move(item));
    }

    void add_residual(std::string label, double measured, double expected,
                      double residual) {
        CheckItem it;
        it.label = std::move(label);
        it.measured = measured;
        it.expected = expected;
        it.residual = residual;
        it.pass = std::abs(residual) <= tolerance;
        add(std::move(it));
    }

    void skip(std::string why) { skipped.push_back(std::move(why)); }
};

nlohmann::json to_json(const VerificationReport& report, bool with_items = true);

// Render "check-name: PASS (worst |residual| = ... <= tol)" one-liner.
std::string summary_line(const VerificationReport& report);

}  // namespace heatflux
