#include "heatflux/report.hpp"

#include <cmath>
#include <sstream>

namespace heatflux {

nlohmann::json to_json(const VerificationReport& report, bool with_items) {
    nlohmann::json j;
    j["check"] = report.check;
    j["pass"] = report.pass;
    j["tolerance"] = report.tolerance;
    j["worst_residual"] = report.worst_residual;
    j["worst_label"] = report.worst_label;
    j["items_total"] = report.items.size();
    j["items_failed"] = [&] {
        std::size_t failed = 0;
        for (const auto& it : report.items)
            if (!it.pass) ++failed;
        return failed;
    }();
    if (!report.skipped.empty()) j["skipped"] = report.skipped;
    if (with_items) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& it : report.items) {
            nlohmann::json ji;
            ji["label"] = it.label;
            ji["measured"] = it.measured;
            ji["expected"] = it.expected;
            ji["residual"] = it.residual;
            ji["pass"] = it.pass;
            if (!it.note.empty()) ji["note"] = it.note;
            items.push_back(std::move(ji));
        }
        j["items"] = std::move(items);
    }
    return j;
}

std::string summary_line(const VerificationReport& report) {
    std::ostringstream os;
    os << report.check << ": " << (report.pass ? "PASS" : "FAIL")
       << " (worst |residual| = " << std::abs(report.worst_residual);
    if (!report.worst_label.empty()) os << " at " << report.worst_label;
    os << ", tol = " << report.tolerance << ", items = " << report.items.size();
    if (!report.skipped.empty()) os << ", skipped = " << report.skipped.size();
    os << ")";
    return os.str();
}

}  // namespace heatflux
