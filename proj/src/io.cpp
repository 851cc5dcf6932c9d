#include "heatflux/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "heatflux/version.hpp"

namespace heatflux {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void CsvBuilder::columns(const std::vector<std::string>& names) {
    std::ostringstream os;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ',';
        os << names[i];
    }
    rows_.push_back(os.str());
}

void CsvBuilder::row(const std::vector<double>& values) {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_double(values[i]);
    }
    rows_.push_back(os.str());
}

std::string CsvBuilder::str() const {
    std::ostringstream os;
    for (const auto& line : header_) os << "# " << line << '\n';
    for (const auto& line : rows_) os << line << '\n';
    return os.str();
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& name,
                       const std::string& run_hash) {
    CsvBuilder csv;
    csv.header("heatflux v" HEATFLUX_VERSION " matrix: " + name);
    csv.header("run_hash: " + run_hash);
    csv.header("rows: " + std::to_string(m.rows()) + " cols: " + std::to_string(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row(m.cols());
        for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
        csv.row(row);
    }
    return csv.str();
}

RunManifest::RunManifest(std::string subcommand, nlohmann::json resolved_config)
    : subcommand_(std::move(subcommand)), config_(std::move(resolved_config)) {
    run_hash_ = hash_hex(fnv1a(subcommand_ + "\n" + config_.dump()));
}

void RunManifest::emit(const std::filesystem::path& path, const std::string& content) {
    write_file_atomic(path, content);
    files_.push_back(path.string());
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["tool"] = "heatflux";
    j["version"] = HEATFLUX_VERSION;
    j["subcommand"] = subcommand_;
    j["run_hash"] = run_hash_;
    j["config"] = config_;
    j["seeds"] = seeds_;
    j["tolerances"] = tolerances_;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : files_) {
        files.push_back({{"path", f}, {"header_hash", run_hash_}});
    }
    j["files"] = std::move(files);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
    write_file_atomic(path, to_json().dump(2) + "\n");
}

}  // namespace heatflux
