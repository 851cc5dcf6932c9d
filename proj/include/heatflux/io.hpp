// io.hpp — Deterministic CSV/JSON emission: 17-significant-digit numbers,
// '#' comment headers carrying the run hash, atomic writes, run manifest

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace heatflux {

// shortest round-trip-exact decimal form (17 significant digits)
std::string format_double(double value);

// FNV-1a 64-bit, hex-encoded; keys every emitted file to its run
std::uint64_t fnv1a(const std::string& data);
std::string hash_hex(std::uint64_t h);

// write via temp file + rename so readers never observe partial output
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Accumulates '#'-prefixed header lines and data rows; all numbers routed
// through format_double so identical runs emit identical bytes.
class CsvBuilder {
public:
    void header(const std::string& line) { header_.push_back(line); }
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line) { rows_.push_back(line); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& name,
                       const std::string& run_hash);

// Run manifest: resolved config echo, version, seeds/tolerances, emitted
// files. Timestamped; data files themselves stay byte-reproducible.
class RunManifest {
public:
    RunManifest(std::string subcommand, nlohmann::json resolved_config);

    const std::string& run_hash() const { return run_hash_; }
    void note_seed(std::uint64_t seed) { seeds_.push_back(seed); }
    void note_tolerance(const std::string& name, double value) {
        tolerances_[name] = value;
    }

    // registers the file and writes it atomically
    void emit(const std::filesystem::path& path, const std::string& content);

    void write(const std::filesystem::path& path) const;
    nlohmann::json to_json() const;

private:
    std::string subcommand_;
    nlohmann::json config_;
    std::string run_hash_;
    std::vector<std::uint64_t> seeds_;
    std::map<std::string, double> tolerances_;
    std::vector<std::string> files_;
};

}  // namespace heatflux
