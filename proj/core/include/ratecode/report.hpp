#ifndef RATECODE_REPORT_HPP_
#define RATECODE_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratecode/types.hpp"

namespace ratecode {

/// One batch experiment. Field names mirror the CLI flags; unset strings are
/// empty and unset numbers keep their zero defaults. A config file provides
/// the base values and flags override individual fields.
struct ExperimentConfig {
    std::string task;  // segment | classify | classify-kernel | mcr2-eval |
                       // mcr2-train | gen | select-eps
    double epsilon = 0.0;
    std::string kernel;  // "linear" | "poly:<degree>" | "rbf:<gamma>"
    std::string input;
    std::string labels;
    std::string test;
    std::string test_labels;
    std::string output;       // report path; empty means stdout only
    std::string data_out;     // gen: generated samples CSV
    std::string labels_out;   // gen: generated labels CSV
    std::string curve_out;    // optional plot-data CSV
    std::string features_out; // mcr2-train: optimized features CSV
    std::uint64_t seed = 0;
    std::string norm = "sphere";  // sphere | frobenius
    std::vector<double> eps_grid;
    std::string prior = "empirical";  // empirical | uniform
    int steps = 500;
    double step_size = 1.0;
    Index m = 0;  // gen: sample count
    bool has_header = false;
    nlohmann::json mixture;  // gen: mixture or two-rings description

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    /// Reads a JSON config file.
    static ExperimentConfig load(const std::string& path);
};

/// Runs one experiment and returns the report (schema_version, config echo,
/// results, checks, timings). Side files named in the config (generated data,
/// curves, optimized features) are written during the run. All numeric
/// results are deterministic given the config and seed.
nlohmann::json run(const ExperimentConfig& config);

/// Serializes and writes a report; the JSON text uses shortest round-trip
/// number formatting.
void write_report(const std::string& path, const nlohmann::json& report);

}  // namespace ratecode

#endif  // RATECODE_REPORT_HPP_
