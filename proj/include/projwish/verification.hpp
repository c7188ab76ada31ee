// Statistical test harness: declarative experiment specs, the four
// experiment runners (Fréchet mean convergence, radial KS, group
// invariance, trace-form density consistency) and report emission.

#pragma once

#include <string>
#include <vector>

#include "projwish/densities.hpp"
#include "projwish/io.hpp"
#include "projwish/stats.hpp"

namespace projwish {

struct ExperimentSpec {
    std::string id;
    std::string type;  // frechet | radial_ks | invariance | density_consistency
    WishartParams params;
    std::int64_t sample_count = 0;  // >= 100
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double alpha = 0.01;
    double tolerance = 0.02;            // frechet mean-distance bound
    double ratio_low = 0.3;             // frechet N vs N/4 probe
    double ratio_high = 0.8;
    bool negative_control = false;
    int reference_n = 0;                // density_consistency; 0 means n + 2
    std::string output_prefix;          // CSV/report file stem, defaults to id

    /// Parses one experiment object. "sigma" accepts "identity", "random"
    /// (derived deterministically from the seed) or a matrix object.
    static ExperimentSpec from_json(const Json& j);
};

/// Parses {"experiments": [...], "threads": t} and checks id uniqueness.
struct SuiteConfig {
    std::vector<ExperimentSpec> experiments;
    int threads = 4;

    static SuiteConfig from_json(const Json& j);
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ExperimentReport {
    std::string id;
    std::string type;
    bool passed = false;
    std::vector<CheckResult> checks;
    Json stats = Json::object();
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string version;
    std::string timestamp;
    double wall_seconds = 0.0;
    /// CSV side files, one per entry: {file name stem, CSV text}.
    std::vector<std::pair<std::string, std::string>> csv_files;

    Json to_json() const;
};

ExperimentReport run_frechet_experiment(const ExperimentSpec& spec);
ExperimentReport run_radial_ks_experiment(const ExperimentSpec& spec);
ExperimentReport run_invariance_experiment(const ExperimentSpec& spec);
ExperimentReport run_density_consistency_experiment(const ExperimentSpec& spec);

/// Dispatches on spec.type.
ExperimentReport run_experiment(const ExperimentSpec& spec);

struct SuiteResult {
    std::vector<ExperimentReport> reports;  // in spec order
    bool all_passed = false;
    double wall_seconds = 0.0;
};

/// Runs every experiment (up to `threads` concurrently, each on its own
/// streams) and, when out_dir is nonempty, writes per-experiment report
/// JSON, CSV side files and a suite summary under it.
SuiteResult run_suite(const SuiteConfig& config, const std::string& out_dir);

/// ISO-8601 provenance stamp; honors SOURCE_DATE_EPOCH so archived runs
/// can be byte-reproducible.
std::string provenance_timestamp();

/// Writes content to path via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace projwish
