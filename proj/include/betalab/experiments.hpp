#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace betalab::experiments {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Kind {
    HermiteCheck,
    CharpolySample,
    PhaseTrace,
    FieldsCov,
    VarianceSlope,
    ZetaRatio,
    SineSim,
    SinePoints,
    AirySim,
    EdgeCompare,
    OmegaTightness,
};

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& name);

// Flat key-value experiment description. Parsed from a config file (one
// `key = value` per line, '#' comments) or assembled by the CLI.
struct ExperimentConfig {
    Kind kind = Kind::HermiteCheck;
    double beta = 2.0; // parse "inf" to infinity
    std::vector<long long> n_list;  // matrix sizes
    std::vector<long long> degree_list; // hermite degrees
    double z = 0.3;
    double x = 0.2;
    std::vector<double> lambda_list;
    long long replicates = 1;
    std::uint64_t seed = 1;
    double t_exclusion = 1.0;
    long long steps = 4000;
    double t_end = 1.0;
    double window = 5.0;   // sine-points window [0, window]
    int sign = 1;          // edge-compare sign
    double t_max = 8.0;
    double t_min = -10.0;
    std::string out = "out";
    int threads = 0;       // 0 = hardware concurrency
    int fail_inject_percent = 0; // test hook: force phase-branch failures

    // raw key echo for the manifest
    std::map<std::string, std::string> raw;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// exit codes: 0 success, 2 config error, 3 numerical failure
int run(const ExperimentConfig& config);

// Per-replicate seed: pure function of (master seed, replicate index); adding
// replicates never shifts existing ones.
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index);

// Deterministic parallel map: runs fn(replicate_index) on `threads` workers
// and collects results in index order; the merged output is independent of
// the parallel degree. Throws the first per-replicate exception if more than
// max_failure_fraction of replicates fail.
struct FarmReport {
    long long attempted = 0;
    long long failed = 0;
    std::vector<long long> failed_indices;
};

} // namespace betalab::experiments
