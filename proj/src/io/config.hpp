#pragma once

#include <string>

#include "../core/cost.hpp"
#include "../core/optimize.hpp"
#include "../core/simulate.hpp"
#include "../core/types.hpp"

namespace ias::io {

// Thrown on malformed JSON; distinguished from ValidationError so the CLI
// can map them to different exit codes.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Everything one experiment needs, loaded from a single JSON file so runs
// are reproducible from one artifact.
struct RunConfig {
    ModelParams model;
    Thresholds thresholds;
    SimConfig sim;
    CostConfig cost;        // psa_init/horizon derived from sim
    NoiseSettings noise;
    OptConfig opt;
    // validation section
    double fd_delta_rel = 1e-4;
    int fd_max_retries = 3;
    int unbiasedness_paths = 100;
    // output section
    std::string output_dir = "out";
    bool timestamp = true;
    int threads = 1;
    std::string patient_csv;  // optional; required by the ingest verb

    void validate() const;
};

// Parses and fully validates a config file. Unknown keys are rejected so
// typos surface instead of silently using defaults.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

// The config re-serialized (defaults filled in), for provenance copies.
std::string config_to_json(const RunConfig& rc);

}  // namespace ias::io
