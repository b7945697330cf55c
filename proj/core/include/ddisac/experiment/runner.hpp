#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ddisac/experiment/config.hpp"

namespace ddisac::experiment {

struct ResultRecord {
    std::string experiment;
    std::string point;   // parameter point, "key=value;key=value"
    std::string metric;
    double value = 0.0;
    long trials = 1;
    double ci95 = 0.0;
    bool has_ci = false;
};

struct RunOutput {
    std::vector<ResultRecord> records;
};

// Execute the campaign. Trials split across `threads` workers with seeds
// derived from (seed, trial counter); the reduction is order-independent, so
// the output is identical for any thread count.
RunOutput run(const ExperimentConfig& cfg, int threads = 1);

// Run and persist: <out>/<name>_results.csv and <out>/<name>_summary.json.
// Returns the paths written.
std::vector<std::string> run_to_files(const ExperimentConfig& cfg, int threads = 1);

void write_csv(const std::vector<ResultRecord>& records, const std::string& path);
void write_summary(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records,
                   const std::string& path);

// Deterministic mean/CI aggregation helper shared by the experiments.
struct Aggregate {
    double mean = 0.0;
    double ci95 = 0.0;
    long n = 0;
};
Aggregate aggregate(const std::vector<double>& samples);

// Run `trials` independent jobs over `threads` workers. Results land in a
// vector indexed by trial, so the reduction order never depends on timing.
void parallel_trials(int trials, int threads, const std::function<void(int)>& body);

}  // namespace ddisac::experiment
