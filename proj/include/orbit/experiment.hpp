#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbit/srs.hpp"

namespace orbit {

/// One preset: a figure-style sweep at desk scale. Loaded from JSON.
struct ExperimentConfig {
    std::string name;
    std::string kind;         // quality | entanglement | gap | wordcount | kbbench
    std::string system_text;  // inline system description
    std::vector<int> L_list;
    std::vector<double> taus;
    std::vector<int> chis;
    double dt = 0.5;
    double eps_energy = 2e-4;
    double eps_nc = 0.05;
    int n_samples = 1000;
    int per_set = 2;
    std::uint64_t seed = 1;
    std::vector<std::string> orders;  // kbbench alphabet permutations
    std::string notes;                // includes the scale-down statement
};

ExperimentConfig load_config(const std::string& path);

/// Runs the preset and writes records.jsonl, per-figure CSV files, and
/// manifest.json into outdir. All JSON/CSV outputs are deterministic per
/// seed; wall times and timestamps are confined to the manifest. Per-cell
/// failures are recorded in the manifest without aborting the batch.
/// The ORBIT_JOBS environment variable caps concurrent cells (default 1).
void run_experiment(const ExperimentConfig& cfg, const std::string& outdir);

}  // namespace orbit
