// Copyright 2026 the manidisc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manidisc/classification.hpp"
#include "manidisc/harness/config.hpp"

namespace manidisc::harness {

/// One (algorithm, budget, repetition, manifold) cell. manifold is the id, or
/// "all" for the joint classification row.
struct ResultRow {
    std::size_t algorithm_index = 0;
    std::string algorithm;
    std::size_t budget = 0;
    int repetition = 0;
    std::string manifold;
    std::size_t n_samples = 0;
    std::optional<double> registration_error;
    std::optional<double> closest_share;
    std::optional<double> classification_rate;
    std::optional<double> test_epsilon;
    std::optional<double> train_epsilon;
    std::optional<double> train_epsilon_init;
    std::string status = "ok";
};

struct TraceRow {
    std::string algorithm;
    std::size_t budget = 0;
    int repetition = 0;
    std::string manifold;
    std::size_t step = 0;
    double value = 0.0;
};

struct TimingRow {
    std::string algorithm;
    std::size_t budget = 0;
    int repetition = 0;
    double seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ResultRow> rows;  // ordered by (algorithm, budget, repetition, manifold)
    std::vector<TraceRow> traces;
    std::vector<TimingRow> timings;
    /// Sample sets and transfer logs, path relative to the output directory.
    std::vector<std::pair<std::string, std::string>> files;
    std::size_t failures = 0;
};

/// Seeds: repetition r uses MixSeed(cfg.seed, r) for its dataset; every
/// algorithm stream is derived from that value, so reruns match exactly.
/// Failures inside one cell are recorded in its rows and the run continues.
ExperimentReport RunExperiment(const ExperimentConfig& cfg);

/// Runs one algorithm at N samples per manifold on the dataset of
/// repetition `rep`, exactly as RunExperiment would.
MultiSampleSet Discretize(const ExperimentConfig& cfg, const std::string& algorithm, std::size_t n, int rep);

std::string ResultsCsv(const ExperimentReport& report);
/// Means over successful repetitions per (algorithm, budget, manifold).
std::string SummaryCsv(const ExperimentReport& report);
std::string TracesCsv(const ExperimentReport& report);
std::string TimingsCsv(const ExperimentReport& report);

/// results.csv, summary.csv, traces.csv, timings.csv and the extra files.
void WriteReport(const std::filesystem::path& output_dir, const ExperimentReport& report);

}  // namespace manidisc::harness
