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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "manidisc/baselines.hpp"
#include "manidisc/budget.hpp"
#include "manidisc/cmd.hpp"
#include "manidisc/geometry.hpp"
#include "manidisc/remd.hpp"

namespace manidisc::harness {

struct DatasetConfig {
    std::size_t train_per_class = 100;
    std::size_t test_per_class = 100;
    double noise = 0.0;  // std-dev of the isotropic Gaussian ambient noise
};

struct ProjectionSettings {
    GridSpec working = GridSpec::Working();
    GridSpec oracle = GridSpec::Oracle();
    DescentConfig descent;
    DescentConfig oracle_descent = DescentConfig::Oracle();
};

/// Algorithm names: random, regular, remd, cmd, mdsa, mdpa, dmd.
struct AlgorithmSpec {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    int repetitions = 1;
    std::filesystem::path output_dir = "results";
    std::vector<Manifold> manifolds;
    DatasetConfig dataset;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::size_t> budgets;  // samples per manifold; B = N * M
    ProjectionSettings projection;
    bool write_samples = true;
};

/// Throws ConfigError with the offending key on malformed input. Relative
/// pattern file paths resolve against `base_dir`.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

Manifold ParseManifold(const nlohmann::json& decl, int default_id, const std::filesystem::path& base_dir = {});

bool IsKnownAlgorithm(const std::string& name);

RemdConfig ParseRemdConfig(const nlohmann::json& params, const ProjectionSettings& projection);
CmdConfig ParseCmdConfig(const nlohmann::json& params, const ProjectionSettings& projection);
AnnealingSchedule ParseAnnealingSchedule(const nlohmann::json& params);
/// Budget thresholds only; total_budget and dense grid size come from the run.
BudgetConfig ParseBudgetConfig(const nlohmann::json& params);

/// Params of `name`, overlaid on the params of the `cmd` entry when present,
/// so budget algorithms share the CMD settings unless they override them.
nlohmann::json MergedParams(const ExperimentConfig& cfg, const AlgorithmSpec& spec);

}  // namespace manidisc::harness
