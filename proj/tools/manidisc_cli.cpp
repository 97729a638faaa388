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

// Command-line front end: dataset, discretize, evaluate, run, compare.
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manidisc/errors.hpp"
#include "manidisc/harness/config.hpp"
#include "manidisc/harness/csv_io.hpp"
#include "manidisc/harness/dataset.hpp"
#include "manidisc/harness/experiment.hpp"
#include "manidisc/harness/metrics.hpp"
#include "manidisc/simd/kernels.hpp"

namespace {

namespace fs = std::filesystem;
using namespace manidisc;
using namespace manidisc::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

PointCloud TestCloud(const ExperimentConfig& cfg, const std::string& test_path, int rep) {
    if (!test_path.empty()) {
        return ReadCloud(test_path);
    }
    return GenerateDataset(cfg.manifolds, cfg.dataset, MixSeed(cfg.seed, static_cast<std::uint64_t>(rep))).test;
}

int CmdDataset(const std::string& config, const std::string& out, int rep) {
    const ExperimentConfig cfg = LoadExperimentConfig(config);
    const Dataset data = GenerateDataset(cfg.manifolds, cfg.dataset, MixSeed(cfg.seed, static_cast<std::uint64_t>(rep)));
    const fs::path dir = out.empty() ? cfg.output_dir : fs::path(out);
    WriteCloud(dir / "train.csv", data.train);
    WriteCloud(dir / "test.csv", data.test);
    std::cout << "wrote " << (dir / "train.csv").string() << " (" << data.train.size() << " points) and "
              << (dir / "test.csv").string() << " (" << data.test.size() << " points)\n";
    return kExitOk;
}

int CmdDiscretize(const std::string& config, const std::string& algo, std::size_t budget, int rep,
                  const std::string& out) {
    const ExperimentConfig cfg = LoadExperimentConfig(config);
    const std::size_t n = budget > 0 ? budget : cfg.budgets.front();
    const MultiSampleSet msets = Discretize(cfg, algo, n, rep);
    if (out.empty()) {
        std::cout << SampleSetsCsv(msets.sets);
    } else {
        WriteSampleSets(out, msets.sets);
    }
    return kExitOk;
}

int CmdEvaluate(const std::string& config, const std::string& samples, const std::string& test_path, int rep) {
    const ExperimentConfig cfg = LoadExperimentConfig(config);
    const auto sets = ReadSampleSets(samples, cfg.manifolds);
    const PointCloud test = TestCloud(cfg, test_path, rep);
    std::vector<CsvRow> rows{{"manifold", "n_samples", "registration_error", "classification_rate", "test_epsilon"}};
    MultiSampleSet msets;
    for (std::size_t m = 0; m < cfg.manifolds.size(); ++m) {
        msets.sets.push_back(sets[m]);
        if (sets[m].empty()) {
            rows.push_back({std::to_string(cfg.manifolds[m].id()), "0", "", "", ""});
            continue;
        }
        const PointCloud own = test.WithLabel(cfg.manifolds[m].id());
        const RegistrationReport r = RegistrationMetrics(cfg.manifolds[m], sets[m], own, cfg.projection.oracle,
                                                         cfg.projection.oracle_descent);
        rows.push_back({std::to_string(cfg.manifolds[m].id()), std::to_string(sets[m].size()), FormatNumber(r.mean),
                        "", ""});
    }
    if (cfg.manifolds.size() >= 2) {
        msets.Validate();
        const ClassificationReport c = ClassificationMetrics(msets, test);
        rows.push_back({"all", std::to_string(msets.total()), "", FormatNumber(c.rate), FormatNumber(c.epsilon)});
    }
    std::cout << JoinCsv(rows);
    return kExitOk;
}

int CmdRun(const std::string& config, const std::string& out) {
    ExperimentConfig cfg = LoadExperimentConfig(config);
    if (!out.empty()) {
        cfg.output_dir = out;
    }
    const ExperimentReport report = RunExperiment(cfg);
    WriteReport(cfg.output_dir, report);
    std::cout << "wrote " << report.rows.size() << " result rows to " << cfg.output_dir.string() << "\n";
    if (report.failures > 0) {
        std::cerr << report.failures << " algorithm runs failed; see the status column of results.csv\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int CmdCompare(const std::string& config, const std::vector<std::string>& samples, const std::string& test_path,
               int rep) {
    const ExperimentConfig cfg = LoadExperimentConfig(config);
    if (samples.size() < 2) {
        throw UsageError("compare needs at least two --samples files");
    }
    std::vector<std::vector<SampleSet>> by_method;
    for (const auto& path : samples) {
        by_method.push_back(ReadSampleSets(path, cfg.manifolds));
    }
    const PointCloud test = TestCloud(cfg, test_path, rep);
    std::vector<CsvRow> rows{{"manifold", "method", "wins", "share"}};
    for (std::size_t m = 0; m < cfg.manifolds.size(); ++m) {
        std::vector<SampleSet> sets;
        for (const auto& method : by_method) {
            sets.push_back(method[m]);
        }
        const ShareReport s = ClosestSampleShare(sets, test.WithLabel(cfg.manifolds[m].id()));
        for (std::size_t k = 0; k < samples.size(); ++k) {
            rows.push_back({std::to_string(cfg.manifolds[m].id()), fs::path(samples[k]).stem().string(),
                            std::to_string(s.wins[k]), FormatNumber(s.percentages[k])});
        }
    }
    std::cout << JoinCsv(rows);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sample-set discretization of transformation manifolds"};
    app.require_subcommand(1);
    bool show_isa = false;
    app.add_flag("--isa", show_isa, "Print the selected SIMD kernel set to stderr");

    std::string config;
    std::string out;
    std::string algo;
    std::string test_path;
    std::string samples;
    std::vector<std::string> compare_samples;
    std::size_t budget = 0;
    int rep = 0;

    auto* dataset = app.add_subcommand("dataset", "Write the train/test clouds of one repetition");
    dataset->add_option("--config", config, "Experiment config (JSON)")->required();
    dataset->add_option("--out", out, "Output directory (default: output_dir)");
    dataset->add_option("--repetition", rep, "Repetition index")->check(CLI::NonNegativeNumber);

    auto* discretize = app.add_subcommand("discretize", "Run one algorithm and write its sample sets");
    discretize->add_option("--algo", algo, "random|regular|remd|cmd|mdsa|mdpa|dmd")->required();
    discretize->add_option("--config", config, "Experiment config (JSON)")->required();
    discretize->add_option("--budget", budget, "Samples per manifold (default: first budget)");
    discretize->add_option("--repetition", rep, "Repetition index")->check(CLI::NonNegativeNumber);
    discretize->add_option("--out", out, "Sample-set CSV (default: stdout)");

    auto* evaluate = app.add_subcommand("evaluate", "Registration and classification metrics of a sample-set CSV");
    evaluate->add_option("--config", config, "Experiment config (JSON)")->required();
    evaluate->add_option("--samples", samples, "Sample-set CSV")->required();
    evaluate->add_option("--test", test_path, "Test cloud CSV (default: generated)");
    evaluate->add_option("--repetition", rep, "Repetition index")->check(CLI::NonNegativeNumber);

    auto* run = app.add_subcommand("run", "Full experiment from a config");
    run->add_option("--config", config, "Experiment config (JSON)")->required();
    run->add_option("--out", out, "Output directory (default: output_dir)");

    auto* compare = app.add_subcommand("compare", "Closest-sample share table across sample-set CSVs");
    compare->add_option("--config", config, "Experiment config (JSON)")->required();
    compare->add_option("--samples", compare_samples, "Sample-set CSVs, one per method")->required();
    compare->add_option("--test", test_path, "Test cloud CSV (default: generated)");
    compare->add_option("--repetition", rep, "Repetition index")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (show_isa) {
        std::cerr << "kernels: " << manidisc::simd::IsaName(manidisc::simd::ActiveIsa()) << "\n";
    }

    try {
        if (*dataset) return CmdDataset(config, out, rep);
        if (*discretize) return CmdDiscretize(config, algo, budget, rep, out);
        if (*evaluate) return CmdEvaluate(config, samples, test_path, rep);
        if (*run) return CmdRun(config, out);
        if (*compare) return CmdCompare(config, compare_samples, test_path, rep);
    } catch (const manidisc::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
