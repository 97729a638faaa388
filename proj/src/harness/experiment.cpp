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

#include "manidisc/harness/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>

#include "manidisc/baselines.hpp"
#include "manidisc/budget.hpp"
#include "manidisc/cmd.hpp"
#include "manidisc/harness/csv_io.hpp"
#include "manidisc/harness/dataset.hpp"
#include "manidisc/harness/metrics.hpp"
#include "manidisc/remd.hpp"

namespace manidisc::harness {

using nlohmann::json;

namespace {

// Stream tags for derived seeds.
constexpr std::uint64_t kRandomStream = 100;
constexpr std::uint64_t kRemdStream = 200;
constexpr std::uint64_t kCmdStream = 300;
constexpr std::uint64_t kMdsaStream = 400;
constexpr std::uint64_t kBudgetStream = 500;

std::string Sanitize(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

/// What one algorithm produced for one (budget, repetition).
struct CellOutput {
    MultiSampleSet msets;
    std::optional<double> train_epsilon_init;
    std::vector<std::pair<std::string, std::vector<double>>> traces;  // manifold tag -> values
    std::vector<Transfer> transfers;
    bool has_transfers = false;
};

class RepetitionRunner {
 public:
    RepetitionRunner(const ExperimentConfig& cfg, int rep)
        : cfg_(cfg), rep_(rep), rep_seed_(MixSeed(cfg.seed, static_cast<std::uint64_t>(rep))) {
        data_ = GenerateDataset(cfg.manifolds, cfg.dataset, rep_seed_);
        for (const auto& manifold : cfg.manifolds) {
            train_by_class_.push_back(data_.train.WithLabel(manifold.id()));
            test_by_class_.push_back(data_.test.WithLabel(manifold.id()));
        }
        remd_params_ = json::object();
        for (const auto& a : cfg.algorithms) {
            if (a.name == "remd") remd_params_ = a.params;
        }
    }

    MultiSampleSet DiscretizeOne(const std::string& algorithm, std::size_t n) {
        for (const auto& spec : cfg_.algorithms) {
            if (spec.name == algorithm) return Compute(spec, n).msets;
        }
        return Compute(AlgorithmSpec{algorithm, json::object()}, n).msets;
    }

    void Run(ExperimentReport& report) {
        for (std::size_t b = 0; b < cfg_.budgets.size(); ++b) {
            RunBudget(cfg_.budgets[b], report);
        }
    }

 private:
    bool joint() const { return cfg_.manifolds.size() >= 2; }

    const std::vector<ProjectionResult>& Oracle(std::size_t m) {
        if (oracle_.empty()) oracle_.resize(cfg_.manifolds.size());
        if (!oracle_[m]) {
            oracle_[m] = std::make_unique<std::vector<ProjectionResult>>(OracleProjections(
                cfg_.manifolds[m], test_by_class_[m], cfg_.projection.oracle, cfg_.projection.oracle_descent));
        }
        return *oracle_[m];
    }

    /// Independent REMD per manifold on its class subcloud, cached per budget.
    const CellOutput& RemdSets(std::size_t n) {
        if (!remd_cache_ || remd_budget_ != n) {
            const RemdConfig base = ParseRemdConfig(remd_params_, cfg_.projection);
            auto out = std::make_unique<CellOutput>();
            for (std::size_t m = 0; m < cfg_.manifolds.size(); ++m) {
                RemdConfig c = base;
                c.n_samples = n;
                c.seed = MixSeed(rep_seed_, kRemdStream + m);
                RemdResult r = Remd(cfg_.manifolds[m], train_by_class_[m], c);
                out->traces.emplace_back(std::to_string(cfg_.manifolds[m].id()), r.trace);
                out->msets.sets.push_back(std::move(r.samples));
            }
            remd_cache_ = std::move(out);
            remd_budget_ = n;
        }
        return *remd_cache_;
    }

    CellOutput Compute(const AlgorithmSpec& spec, std::size_t n) {
        const auto& manifolds = cfg_.manifolds;
        CellOutput out;
        if (spec.name == "random") {
            for (std::size_t m = 0; m < manifolds.size(); ++m) {
                out.msets.sets.push_back(RandomSampling(manifolds[m], n, MixSeed(rep_seed_, kRandomStream + m)));
            }
        } else if (spec.name == "regular") {
            for (const auto& manifold : manifolds) {
                out.msets.sets.push_back(RegularGrid(manifold, n));
            }
        } else if (spec.name == "remd") {
            out = CopyOf(RemdSets(n));
        } else if (spec.name == "cmd") {
            const CellOutput& init = RemdSets(n);
            CmdConfig c = ParseCmdConfig(spec.params, cfg_.projection);
            c.seed = MixSeed(rep_seed_, kCmdStream);
            CmdResult r = Cmd(manifolds, init.msets, data_.train, c);
            out.msets = std::move(r.msets);
            out.train_epsilon_init = r.trace.front();
            out.traces.emplace_back("all", std::move(r.trace));
        } else if (spec.name == "mdsa") {
            const CellOutput& init = RemdSets(n);
            const AnnealingSchedule s = ParseAnnealingSchedule(spec.params);
            MdsaResult r = Mdsa(manifolds, init.msets, data_.train, s, MixSeed(rep_seed_, kMdsaStream));
            out.msets = std::move(r.msets);
            out.train_epsilon_init = r.trace.front();
            out.traces.emplace_back("all", std::move(r.trace));
        } else if (spec.name == "mdpa" || spec.name == "dmd") {
            const json params = MergedParams(cfg_, spec);
            CmdConfig c = ParseCmdConfig(params, cfg_.projection);
            c.seed = MixSeed(rep_seed_, kCmdStream);
            BudgetConfig b = ParseBudgetConfig(params);
            b.total_budget = n * manifolds.size();
            b.seed = MixSeed(rep_seed_, kBudgetStream);
            BudgetResult r;
            if (spec.name == "mdpa") {
                const double factor = params.value("dense_factor", 2.0);
                b.dense_grid_per_manifold = static_cast<std::size_t>(std::ceil(factor * static_cast<double>(n)));
                r = Mdpa(manifolds, data_.train, b, c);
            } else {
                // Equal split of N * M is N per manifold: the REMD sets.
                r = Dmd(manifolds, data_.train, RemdSets(n).msets, b, c);
                out.transfers = std::move(r.transfers);
                out.has_transfers = true;
            }
            out.msets = std::move(r.msets);
            out.train_epsilon_init = r.trace.front();
            out.traces.emplace_back("all", std::move(r.trace));
        }
        return out;
    }

    static CellOutput CopyOf(const CellOutput& c) { return c; }

    void RunBudget(std::size_t n, ExperimentReport& report) {
        const std::string tag = "N" + std::to_string(n) + "_rep" + std::to_string(rep_);
        std::vector<std::optional<CellOutput>> outputs(cfg_.algorithms.size());
        std::vector<std::string> status(cfg_.algorithms.size(), "ok");
        for (std::size_t a = 0; a < cfg_.algorithms.size(); ++a) {
            const AlgorithmSpec& spec = cfg_.algorithms[a];
            const auto start = std::chrono::steady_clock::now();
            try {
                outputs[a] = Compute(spec, n);
            } catch (const std::exception& e) {
                status[a] = "error:" + Sanitize(e.what());
                ++report.failures;
            }
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            report.timings.push_back({spec.name, n, rep_, seconds});
        }

        // Closest-sample share among the algorithms that succeeded.
        std::vector<std::size_t> ok;
        for (std::size_t a = 0; a < outputs.size(); ++a) {
            if (outputs[a]) ok.push_back(a);
        }
        std::vector<std::vector<double>> share(outputs.size(),
                                               std::vector<double>(cfg_.manifolds.size(), std::nan("")));
        if (ok.size() >= 2) {
            for (std::size_t m = 0; m < cfg_.manifolds.size(); ++m) {
                std::vector<SampleSet> sets;
                for (std::size_t a : ok) sets.push_back(outputs[a]->msets.sets[m]);
                const ShareReport s = ClosestSampleShare(sets, test_by_class_[m]);
                for (std::size_t k = 0; k < ok.size(); ++k) share[ok[k]][m] = s.percentages[k];
            }
        }

        for (std::size_t a = 0; a < outputs.size(); ++a) {
            const std::string& name = cfg_.algorithms[a].name;
            auto base_row = [&](const std::string& manifold) {
                ResultRow row;
                row.algorithm_index = a;
                row.algorithm = name;
                row.budget = n;
                row.repetition = rep_;
                row.manifold = manifold;
                row.status = status[a];
                return row;
            };
            if (!outputs[a]) {
                for (const auto& manifold : cfg_.manifolds) report.rows.push_back(base_row(std::to_string(manifold.id())));
                if (joint()) report.rows.push_back(base_row("all"));
                continue;
            }
            const CellOutput& out = *outputs[a];
            for (std::size_t m = 0; m < cfg_.manifolds.size(); ++m) {
                ResultRow row = base_row(std::to_string(cfg_.manifolds[m].id()));
                const SampleSet& set = out.msets.sets[m];
                row.n_samples = set.size();
                row.registration_error = RegistrationMetrics(set, test_by_class_[m], Oracle(m)).mean;
                if (!std::isnan(share[a][m])) row.closest_share = share[a][m];
                report.rows.push_back(std::move(row));
            }
            if (joint()) {
                ResultRow row = base_row("all");
                row.n_samples = out.msets.total();
                const ClassificationReport test = ClassificationMetrics(out.msets, data_.test);
                row.classification_rate = test.rate;
                row.test_epsilon = test.epsilon;
                row.train_epsilon = ClassificationError(out.msets, data_.train);
                row.train_epsilon_init = out.train_epsilon_init.value_or(*row.train_epsilon);
                report.rows.push_back(std::move(row));
            }
            for (const auto& [manifold, values] : out.traces) {
                for (std::size_t k = 0; k < values.size(); ++k) {
                    report.traces.push_back({name, n, rep_, manifold, k, values[k]});
                }
            }
            if (cfg_.write_samples) {
                report.files.emplace_back("samples/" + name + "_" + tag + ".csv", SampleSetsCsv(out.msets.sets));
            }
            if (out.has_transfers) {
                report.files.emplace_back("transfers/" + name + "_" + tag + ".csv",
                                          TransferLogCsv(out.transfers, out.msets));
            }
        }
    }

    const ExperimentConfig& cfg_;
    int rep_;
    std::uint64_t rep_seed_;
    Dataset data_;
    std::vector<PointCloud> train_by_class_;
    std::vector<PointCloud> test_by_class_;
    std::vector<std::unique_ptr<std::vector<ProjectionResult>>> oracle_;
    json remd_params_;
    std::unique_ptr<CellOutput> remd_cache_;
    std::size_t remd_budget_ = 0;
};

std::string Opt(const std::optional<double>& v) { return v ? FormatNumber(*v) : ""; }

}  // namespace

ExperimentReport RunExperiment(const ExperimentConfig& cfg) {
    ExperimentReport report;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        RepetitionRunner(cfg, rep).Run(report);
    }
    // Rows are produced rep-major; the report is ordered algorithm-major.
    auto rank_of_budget = [&](std::size_t n) {
        return static_cast<std::size_t>(std::find(cfg.budgets.begin(), cfg.budgets.end(), n) - cfg.budgets.begin());
    };
    std::map<std::string, std::size_t> manifold_rank;
    for (const auto& m : cfg.manifolds) {
        manifold_rank.emplace(std::to_string(m.id()), manifold_rank.size());
    }
    manifold_rank.emplace("all", manifold_rank.size());
    std::stable_sort(report.rows.begin(), report.rows.end(), [&](const ResultRow& x, const ResultRow& y) {
        return std::make_tuple(x.algorithm_index, rank_of_budget(x.budget), x.repetition, manifold_rank[x.manifold]) <
               std::make_tuple(y.algorithm_index, rank_of_budget(y.budget), y.repetition, manifold_rank[y.manifold]);
    });
    return report;
}

MultiSampleSet Discretize(const ExperimentConfig& cfg, const std::string& algorithm, std::size_t n, int rep) {
    if (!IsKnownAlgorithm(algorithm)) {
        throw ConfigError("unknown algorithm '" + algorithm + "'");
    }
    return RepetitionRunner(cfg, rep).DiscretizeOne(algorithm, n);
}

std::string ResultsCsv(const ExperimentReport& report) {
    std::vector<CsvRow> rows;
    rows.push_back({"algorithm", "budget", "repetition", "manifold", "n_samples", "registration_error",
                    "closest_share", "classification_rate", "test_epsilon", "train_epsilon", "train_epsilon_init",
                    "status"});
    for (const auto& r : report.rows) {
        rows.push_back({r.algorithm, std::to_string(r.budget), std::to_string(r.repetition), r.manifold,
                        std::to_string(r.n_samples), Opt(r.registration_error), Opt(r.closest_share),
                        Opt(r.classification_rate), Opt(r.test_epsilon), Opt(r.train_epsilon),
                        Opt(r.train_epsilon_init), r.status});
    }
    return JoinCsv(rows);
}

std::string SummaryCsv(const ExperimentReport& report) {
    struct Acc {
        std::size_t ok = 0;
        std::size_t failed = 0;
        double n_samples = 0.0;
        std::array<double, 6> sum{};
        std::array<std::size_t, 6> count{};
    };
    // Keys keep first-appearance order, which is the sorted row order.
    std::vector<std::tuple<std::string, std::size_t, std::string>> keys;
    std::map<std::tuple<std::string, std::size_t, std::string>, Acc> acc;
    for (const auto& r : report.rows) {
        const auto key = std::make_tuple(r.algorithm, r.budget, r.manifold);
        auto [it, fresh] = acc.try_emplace(key);
        if (fresh) keys.push_back(key);
        Acc& a = it->second;
        if (r.status != "ok") {
            ++a.failed;
            continue;
        }
        ++a.ok;
        a.n_samples += static_cast<double>(r.n_samples);
        const std::optional<double> values[6] = {r.registration_error, r.closest_share,  r.classification_rate,
                                                 r.test_epsilon,       r.train_epsilon, r.train_epsilon_init};
        for (std::size_t k = 0; k < 6; ++k) {
            if (values[k]) {
                a.sum[k] += *values[k];
                ++a.count[k];
            }
        }
    }
    std::vector<CsvRow> rows;
    rows.push_back({"algorithm", "budget", "manifold", "repetitions_ok", "repetitions_failed", "n_samples",
                    "registration_error", "closest_share", "classification_rate", "test_epsilon", "train_epsilon",
                    "train_epsilon_init"});
    for (const auto& key : keys) {
        const Acc& a = acc.at(key);
        CsvRow row{std::get<0>(key), std::to_string(std::get<1>(key)), std::get<2>(key), std::to_string(a.ok),
                   std::to_string(a.failed), a.ok ? FormatNumber(a.n_samples / static_cast<double>(a.ok)) : ""};
        for (std::size_t k = 0; k < 6; ++k) {
            row.push_back(a.count[k] ? FormatNumber(a.sum[k] / static_cast<double>(a.count[k])) : "");
        }
        rows.push_back(std::move(row));
    }
    return JoinCsv(rows);
}

std::string TracesCsv(const ExperimentReport& report) {
    std::vector<CsvRow> rows;
    rows.push_back({"algorithm", "budget", "repetition", "manifold", "step", "value"});
    for (const auto& t : report.traces) {
        rows.push_back({t.algorithm, std::to_string(t.budget), std::to_string(t.repetition), t.manifold,
                        std::to_string(t.step), FormatNumber(t.value)});
    }
    return JoinCsv(rows);
}

std::string TimingsCsv(const ExperimentReport& report) {
    std::vector<CsvRow> rows;
    rows.push_back({"algorithm", "budget", "repetition", "seconds"});
    for (const auto& t : report.timings) {
        rows.push_back({t.algorithm, std::to_string(t.budget), std::to_string(t.repetition), FormatNumber(t.seconds)});
    }
    return JoinCsv(rows);
}

void WriteReport(const std::filesystem::path& output_dir, const ExperimentReport& report) {
    WriteTextFile(output_dir / "results.csv", ResultsCsv(report));
    WriteTextFile(output_dir / "summary.csv", SummaryCsv(report));
    WriteTextFile(output_dir / "traces.csv", TracesCsv(report));
    WriteTextFile(output_dir / "timings.csv", TimingsCsv(report));
    for (const auto& [relative, text] : report.files) {
        WriteTextFile(output_dir / relative, text);
    }
}

}  // namespace manidisc::harness
