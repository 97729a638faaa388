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

#include "manidisc/budget.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <tuple>

#include "manidisc/baselines.hpp"

namespace manidisc {

namespace {

struct SampleRef {
    std::size_t m;
    std::size_t i;
};

using WeaknessKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;

WeaknessKey Weakness(const RegionCounts& counts, std::size_t m, std::size_t i) {
    return {counts.theta[m][i], counts.phi[m][i], counts.cell[m][i], m, i};
}

/// Sample with the smallest weakness key among manifolds holding more than
/// one sample, skipping manifold `exclude`.
std::optional<SampleRef> WeakestSample(const ClassificationState& state, const RegionCounts& counts,
                                       std::size_t exclude) {
    std::optional<SampleRef> best;
    WeaknessKey best_key{};
    for (std::size_t m = 0; m < state.num_manifolds(); ++m) {
        if (m == exclude || state.msets().sets[m].size() <= 1) {
            continue;
        }
        for (std::size_t i = 0; i < state.msets().sets[m].size(); ++i) {
            const WeaknessKey key = Weakness(counts, m, i);
            if (!best || key < best_key) {
                best = SampleRef{m, i};
                best_key = key;
            }
        }
    }
    return best;
}

void CheckManifolds(std::span<const Manifold> manifolds) {
    if (manifolds.size() < 2) {
        throw UsageError("budget allocation needs at least two manifolds");
    }
}

std::vector<std::vector<int>> ZeroStalls(const MultiSampleSet& msets) {
    std::vector<std::vector<int>> stall(msets.sets.size());
    for (std::size_t m = 0; m < msets.sets.size(); ++m) {
        stall[m].assign(msets.sets[m].size(), 0);
    }
    return stall;
}

}  // namespace

std::vector<std::size_t> EqualSplit(std::size_t total, std::size_t parts) {
    if (parts == 0) {
        throw UsageError("cannot split a budget into zero parts");
    }
    if (total < parts) {
        throw UsageError("budget must give every manifold at least one sample");
    }
    std::vector<std::size_t> split(parts, total / parts);
    for (std::size_t m = 0; m < total % parts; ++m) {
        ++split[m];
    }
    return split;
}

BudgetResult Mdpa(std::span<const Manifold> manifolds, const PointCloud& cloud, const BudgetConfig& cfg,
                  const CmdConfig& cmd_cfg) {
    CheckManifolds(manifolds);
    const std::size_t n_man = manifolds.size();
    if (cfg.total_budget < n_man) {
        throw UsageError("budget must give every manifold at least one sample");
    }
    if (cfg.dense_grid_per_manifold == 0 || cfg.dense_grid_per_manifold * n_man < cfg.total_budget) {
        throw UsageError("dense grids must hold at least the total budget");
    }
    MultiSampleSet msets;
    for (const auto& manifold : manifolds) {
        msets.sets.push_back(RegularGrid(manifold, cfg.dense_grid_per_manifold));
    }
    ClassificationState state(std::move(msets), cloud);
    while (state.msets().total() > cfg.total_budget) {
        const RegionCounts counts = state.Counts();
        const auto victim = WeakestSample(state, counts, n_man);
        state.Remove(victim->m, victim->i);
    }
    CmdResult tuned = Cmd(manifolds, state.msets(), cloud, cmd_cfg);
    BudgetResult result;
    result.allocation = tuned.msets.Allocation();
    result.msets = std::move(tuned.msets);
    result.trace = std::move(tuned.trace);
    return result;
}

BudgetResult Dmd(std::span<const Manifold> manifolds, const PointCloud& cloud, const MultiSampleSet& initial,
                 const BudgetConfig& cfg, const CmdConfig& cmd_cfg) {
    CheckManifolds(manifolds);
    if (cfg.total_budget != 0 && cfg.total_budget != initial.total()) {
        throw UsageError("initial sets do not match the total budget");
    }
    if (!(cfg.dmd_poor_factor >= 0.0) || cfg.dmd_stall_sweeps < 0) {
        throw UsageError("DMD thresholds must be nonnegative");
    }
    const CmdEngine engine(manifolds, cmd_cfg);
    engine.CheckSets(initial);
    ClassificationState state(initial, cloud);
    std::mt19937_64 rng(cmd_cfg.seed);
    const double min_gain = cmd_cfg.tol * static_cast<double>(cloud.size());

    BudgetResult result;
    result.trace.push_back(state.epsilon());
    auto stall = ZeroStalls(state.msets());

    for (int sweep = 1; sweep <= cmd_cfg.outer_max; ++sweep) {
        const double before = static_cast<double>(state.misclassified());
        const auto moved = engine.Sweep(state, rng);
        for (std::size_t m = 0; m < moved.size(); ++m) {
            for (std::size_t i = 0; i < moved[m].size(); ++i) {
                stall[m][i] = moved[m][i] ? 0 : stall[m][i] + 1;
            }
        }
        result.trace.push_back(state.epsilon());
        if (before - static_cast<double>(state.misclassified()) >= min_gain && before > state.misclassified()) {
            continue;
        }

        // Sweeps have stopped improving; look for poorly represented samples.
        const RegionCounts counts = state.Counts();
        std::size_t theta_total = 0;
        for (const auto& row : counts.theta) {
            for (std::size_t t : row) {
                theta_total += t;
            }
        }
        const double average = static_cast<double>(theta_total) / static_cast<double>(state.msets().total());
        std::vector<std::pair<std::size_t, SampleRef>> poor;
        bool waiting = false;
        for (std::size_t m = 0; m < counts.theta.size(); ++m) {
            for (std::size_t i = 0; i < counts.theta[m].size(); ++i) {
                const std::size_t t = counts.theta[m][i];
                if (t == 0 || static_cast<double>(t) <= cfg.dmd_poor_factor * average) {
                    continue;
                }
                if (stall[m][i] >= cfg.dmd_stall_sweeps) {
                    poor.push_back({t, SampleRef{m, i}});
                } else {
                    waiting = true;
                }
            }
        }
        if (poor.empty()) {
            if (waiting) {
                continue;
            }
            break;
        }
        std::stable_sort(poor.begin(), poor.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

        bool committed = false;
        for (const auto& [theta, ref] : poor) {
            const auto donor = WeakestSample(state, counts, ref.m);
            if (!donor) {
                continue;
            }
            const MisclassRegions regions = state.Regions(ref.m, ref.i);
            const ProjectionResult proj = engine.projector(ref.m).Project(*regions.theta_centroid);
            ManifoldSample added = engine.manifold(ref.m).MakeSample(proj.param);

            Transfer log{sweep, donor->m, donor->i, ref.m, ref.i, state.epsilon(), 0.0, false};
            const std::size_t wrong_before = state.misclassified();
            ClassificationState snapshot = state;
            state.Remove(donor->m, donor->i);
            state.Insert(ref.m, std::move(added));
            const std::size_t touched[2] = {std::min(donor->m, ref.m), std::max(donor->m, ref.m)};
            for (int pass = 0; pass < cmd_cfg.outer_max; ++pass) {
                const std::size_t pass_before = state.misclassified();
                engine.Sweep(state, rng, touched);
                if (static_cast<double>(pass_before) - static_cast<double>(state.misclassified()) < min_gain ||
                    pass_before <= state.misclassified()) {
                    break;
                }
            }
            log.eps_after = state.epsilon();
            if (state.misclassified() < wrong_before) {
                log.committed = true;
                committed = true;
                result.transfers.push_back(log);
                result.trace.push_back(state.epsilon());
                auto fresh = ZeroStalls(state.msets());
                for (std::size_t m = 0; m < fresh.size(); ++m) {
                    if (m != donor->m && m != ref.m) {
                        fresh[m] = stall[m];
                    }
                }
                stall = std::move(fresh);
                break;
            }
            state = std::move(snapshot);
            result.transfers.push_back(log);
        }
        if (!committed) {
            break;
        }
    }
    result.msets = state.msets();
    result.allocation = result.msets.Allocation();
    return result;
}

BudgetResult Dmd(std::span<const Manifold> manifolds, const PointCloud& cloud, const BudgetConfig& cfg,
                 const CmdConfig& cmd_cfg, const RemdConfig& remd_cfg) {
    CheckManifolds(manifolds);
    if (cfg.total_budget < manifolds.size()) {
        throw UsageError("budget must give every manifold at least one sample");
    }
    const auto split = EqualSplit(cfg.total_budget, manifolds.size());
    MultiSampleSet initial;
    for (std::size_t m = 0; m < manifolds.size(); ++m) {
        RemdConfig per = remd_cfg;
        per.n_samples = split[m];
        per.seed = remd_cfg.seed + m;
        initial.sets.push_back(Remd(manifolds[m], cloud.WithLabel(manifolds[m].id()), per).samples);
    }
    return Dmd(manifolds, cloud, initial, cfg, cmd_cfg);
}

}  // namespace manidisc
