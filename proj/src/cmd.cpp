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

#include "manidisc/cmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace manidisc {

void CmdConfig::Validate() const {
    for (const auto* grid : {&alpha_grid, &beta_grid}) {
        if (grid->empty()) {
            throw UsageError("CMD step grids must not be empty");
        }
        for (double t : *grid) {
            if (!(t > 0.0 && t <= 1.0)) {
                throw UsageError("CMD step candidates must lie in (0, 1]");
            }
        }
    }
    if (inner_max < 1 || outer_max < 1) {
        throw UsageError("CMD loop bounds must be positive");
    }
    if (!(tol >= 0.0)) {
        throw UsageError("CMD tolerance must be nonnegative");
    }
}

Vector StepParam(const ParameterDomain& domain, std::span<const double> lambda, std::span<const double> target,
                 double t, Direction direction) {
    if (lambda.size() != domain.dims() || target.size() != domain.dims()) {
        throw UsageError("parameter dimension does not match the domain");
    }
    const double sign = direction == Direction::kToward ? 1.0 : -1.0;
    Vector out(lambda.begin(), lambda.end());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] += sign * t * domain.Difference(j, target[j], lambda[j]);
    }
    domain.ClampOrWrap(out);
    return out;
}

bool PerturbSample(ClassificationState& state, const Manifold& manifold, std::size_t m, std::size_t i,
                   std::span<const double> target, Direction direction, std::span<const double> steps) {
    const Vector lambda = state.msets().sets[m].samples[i].param;
    const std::size_t current = state.misclassified();
    std::size_t best = current;
    std::optional<ManifoldSample> best_sample;
    for (double t : steps) {
        ManifoldSample candidate = manifold.MakeSample(StepParam(manifold.domain(), lambda, target, t, direction));
        const std::size_t wrong = state.TrialMisclassified(m, i, candidate.point);
        if (wrong < best) {
            best = wrong;
            best_sample = std::move(candidate);
        }
    }
    if (!best_sample) {
        return false;
    }
    state.Replace(m, i, std::move(*best_sample));
    return true;
}

PerturbResult PerturbSampleToward(std::size_t m, std::size_t i, std::span<const double> target, Direction direction,
                                  std::span<const Manifold> manifolds, const MultiSampleSet& msets,
                                  const PointCloud& cloud, const CmdConfig& cfg) {
    cfg.Validate();
    CmdEngine engine(manifolds, cfg);
    engine.CheckSets(msets);
    if (m >= msets.sets.size() || i >= msets.sets[m].size()) {
        throw UsageError("sample reference out of range");
    }
    ClassificationState state(msets, cloud);
    const auto& steps = direction == Direction::kToward ? cfg.alpha_grid : cfg.beta_grid;
    const bool moved = PerturbSample(state, manifolds[m], m, i, target, direction, steps);
    return {state.msets(), state.epsilon(), moved};
}

CmdEngine::CmdEngine(std::span<const Manifold> manifolds, CmdConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.Validate();
    projectors_.reserve(manifolds.size());
    for (const auto& manifold : manifolds) {
        projectors_.emplace_back(manifold, cfg_.grid, cfg_.descent);
    }
}

void CmdEngine::CheckSets(const MultiSampleSet& msets) const {
    msets.Validate();
    if (msets.sets.size() != projectors_.size()) {
        throw UsageError("one sample set per manifold is required");
    }
    for (std::size_t m = 0; m < projectors_.size(); ++m) {
        if (msets.sets[m].manifold_id != manifold(m).id()) {
            throw UsageError("sample set " + std::to_string(m) + " does not belong to manifold " +
                             std::to_string(manifold(m).id()));
        }
    }
}

bool CmdEngine::OptimizeSample(ClassificationState& state, std::size_t m, std::size_t i) const {
    const Projector& proj = projectors_[m];
    bool any = false;
    for (int inner = 0; inner < cfg_.inner_max; ++inner) {
        bool moved = false;
        const MisclassRegions toward = state.Regions(m, i);
        if (toward.theta_centroid) {
            const Vector mu = proj.Project(*toward.theta_centroid).param;
            moved |= PerturbSample(state, proj.manifold(), m, i, mu, Direction::kToward, cfg_.alpha_grid);
        }
        const MisclassRegions away = state.Regions(m, i);
        if (away.phi_centroid) {
            const Vector nu = proj.Project(*away.phi_centroid).param;
            moved |= PerturbSample(state, proj.manifold(), m, i, nu, Direction::kAway, cfg_.beta_grid);
        }
        if (!moved) {
            break;
        }
        any = true;
    }
    return any;
}

std::vector<std::vector<bool>> CmdEngine::Sweep(ClassificationState& state, std::mt19937_64& rng,
                                                std::span<const std::size_t> manifolds) const {
    std::vector<std::size_t> which(manifolds.begin(), manifolds.end());
    if (which.empty()) {
        which.resize(state.num_manifolds());
        std::iota(which.begin(), which.end(), std::size_t{0});
    }
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t m : which) {
        for (std::size_t i = 0; i < state.msets().sets[m].size(); ++i) {
            order.emplace_back(m, i);
        }
    }
    if (cfg_.sweep_order == SweepOrder::kRandom) {
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<std::vector<bool>> moved(state.num_manifolds());
    for (std::size_t m = 0; m < state.num_manifolds(); ++m) {
        moved[m].assign(state.msets().sets[m].size(), false);
    }
    for (const auto& [m, i] : order) {
        moved[m][i] = OptimizeSample(state, m, i);
    }
    return moved;
}

CmdResult Cmd(std::span<const Manifold> manifolds, const MultiSampleSet& msets, const PointCloud& cloud,
              const CmdConfig& cfg) {
    const CmdEngine engine(manifolds, cfg);
    engine.CheckSets(msets);
    ClassificationState state(msets, cloud);
    std::mt19937_64 rng(cfg.seed);

    CmdResult result;
    result.trace.push_back(state.epsilon());
    for (int sweep = 0; sweep < cfg.outer_max; ++sweep) {
        const double before = state.epsilon();
        engine.Sweep(state, rng);
        ++result.sweeps;
        result.trace.push_back(state.epsilon());
        if (before - state.epsilon() < cfg.tol) {
            result.converged = true;
            break;
        }
    }
    result.msets = state.msets();
    return result;
}

}  // namespace manidisc
