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

#include "manidisc/baselines.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

namespace manidisc {

SampleSet RandomSampling(const Manifold& manifold, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw UsageError("random sampling needs at least one sample");
    }
    std::mt19937_64 rng(seed);
    SampleSet set;
    set.manifold_id = manifold.id();
    set.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        set.samples.push_back(manifold.MakeSample(manifold.domain().Sample(rng)));
    }
    return set;
}

SampleSet RegularGrid(const Manifold& manifold, std::size_t n) {
    if (n == 0) {
        throw UsageError("a regular grid needs at least one sample");
    }
    const auto counts = FactorizeGrid(manifold.domain(), n);
    SampleSet set;
    set.manifold_id = manifold.id();
    for (const auto& param : TensorGrid(manifold.domain(), counts, true)) {
        set.samples.push_back(manifold.MakeSample(param));
    }
    if (set.size() < n) {
        SampleSet rest = RandomSampling(manifold, n - set.size(), 0);
        for (auto& s : rest.samples) {
            set.samples.push_back(std::move(s));
        }
    }
    return set;
}

void AnnealingSchedule::Validate() const {
    if (!(t0 > 0.0)) {
        throw UsageError("annealing start temperature must be positive");
    }
    if (!(cooling > 0.0 && cooling < 1.0)) {
        throw UsageError("annealing cooling factor must lie in (0, 1)");
    }
    if (steps < 0) {
        throw UsageError("annealing step count must be nonnegative");
    }
    if (!(sigma_rel > 0.0)) {
        throw UsageError("annealing proposal width must be positive");
    }
}

MdsaResult Mdsa(std::span<const Manifold> manifolds, const MultiSampleSet& msets, const PointCloud& cloud,
                const AnnealingSchedule& schedule, std::uint64_t seed) {
    schedule.Validate();
    msets.Validate();
    if (manifolds.size() != msets.sets.size()) {
        throw UsageError("one sample set per manifold is required");
    }
    for (std::size_t m = 0; m < manifolds.size(); ++m) {
        if (manifolds[m].id() != msets.sets[m].manifold_id) {
            throw UsageError("sample set " + std::to_string(m) + " does not belong to manifold " +
                             std::to_string(manifolds[m].id()));
        }
    }
    ClassificationState state(msets, cloud);
    const double inv_size = cloud.empty() ? 0.0 : 1.0 / static_cast<double>(cloud.size());

    MdsaResult result;
    result.msets = msets;
    std::size_t best = state.misclassified();
    result.trace.push_back(state.epsilon());
    result.current.push_back(state.epsilon());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, msets.total() - 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double temperature = schedule.t0;
    for (int step = 0; step < schedule.steps; ++step) {
        std::size_t flat = pick(rng);
        std::size_t m = 0;
        while (flat >= state.msets().sets[m].size()) {
            flat -= state.msets().sets[m].size();
            ++m;
        }
        const std::size_t i = flat;
        const ParameterDomain& domain = manifolds[m].domain();
        Vector param = state.msets().sets[m].samples[i].param;
        for (std::size_t j = 0; j < param.size(); ++j) {
            param[j] += schedule.sigma_rel * domain.width(j) * gauss(rng);
        }
        domain.ClampOrWrap(param);
        ManifoldSample candidate = manifolds[m].MakeSample(param);
        const std::size_t wrong = state.TrialMisclassified(m, i, candidate.point);
        const double delta = (static_cast<double>(wrong) - static_cast<double>(state.misclassified())) * inv_size;
        const double u = unit(rng);
        if (delta <= 0.0 || u < std::exp(-delta / temperature)) {
            state.Replace(m, i, std::move(candidate));
            ++result.accepted;
            if (state.misclassified() < best) {
                best = state.misclassified();
                result.msets = state.msets();
            }
        }
        result.trace.push_back(cloud.empty() ? 0.0 : static_cast<double>(best) / static_cast<double>(cloud.size()));
        result.current.push_back(state.epsilon());
        temperature *= schedule.cooling;
    }
    return result;
}

}  // namespace manidisc
