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
#include <span>
#include <vector>

#include "manidisc/classification.hpp"
#include "manidisc/geometry.hpp"

namespace manidisc {

/// N uniform parameter draws from mt19937_64(seed), mapped to samples.
SampleSet RandomSampling(const Manifold& manifold, std::size_t n, std::uint64_t seed);

/// Cell-centred tensor grid with prod(k) <= N; the remaining N - prod(k)
/// samples come from RandomSampling(manifold, ., 0).
SampleSet RegularGrid(const Manifold& manifold, std::size_t n);

struct AnnealingSchedule {
    double t0 = 0.01;
    double cooling = 0.998;  // T_k = t0 * cooling^k
    int steps = 2000;
    double sigma_rel = 0.05;  // proposal std-dev as a fraction of each width

    void Validate() const;
};

struct MdsaResult {
    MultiSampleSet msets;          // best-ever sets
    std::vector<double> trace;     // best-ever eps, initial value then one per step
    std::vector<double> current;   // eps of the chain, same layout
    std::size_t accepted = 0;
};

/// Simulated annealing on eps: Gaussian parameter steps on one uniformly
/// chosen sample, Metropolis acceptance, best-ever retention.
MdsaResult Mdsa(std::span<const Manifold> manifolds, const MultiSampleSet& msets, const PointCloud& cloud,
                const AnnealingSchedule& schedule, std::uint64_t seed);

}  // namespace manidisc
