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

#include <cstdint>
#include <span>
#include <vector>

#include "manidisc/geometry.hpp"
#include "manidisc/harness/config.hpp"

namespace manidisc::harness {

struct Dataset {
    PointCloud train;
    PointCloud test;
    std::vector<Vector> train_params;  // generating parameters, cloud order
    std::vector<Vector> test_params;
};

/// SplitMix64 finalizer of (a, b); derived seeds for repetitions and
/// per-manifold streams.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

/// Per class, in manifold order: uniform parameters, mapped, plus isotropic
/// Gaussian noise; pattern_rt points are renormalized to unit norm. Labels
/// are the generating manifold ids. Train and test use separate streams.
Dataset GenerateDataset(std::span<const Manifold> manifolds, const DatasetConfig& cfg, std::uint64_t seed);

}  // namespace manidisc::harness
