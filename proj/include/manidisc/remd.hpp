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
#include <optional>
#include <span>
#include <vector>

#include "manidisc/geometry.hpp"

namespace manidisc {

enum class EmptyCellPolicy { kReseedToFarthestPoint, kKeep };

struct RemdConfig {
    std::size_t n_samples = 1;
    int max_iters = 100;
    double tol = 1e-5;  // relative decrease of the error
    std::uint64_t seed = 0;
    /// Minimum ambient distance between initial samples; unset means 5% of
    /// the cloud's bounding-box diagonal.
    std::optional<double> min_init_spacing;
    EmptyCellPolicy empty_cell_policy = EmptyCellPolicy::kReseedToFarthestPoint;
    GridSpec grid = GridSpec::Working();
    DescentConfig descent;
};

/// Nearest-sample assignment of every cloud point (ties to the lowest index).
struct Partition {
    std::vector<std::size_t> assignment;
    std::vector<std::size_t> counts;
    std::vector<double> dist2;  // squared distance to the assigned sample
};

Partition MakePartition(const PointCloud& cloud, const SampleSet& set);

/// Arithmetic mean; nullopt for an empty list (an empty cell).
std::optional<Vector> Centroid(std::span<const Vector> points);
std::optional<Vector> Centroid(const PointCloud& cloud, std::span<const std::size_t> members);

/// Mean over the cloud of D^2(x, S).
double MeanSquaredDistance(const PointCloud& cloud, const SampleSet& set);

/// Monte Carlo estimate of the distance estimation error:
/// mean over the cloud of D^2(x, S) - D^2(x, M), with D(x, M) supplied.
double DistanceError(const PointCloud& cloud, const SampleSet& set, std::span<const double> manifold_distances);

struct RemdResult {
    SampleSet samples;
    /// Mean D^2(x, S) on the training cloud before the first and after every
    /// accepted iteration. Differs from DistanceError by a constant.
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
    bool init_fallback = false;  // spacing constraint could not be met
};

/// Random initial samples at least `spacing` apart in the ambient space.
/// Falls back to unconstrained draws after 100 * N attempts.
SampleSet SpacedRandomSamples(const Manifold& manifold, std::size_t n, double spacing, std::uint64_t seed,
                              bool* fallback = nullptr);

/// Registration-efficient discretization: alternate nearest-sample
/// partitioning of the cloud with moving each sample to the projection of its
/// cell centroid.
RemdResult Remd(const Manifold& manifold, const PointCloud& cloud, const RemdConfig& cfg);
RemdResult Remd(const Manifold& manifold, const PointCloud& cloud, const RemdConfig& cfg, const SampleSet& initial);

}  // namespace manidisc
