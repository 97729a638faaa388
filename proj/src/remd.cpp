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

#include "manidisc/remd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "manidisc/simd/kernels.hpp"

namespace manidisc {

Partition MakePartition(const PointCloud& cloud, const SampleSet& set) {
    if (set.empty()) {
        throw UsageError("partition against an empty sample set");
    }
    Partition part;
    part.assignment.resize(cloud.size());
    part.dist2.resize(cloud.size());
    part.counts.assign(set.size(), 0);
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        const NearestSample n = NearestSquared(cloud.point(p), set);
        part.assignment[p] = n.index;
        part.dist2[p] = n.distance;
        ++part.counts[n.index];
    }
    return part;
}

std::optional<Vector> Centroid(std::span<const Vector> points) {
    if (points.empty()) {
        return std::nullopt;
    }
    Vector sum(points.front().size(), 0.0);
    for (const auto& p : points) {
        if (p.size() != sum.size()) {
            throw UsageError("centroid of points with mixed dimensions");
        }
        simd::Accumulate(p, sum);
    }
    simd::Scale(1.0 / static_cast<double>(points.size()), sum);
    return sum;
}

std::optional<Vector> Centroid(const PointCloud& cloud, std::span<const std::size_t> members) {
    if (members.empty()) {
        return std::nullopt;
    }
    Vector sum(cloud.dim(), 0.0);
    for (std::size_t p : members) {
        simd::Accumulate(cloud.point(p), sum);
    }
    simd::Scale(1.0 / static_cast<double>(members.size()), sum);
    return sum;
}

double MeanSquaredDistance(const PointCloud& cloud, const SampleSet& set) {
    if (cloud.empty()) {
        throw UsageError("error over an empty cloud");
    }
    double total = 0.0;
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        total += NearestSquared(cloud.point(p), set).distance;
    }
    return total / static_cast<double>(cloud.size());
}

double DistanceError(const PointCloud& cloud, const SampleSet& set, std::span<const double> manifold_distances) {
    if (manifold_distances.size() != cloud.size()) {
        throw UsageError("one manifold distance per cloud point is required");
    }
    if (cloud.empty()) {
        throw UsageError("error over an empty cloud");
    }
    double total = 0.0;
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        const double d2 = NearestSquared(cloud.point(p), set).distance;
        total += d2 - manifold_distances[p] * manifold_distances[p];
    }
    return total / static_cast<double>(cloud.size());
}

SampleSet SpacedRandomSamples(const Manifold& manifold, std::size_t n, double spacing, std::uint64_t seed,
                              bool* fallback) {
    std::mt19937_64 rng(seed);
    SampleSet set;
    set.manifold_id = manifold.id();
    const double spacing2 = spacing * spacing;
    const std::size_t max_draws = 100 * n;
    for (std::size_t draw = 0; draw < max_draws && set.size() < n; ++draw) {
        ManifoldSample s = manifold.MakeSample(manifold.domain().Sample(rng));
        const bool spaced = std::all_of(set.samples.begin(), set.samples.end(), [&](const ManifoldSample& other) {
            return simd::L2Sqr(s.point, other.point) >= spacing2;
        });
        if (spaced) {
            set.samples.push_back(std::move(s));
        }
    }
    const bool failed = set.size() < n;
    if (failed) {
        set.samples.clear();
        for (std::size_t i = 0; i < n; ++i) {
            set.samples.push_back(manifold.MakeSample(manifold.domain().Sample(rng)));
        }
    }
    if (fallback != nullptr) {
        *fallback = failed;
    }
    return set;
}

namespace {

double BoundingBoxDiagonal(const PointCloud& cloud) {
    const std::size_t n = cloud.dim();
    Vector lo(n, std::numeric_limits<double>::infinity());
    Vector hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        const auto x = cloud.point(p);
        for (std::size_t k = 0; k < n; ++k) {
            lo[k] = std::min(lo[k], x[k]);
            hi[k] = std::max(hi[k], x[k]);
        }
    }
    return std::sqrt(simd::L2Sqr(lo, hi));
}

void CheckInputs(const Manifold& manifold, const PointCloud& cloud, const RemdConfig& cfg) {
    if (cloud.empty()) {
        throw UsageError("REMD needs a non-empty training cloud");
    }
    if (cloud.dim() != manifold.ambient_dim()) {
        throw UsageError("cloud dimension does not match the manifold");
    }
    if (cfg.n_samples == 0 || cfg.n_samples > cloud.size()) {
        throw UsageError("REMD needs 1 <= n_samples <= cloud size");
    }
    if (!(cfg.tol >= 0.0)) {
        throw UsageError("REMD tolerance must be nonnegative");
    }
}

}  // namespace

RemdResult Remd(const Manifold& manifold, const PointCloud& cloud, const RemdConfig& cfg) {
    CheckInputs(manifold, cloud, cfg);
    const double spacing = cfg.min_init_spacing.value_or(0.05 * BoundingBoxDiagonal(cloud));
    bool fallback = false;
    SampleSet initial = SpacedRandomSamples(manifold, cfg.n_samples, spacing, cfg.seed, &fallback);
    RemdResult result = Remd(manifold, cloud, cfg, initial);
    result.init_fallback = fallback;
    return result;
}

RemdResult Remd(const Manifold& manifold, const PointCloud& cloud, const RemdConfig& cfg, const SampleSet& initial) {
    if (initial.empty()) {
        throw UsageError("REMD initial sample set is empty");
    }
    RemdConfig checked = cfg;
    checked.n_samples = initial.size();
    CheckInputs(manifold, cloud, checked);
    const Projector projector(manifold, cfg.grid, cfg.descent);

    RemdResult result;
    result.samples = initial;
    result.samples.manifold_id = manifold.id();
    const std::size_t n_samples = initial.size();
    const double inv_size = 1.0 / static_cast<double>(cloud.size());

    Partition part = MakePartition(cloud, result.samples);
    double error = std::accumulate(part.dist2.begin(), part.dist2.end(), 0.0) * inv_size;
    result.trace.push_back(error);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::vector<std::vector<std::size_t>> members(n_samples);
        for (std::size_t p = 0; p < cloud.size(); ++p) {
            members[part.assignment[p]].push_back(p);
        }

        SampleSet next = result.samples;
        std::vector<std::size_t> empty_cells;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const auto centroid = Centroid(cloud, members[i]);
            if (!centroid) {
                empty_cells.push_back(i);
                continue;
            }
            // The projection replaces S_i only if it is closer to the centroid.
            ProjectionResult proj = projector.Project(*centroid);
            if (simd::L2Sqr(proj.point, *centroid) < simd::L2Sqr(result.samples.samples[i].point, *centroid)) {
                next.samples[i] = ManifoldSample{std::move(proj.param), std::move(proj.point)};
            }
        }
        if (!empty_cells.empty() && cfg.empty_cell_policy == EmptyCellPolicy::kReseedToFarthestPoint) {
            std::vector<std::size_t> order(cloud.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&part](std::size_t a, std::size_t b) { return part.dist2[a] > part.dist2[b]; });
            for (std::size_t k = 0; k < empty_cells.size() && k < order.size(); ++k) {
                ProjectionResult proj = projector.Project(cloud.point(order[k]));
                next.samples[empty_cells[k]] = ManifoldSample{std::move(proj.param), std::move(proj.point)};
            }
        }

        Partition next_part = MakePartition(cloud, next);
        const double next_error = std::accumulate(next_part.dist2.begin(), next_part.dist2.end(), 0.0) * inv_size;
        if (next_error > error) {
            // Only reachable through round-off; keep the previous samples.
            result.converged = true;
            break;
        }
        const double decrease = error - next_error;
        result.samples = std::move(next);
        part = std::move(next_part);
        result.trace.push_back(next_error);
        ++result.iterations;
        const bool negligible = error <= 0.0 || decrease / error < cfg.tol;
        error = next_error;
        if (negligible) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace manidisc
