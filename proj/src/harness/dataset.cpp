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

#include "manidisc/harness/dataset.hpp"

#include <cmath>
#include <random>

#include "manidisc/simd/kernels.hpp"

namespace manidisc::harness {

std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

void Draw(const Manifold& manifold, std::size_t count, double noise, std::uint64_t seed, PointCloud& cloud,
          std::vector<Vector>& params) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const bool renormalize = manifold.kind() == "pattern_rt";
    Vector x(manifold.ambient_dim());
    for (std::size_t k = 0; k < count; ++k) {
        Vector param = manifold.domain().Sample(rng);
        manifold.MapInto(param, x);
        if (noise > 0.0) {
            for (double& v : x) v += noise * gauss(rng);
        }
        if (renormalize) {
            const double norm = std::sqrt(simd::Dot(x, x));
            if (norm > 0.0) simd::Scale(1.0 / norm, x);
        }
        cloud.Add(x, manifold.id());
        params.push_back(std::move(param));
    }
}

}  // namespace

Dataset GenerateDataset(std::span<const Manifold> manifolds, const DatasetConfig& cfg, std::uint64_t seed) {
    if (manifolds.empty()) {
        throw UsageError("dataset needs at least one manifold");
    }
    const std::size_t n = manifolds.front().ambient_dim();
    Dataset data{PointCloud(n), PointCloud(n), {}, {}};
    for (std::size_t m = 0; m < manifolds.size(); ++m) {
        if (manifolds[m].ambient_dim() != n) {
            throw UsageError("manifolds must share one ambient dimension");
        }
        Draw(manifolds[m], cfg.train_per_class, cfg.noise, MixSeed(seed, 2 * m), data.train, data.train_params);
        Draw(manifolds[m], cfg.test_per_class, cfg.noise, MixSeed(seed, 2 * m + 1), data.test, data.test_params);
    }
    return data;
}

}  // namespace manidisc::harness
