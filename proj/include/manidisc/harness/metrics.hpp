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
#include <span>
#include <vector>

#include "manidisc/classification.hpp"
#include "manidisc/geometry.hpp"

namespace manidisc::harness {

/// Oracle projections of every cloud point onto one manifold.
std::vector<ProjectionResult> OracleProjections(const Manifold& manifold, const PointCloud& cloud,
                                                GridSpec grid = GridSpec::Oracle(),
                                                DescentConfig descent = DescentConfig::Oracle());

struct RegistrationReport {
    double mean = 0.0;
    std::vector<double> per_point;
};

/// e(x) = || projection(x) - nearest sample(x) ||, with the projections given.
RegistrationReport RegistrationMetrics(const SampleSet& set, const PointCloud& test,
                                       std::span<const ProjectionResult> projections);
/// Same, computing oracle projections first.
RegistrationReport RegistrationMetrics(const Manifold& manifold, const SampleSet& set, const PointCloud& test,
                                       GridSpec grid = GridSpec::Oracle(),
                                       DescentConfig descent = DescentConfig::Oracle());

struct ShareReport {
    std::vector<std::size_t> wins;      // per method, sums to the test size
    std::vector<double> percentages;    // 100 * wins / size
};

/// For every test point, the method owning the globally nearest sample;
/// ties go to the method listed first. Needs at least two methods.
ShareReport ClosestSampleShare(std::span<const SampleSet> sets_by_method, const PointCloud& test);

struct ClassificationReport {
    double rate = 0.0;     // percent correct
    double epsilon = 0.0;  // fraction wrong; rate = 100 - 100 * epsilon
    std::size_t wrong = 0;
};

ClassificationReport ClassificationMetrics(const MultiSampleSet& msets, const PointCloud& test);

}  // namespace manidisc::harness
