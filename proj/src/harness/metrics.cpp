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

#include "manidisc/harness/metrics.hpp"

#include <cmath>
#include <limits>

#include "manidisc/errors.hpp"
#include "manidisc/simd/kernels.hpp"

namespace manidisc::harness {

std::vector<ProjectionResult> OracleProjections(const Manifold& manifold, const PointCloud& cloud, GridSpec grid,
                                                DescentConfig descent) {
    const Projector projector(manifold, grid, descent);
    std::vector<ProjectionResult> out;
    out.reserve(cloud.size());
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        out.push_back(projector.Project(cloud.point(p)));
    }
    return out;
}

RegistrationReport RegistrationMetrics(const SampleSet& set, const PointCloud& test,
                                       std::span<const ProjectionResult> projections) {
    if (projections.size() != test.size()) {
        throw UsageError("one projection per test point is required");
    }
    RegistrationReport report;
    report.per_point.reserve(test.size());
    double total = 0.0;
    for (std::size_t p = 0; p < test.size(); ++p) {
        const NearestSample nearest = NearestSquared(test.point(p), set);
        const double e = std::sqrt(simd::L2Sqr(projections[p].point, set.samples[nearest.index].point));
        report.per_point.push_back(e);
        total += e;
    }
    report.mean = test.empty() ? 0.0 : total / static_cast<double>(test.size());
    return report;
}

RegistrationReport RegistrationMetrics(const Manifold& manifold, const SampleSet& set, const PointCloud& test,
                                       GridSpec grid, DescentConfig descent) {
    const auto projections = OracleProjections(manifold, test, grid, descent);
    return RegistrationMetrics(set, test, projections);
}

ShareReport ClosestSampleShare(std::span<const SampleSet> sets_by_method, const PointCloud& test) {
    if (sets_by_method.size() < 2) {
        throw UsageError("closest-sample share needs at least two methods");
    }
    ShareReport report;
    report.wins.assign(sets_by_method.size(), 0);
    for (std::size_t p = 0; p < test.size(); ++p) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t owner = 0;
        for (std::size_t k = 0; k < sets_by_method.size(); ++k) {
            const double d = NearestSquared(test.point(p), sets_by_method[k]).distance;
            if (d < best) {
                best = d;
                owner = k;
            }
        }
        ++report.wins[owner];
    }
    for (std::size_t w : report.wins) {
        report.percentages.push_back(test.empty() ? 0.0
                                                  : 100.0 * static_cast<double>(w) / static_cast<double>(test.size()));
    }
    return report;
}

ClassificationReport ClassificationMetrics(const MultiSampleSet& msets, const PointCloud& test) {
    if (!test.has_labels()) {
        throw UsageError("classification metrics need a labelled test cloud");
    }
    ClassificationReport report;
    for (std::size_t p = 0; p < test.size(); ++p) {
        if (Classify(test.point(p), msets).label != test.label(p)) {
            ++report.wrong;
        }
    }
    report.epsilon = test.empty() ? 0.0 : static_cast<double>(report.wrong) / static_cast<double>(test.size());
    report.rate = 100.0 - 100.0 * report.epsilon;
    return report;
}

}  // namespace manidisc::harness
