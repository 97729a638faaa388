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
#include <optional>
#include <span>
#include <vector>

#include "manidisc/geometry.hpp"

namespace manidisc {

/// One sample set per class manifold, in manifold order. Class labels in a
/// labelled cloud refer to SampleSet::manifold_id.
struct MultiSampleSet {
    std::vector<SampleSet> sets;

    std::size_t total() const;
    std::vector<std::size_t> Allocation() const;
    /// Position of the set with this manifold id; throws UsageError if absent.
    std::size_t IndexOf(int manifold_id) const;
    /// At least two sets, none empty, distinct ids.
    void Validate() const;
};

struct Classification {
    int label = 0;
    std::size_t manifold_index = 0;
    std::size_t sample_index = 0;
    double distance = 0.0;
};

/// Nearest sample over all manifolds; ties go to the lowest (manifold, sample).
Classification Classify(std::span<const double> x, const MultiSampleSet& msets);

/// Labels every point with the manifold at least distance (ties to the lower
/// position), using projections at the given density.
PointCloud LabelByProjection(const PointCloud& cloud, std::span<const Manifold> manifolds,
                             GridSpec grid = GridSpec::Oracle(), DescentConfig descent = DescentConfig::Oracle());

/// Keeps generation labels when the cloud already carries them, otherwise
/// falls back to LabelByProjection.
PointCloud TrueLabels(const PointCloud& cloud, std::span<const Manifold> manifolds,
                      GridSpec grid = GridSpec::Oracle(), DescentConfig descent = DescentConfig::Oracle());

/// The two ways of counting misclassified points, plus the direct count.
struct ErrorForms {
    std::size_t e_form = 0;          // class-m points lost by the cells of manifold m
    std::size_t f_form = 0;          // foreign points captured by the cells of manifold m
    std::size_t misclassified = 0;   // direct Classify mismatch count
    std::size_t total = 0;
};

ErrorForms ClassificationErrorForms(const MultiSampleSet& msets, const PointCloud& cloud);

/// Fraction of misclassified points. Throws std::logic_error if the E-form and
/// F-form counts disagree.
double ClassificationError(const MultiSampleSet& msets, const PointCloud& cloud);

/// Points of the own-manifold cell of sample (m, i) that it loses (theta) or
/// wrongly wins (phi), with their centroids.
struct MisclassRegions {
    std::vector<std::size_t> theta_points;
    std::vector<std::size_t> phi_points;
    std::optional<Vector> theta_centroid;
    std::optional<Vector> phi_centroid;
};

MisclassRegions MisclassifiedRegions(std::size_t m, std::size_t i, const MultiSampleSet& msets,
                                     const PointCloud& cloud);

/// Per-sample Monte Carlo region sizes.
struct RegionCounts {
    std::vector<std::vector<std::size_t>> theta;  // [m][i]
    std::vector<std::vector<std::size_t>> phi;
    std::vector<std::vector<std::size_t>> cell;   // points whose global nearest sample is (m, i)
};

/// Incrementally maintained nearest-sample structure over a labelled cloud.
///
/// For every point and manifold it keeps the best and second-best sample, so
/// moving, inserting or deleting one sample costs one distance per point plus
/// a rescan of that manifold for the points whose top two changed.
class ClassificationState {
 public:
    ClassificationState(MultiSampleSet msets, const PointCloud& cloud);

    const MultiSampleSet& msets() const { return msets_; }
    const PointCloud& cloud() const { return *cloud_; }
    std::size_t num_manifolds() const { return msets_.sets.size(); }
    std::size_t misclassified() const { return wrong_count_; }
    double epsilon() const;

    Classification Winner(std::size_t p) const;

    /// Misclassified count if sample (m, i) were moved to `point`.
    std::size_t TrialMisclassified(std::size_t m, std::size_t i, std::span<const double> point) const;

    void Replace(std::size_t m, std::size_t i, ManifoldSample sample);
    void Remove(std::size_t m, std::size_t i);
    void Insert(std::size_t m, ManifoldSample sample);

    MisclassRegions Regions(std::size_t m, std::size_t i) const;
    RegionCounts Counts() const;
    ErrorForms Forms() const;

 private:
    struct TopTwo {
        double d2 = 0.0;
        std::size_t idx = 0;
        double d2_second = 0.0;
        std::size_t idx_second = kNone;
    };
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    TopTwo& top(std::size_t p, std::size_t m) { return cache_[p * num_manifolds() + m]; }
    const TopTwo& top(std::size_t p, std::size_t m) const { return cache_[p * num_manifolds() + m]; }
    void RescanManifold(std::size_t p, std::size_t m);
    void RefreshWrong(std::size_t p);
    std::size_t WinnerManifold(std::size_t p, std::size_t m_override, double d2, std::size_t idx) const;

    MultiSampleSet msets_;
    const PointCloud* cloud_;
    std::vector<std::size_t> label_index_;  // manifold position of each point's label
    std::vector<TopTwo> cache_;
    std::vector<unsigned char> wrong_;
    std::size_t wrong_count_ = 0;
};

}  // namespace manidisc
