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

#include "manidisc/classification.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "manidisc/remd.hpp"
#include "manidisc/simd/kernels.hpp"

namespace manidisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Total order used by every nearest-sample decision: distance, then manifold
// position, then sample index.
struct Key {
    double d2;
    std::size_t m;
    std::size_t i;

    bool operator<(const Key& o) const { return std::tie(d2, m, i) < std::tie(o.d2, o.m, o.i); }
};

}  // namespace

// MultiSampleSet ----------------------------------------------------------------

std::size_t MultiSampleSet::total() const {
    std::size_t n = 0;
    for (const auto& s : sets) {
        n += s.size();
    }
    return n;
}

std::vector<std::size_t> MultiSampleSet::Allocation() const {
    std::vector<std::size_t> a;
    a.reserve(sets.size());
    for (const auto& s : sets) {
        a.push_back(s.size());
    }
    return a;
}

std::size_t MultiSampleSet::IndexOf(int manifold_id) const {
    for (std::size_t m = 0; m < sets.size(); ++m) {
        if (sets[m].manifold_id == manifold_id) {
            return m;
        }
    }
    throw UsageError("label " + std::to_string(manifold_id) + " does not name a manifold");
}

void MultiSampleSet::Validate() const {
    if (sets.size() < 2) {
        throw UsageError("joint discretization needs at least two manifolds");
    }
    std::set<int> ids;
    for (const auto& s : sets) {
        if (s.empty()) {
            throw UsageError("every manifold needs at least one sample");
        }
        if (!ids.insert(s.manifold_id).second) {
            throw UsageError("duplicate manifold id " + std::to_string(s.manifold_id));
        }
    }
}

// Free functions ------------------------------------------------------------------

Classification Classify(std::span<const double> x, const MultiSampleSet& msets) {
    Key best{kInf, 0, 0};
    for (std::size_t m = 0; m < msets.sets.size(); ++m) {
        const auto& samples = msets.sets[m].samples;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Key k{simd::L2Sqr(x, samples[i].point), m, i};
            if (k < best) {
                best = k;
            }
        }
    }
    if (!std::isfinite(best.d2)) {
        throw UsageError("classification against empty sample sets");
    }
    return {msets.sets[best.m].manifold_id, best.m, best.i, std::sqrt(best.d2)};
}

PointCloud LabelByProjection(const PointCloud& cloud, std::span<const Manifold> manifolds, GridSpec grid,
                             DescentConfig descent) {
    if (manifolds.empty()) {
        throw UsageError("labelling needs at least one manifold");
    }
    std::vector<Projector> projectors;
    projectors.reserve(manifolds.size());
    for (const auto& m : manifolds) {
        projectors.emplace_back(m, grid, descent);
    }
    std::vector<int> labels(cloud.size());
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        double best = kInf;
        for (const auto& proj : projectors) {
            const double d = proj.Project(cloud.point(p)).distance;
            if (d < best) {
                best = d;
                labels[p] = proj.manifold().id();
            }
        }
    }
    PointCloud out = cloud;
    out.set_labels(std::move(labels));
    return out;
}

PointCloud TrueLabels(const PointCloud& cloud, std::span<const Manifold> manifolds, GridSpec grid,
                      DescentConfig descent) {
    if (cloud.has_labels()) {
        return cloud;
    }
    return LabelByProjection(cloud, manifolds, grid, descent);
}

ErrorForms ClassificationErrorForms(const MultiSampleSet& msets, const PointCloud& cloud) {
    ClassificationState state(msets, cloud);
    ErrorForms forms = state.Forms();
    // Direct count, independent of the cached structure.
    forms.misclassified = 0;
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        if (Classify(cloud.point(p), msets).label != cloud.label(p)) {
            ++forms.misclassified;
        }
    }
    return forms;
}

double ClassificationError(const MultiSampleSet& msets, const PointCloud& cloud) {
    const ErrorForms forms = ClassificationErrorForms(msets, cloud);
    if (forms.e_form != forms.f_form || forms.e_form != forms.misclassified) {
        throw std::logic_error("E-form (" + std::to_string(forms.e_form) + "), F-form (" +
                               std::to_string(forms.f_form) + ") and direct (" +
                               std::to_string(forms.misclassified) + ") error counts disagree");
    }
    return forms.total == 0 ? 0.0 : static_cast<double>(forms.misclassified) / static_cast<double>(forms.total);
}

MisclassRegions MisclassifiedRegions(std::size_t m, std::size_t i, const MultiSampleSet& msets,
                                     const PointCloud& cloud) {
    return ClassificationState(msets, cloud).Regions(m, i);
}

// ClassificationState ---------------------------------------------------------------

ClassificationState::ClassificationState(MultiSampleSet msets, const PointCloud& cloud)
    : msets_(std::move(msets)), cloud_(&cloud) {
    if (msets_.sets.empty()) {
        throw UsageError("classification needs at least one manifold");
    }
    for (const auto& s : msets_.sets) {
        if (s.empty()) {
            throw UsageError("every manifold needs at least one sample");
        }
        for (const auto& sample : s.samples) {
            if (sample.point.size() != cloud.dim()) {
                throw UsageError("sample and cloud dimensions differ");
            }
        }
    }
    if (!cloud.empty() && !cloud.has_labels()) {
        throw UsageError("classification error needs a labelled cloud");
    }
    label_index_.resize(cloud.size());
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        label_index_[p] = msets_.IndexOf(cloud.label(p));
    }
    cache_.resize(cloud.size() * num_manifolds());
    wrong_.assign(cloud.size(), 0);
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        for (std::size_t m = 0; m < num_manifolds(); ++m) {
            RescanManifold(p, m);
        }
        RefreshWrong(p);
    }
}

double ClassificationState::epsilon() const {
    return cloud_->empty() ? 0.0 : static_cast<double>(wrong_count_) / static_cast<double>(cloud_->size());
}

void ClassificationState::RescanManifold(std::size_t p, std::size_t m) {
    TopTwo t{kInf, kNone, kInf, kNone};
    const auto x = cloud_->point(p);
    const auto& samples = msets_.sets[m].samples;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = simd::L2Sqr(x, samples[i].point);
        if (d < t.d2) {
            t.d2_second = t.d2;
            t.idx_second = t.idx;
            t.d2 = d;
            t.idx = i;
        } else if (d < t.d2_second) {
            t.d2_second = d;
            t.idx_second = i;
        }
    }
    top(p, m) = t;
}

std::size_t ClassificationState::WinnerManifold(std::size_t p, std::size_t m_override, double d2,
                                                std::size_t /*idx*/) const {
    double best = kInf;
    std::size_t winner = 0;
    for (std::size_t m = 0; m < num_manifolds(); ++m) {
        const double d = m == m_override ? d2 : top(p, m).d2;
        if (d < best) {
            best = d;
            winner = m;
        }
    }
    return winner;
}

void ClassificationState::RefreshWrong(std::size_t p) {
    const bool wrong = WinnerManifold(p, kNone, 0.0, 0) != label_index_[p];
    if (wrong != static_cast<bool>(wrong_[p])) {
        wrong_count_ = wrong ? wrong_count_ + 1 : wrong_count_ - 1;
        wrong_[p] = wrong ? 1 : 0;
    }
}

Classification ClassificationState::Winner(std::size_t p) const {
    const std::size_t m = WinnerManifold(p, kNone, 0.0, 0);
    const TopTwo& t = top(p, m);
    return {msets_.sets[m].manifold_id, m, t.idx, std::sqrt(t.d2)};
}

std::size_t ClassificationState::TrialMisclassified(std::size_t m, std::size_t i,
                                                    std::span<const double> point) const {
    std::size_t wrong = 0;
    for (std::size_t p = 0; p < cloud_->size(); ++p) {
        const double d = simd::L2Sqr(cloud_->point(p), point);
        const TopTwo& t = top(p, m);
        Key own{d, m, i};
        if (t.idx == i) {
            if (t.idx_second != kNone) {
                const Key second{t.d2_second, m, t.idx_second};
                if (second < own) {
                    own = second;
                }
            }
        } else {
            const Key current{t.d2, m, t.idx};
            if (current < own) {
                own = current;
            }
        }
        if (WinnerManifold(p, m, own.d2, own.i) != label_index_[p]) {
            ++wrong;
        }
    }
    return wrong;
}

void ClassificationState::Replace(std::size_t m, std::size_t i, ManifoldSample sample) {
    if (sample.point.size() != cloud_->dim()) {
        throw UsageError("sample and cloud dimensions differ");
    }
    msets_.sets[m].samples.at(i) = std::move(sample);
    const auto& point = msets_.sets[m].samples[i].point;
    for (std::size_t p = 0; p < cloud_->size(); ++p) {
        TopTwo& t = top(p, m);
        if (t.idx == i || t.idx_second == i) {
            RescanManifold(p, m);
        } else {
            const double d = simd::L2Sqr(cloud_->point(p), point);
            if (Key{d, m, i} < Key{t.d2, m, t.idx}) {
                t.d2_second = t.d2;
                t.idx_second = t.idx;
                t.d2 = d;
                t.idx = i;
            } else if (t.idx_second == kNone || Key{d, m, i} < Key{t.d2_second, m, t.idx_second}) {
                t.d2_second = d;
                t.idx_second = i;
            }
        }
        RefreshWrong(p);
    }
}

void ClassificationState::Remove(std::size_t m, std::size_t i) {
    auto& samples = msets_.sets[m].samples;
    if (samples.size() <= 1) {
        throw UsageError("cannot remove the last sample of a manifold");
    }
    samples.erase(samples.begin() + static_cast<std::ptrdiff_t>(i));
    for (std::size_t p = 0; p < cloud_->size(); ++p) {
        RescanManifold(p, m);
        RefreshWrong(p);
    }
}

void ClassificationState::Insert(std::size_t m, ManifoldSample sample) {
    if (sample.point.size() != cloud_->dim()) {
        throw UsageError("sample and cloud dimensions differ");
    }
    auto& samples = msets_.sets[m].samples;
    samples.push_back(std::move(sample));
    const std::size_t i = samples.size() - 1;
    const auto& point = samples[i].point;
    for (std::size_t p = 0; p < cloud_->size(); ++p) {
        TopTwo& t = top(p, m);
        const double d = simd::L2Sqr(cloud_->point(p), point);
        // New index is the largest, so it loses every tie.
        if (d < t.d2) {
            t.d2_second = t.d2;
            t.idx_second = t.idx;
            t.d2 = d;
            t.idx = i;
        } else if (t.idx_second == kNone || d < t.d2_second) {
            t.d2_second = d;
            t.idx_second = i;
        }
        RefreshWrong(p);
    }
}

MisclassRegions ClassificationState::Regions(std::size_t m, std::size_t i) const {
    MisclassRegions regions;
    if (m >= num_manifolds() || i >= msets_.sets[m].size()) {
        throw UsageError("sample reference out of range");
    }
    for (std::size_t p = 0; p < cloud_->size(); ++p) {
        const TopTwo& t = top(p, m);
        if (t.idx != i) {
            continue;
        }
        Key foreign{kInf, 0, 0};
        for (std::size_t r = 0; r < num_manifolds(); ++r) {
            if (r == m) {
                continue;
            }
            const Key k{top(p, r).d2, r, top(p, r).idx};
            if (k < foreign) {
                foreign = k;
            }
        }
        const Key own{t.d2, m, i};
        if (label_index_[p] == m) {
            if (foreign < own) {
                regions.theta_points.push_back(p);
            }
        } else if (own < foreign) {
            regions.phi_points.push_back(p);
        }
    }
    regions.theta_centroid = Centroid(*cloud_, regions.theta_points);
    regions.phi_centroid = Centroid(*cloud_, regions.phi_points);
    return regions;
}

RegionCounts ClassificationState::Counts() const {
    RegionCounts counts;
    const std::size_t n_man = num_manifolds();
    counts.theta.resize(n_man);
    counts.phi.resize(n_man);
    counts.cell.resize(n_man);
    for (std::size_t m = 0; m < n_man; ++m) {
        counts.theta[m].assign(msets_.sets[m].size(), 0);
        counts.phi[m].assign(msets_.sets[m].size(), 0);
        counts.cell[m].assign(msets_.sets[m].size(), 0);
    }
    for (std::size_t p = 0; p < cloud_->size(); ++p) {
        // Winner and runner-up over manifold bests.
        Key first{kInf, 0, 0};
        Key second{kInf, 0, 0};
        for (std::size_t m = 0; m < n_man; ++m) {
            const Key k{top(p, m).d2, m, top(p, m).idx};
            if (k < first) {
                second = first;
                first = k;
            } else if (k < second) {
                second = k;
            }
        }
        ++counts.cell[first.m][first.i];
        for (std::size_t m = 0; m < n_man; ++m) {
            const Key own{top(p, m).d2, m, top(p, m).idx};
            const Key& foreign = first.m == m ? second : first;
            if (label_index_[p] == m) {
                if (foreign < own) {
                    ++counts.theta[m][own.i];
                }
            } else if (own < foreign) {
                ++counts.phi[m][own.i];
            }
        }
    }
    return counts;
}

ErrorForms ClassificationState::Forms() const {
    const RegionCounts counts = Counts();
    ErrorForms forms;
    for (std::size_t m = 0; m < num_manifolds(); ++m) {
        for (std::size_t i = 0; i < counts.theta[m].size(); ++i) {
            forms.e_form += counts.theta[m][i];
            forms.f_form += counts.phi[m][i];
        }
    }
    forms.misclassified = wrong_count_;
    forms.total = cloud_->size();
    return forms;
}

}  // namespace manidisc
