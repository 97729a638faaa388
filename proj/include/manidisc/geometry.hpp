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
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "manidisc/errors.hpp"
#include "manidisc/pattern.hpp"

namespace manidisc {

using Vector = std::vector<double>;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
};

/// Box of parameter values. Periodic coordinates live on [lo, hi) and wrap.
class ParameterDomain {
 public:
    ParameterDomain() = default;
    ParameterDomain(std::vector<Interval> bounds, std::vector<bool> periodic);

    std::size_t dims() const { return bounds_.size(); }
    const Interval& bound(std::size_t j) const { return bounds_[j]; }
    bool periodic(std::size_t j) const { return periodic_[j]; }
    double width(std::size_t j) const { return bounds_[j].width(); }

    bool Contains(std::span<const double> param) const;

    /// Wraps periodic coordinates into [lo, hi). Throws DomainError when a
    /// non-periodic coordinate is outside its interval.
    Vector Canonicalize(std::span<const double> param) const;

    /// Clamps non-periodic coordinates and wraps periodic ones, in place.
    void ClampOrWrap(std::span<double> param) const;

    /// Signed difference to - from; shortest arc on periodic coordinates.
    double Difference(std::size_t j, double to, double from) const;

    Vector Center() const;

    /// Uniform draw, one uniform_real_distribution per coordinate in order.
    Vector Sample(std::mt19937_64& rng) const;

 private:
    std::vector<Interval> bounds_;
    std::vector<bool> periodic_;
};

using MappingFn = std::function<void(std::span<const double> param, std::span<double> out)>;

struct ManifoldSample {
    Vector param;
    Vector point;
};

/// Parametrized manifold U: domain -> R^n with a deterministic mapping.
class Manifold {
 public:
    Manifold(int id, std::string kind, ParameterDomain domain, std::size_t ambient_dim, MappingFn mapping);

    int id() const { return id_; }
    const std::string& kind() const { return kind_; }
    const ParameterDomain& domain() const { return domain_; }
    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t param_dim() const { return domain_.dims(); }

    Vector Map(std::span<const double> param) const;
    void MapInto(std::span<const double> param, std::span<double> out) const;

    /// Sample at the canonical form of `param`.
    ManifoldSample MakeSample(std::span<const double> param) const;

    Manifold WithId(int id) const;

 private:
    int id_;
    std::string kind_;
    ParameterDomain domain_;
    std::size_t ambient_dim_;
    MappingFn mapping_;
};

struct SampleSet {
    int manifold_id = 0;
    std::vector<ManifoldSample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

/// Finite set of ambient points stored row-major, with optional class labels.
class PointCloud {
 public:
    PointCloud() = default;
    explicit PointCloud(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
    bool empty() const { return size() == 0; }
    bool has_labels() const { return !labels_.empty() && labels_.size() == size(); }

    std::span<const double> point(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    std::span<double> point(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
    int label(std::size_t i) const { return labels_[i]; }
    const std::vector<int>& labels() const { return labels_; }
    void set_labels(std::vector<int> labels);

    void Add(std::span<const double> x);
    void Add(std::span<const double> x, int label);

    /// Points whose label equals `label`, unlabelled.
    PointCloud WithLabel(int label) const;

 private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
    std::vector<int> labels_;
};

struct NearestSample {
    std::size_t index = 0;
    double distance = 0.0;
};

/// D(x, S) and its argmin; ties go to the lowest index.
NearestSample DistanceToSet(std::span<const double> x, const SampleSet& set);

/// Squared-distance variant without the square root.
NearestSample NearestSquared(std::span<const double> x, const SampleSet& set);

/// Per-dimension counts of a tensor grid with prod(k) <= total, each count
/// proportional to the domain width, rounded by largest remainder.
std::vector<std::size_t> FactorizeGrid(const ParameterDomain& domain, std::size_t total);

/// Tensor grid, first dimension outermost. With `cell_centers` the points sit
/// at lo + (2i+1) w / (2k); otherwise they include both endpoints of
/// non-periodic intervals and step w / k on periodic ones.
std::vector<Vector> TensorGrid(const ParameterDomain& domain, std::span<const std::size_t> counts,
                               bool cell_centers);

/// Coarse grid density for projections.
struct GridSpec {
    std::size_t per_dim = 64;
    std::size_t max_points = 4096;

    static GridSpec Working() { return {64, 4096}; }
    static GridSpec Oracle() { return {256, 32768}; }

    std::vector<std::size_t> Counts(const ParameterDomain& domain) const;
};

/// Local refinement of a coarse projection.
struct DescentConfig {
    double fd_step = 1e-4;    // fraction of each domain width
    int max_iters = 100;
    double step_tol = 1e-7;   // fraction of each domain width
    int starts = 1;           // refine from this many best grid points

    static DescentConfig Oracle() { return {1e-4, 100, 1e-7, 4}; }
};

struct ProjectionResult {
    Vector param;
    Vector point;
    double distance = 0.0;
    double coarse_distance = 0.0;
    std::size_t coarse_index = 0;
    bool converged = true;
};

/// Projection onto one manifold with a cached coarse grid.
class Projector {
 public:
    explicit Projector(Manifold manifold, GridSpec grid = GridSpec::Working(), DescentConfig descent = {});

    ProjectionResult Project(std::span<const double> x) const;

    const Manifold& manifold() const { return manifold_; }
    std::size_t grid_size() const { return grid_params_.size(); }
    std::span<const double> grid_param(std::size_t i) const { return grid_params_[i]; }
    std::span<const double> grid_point(std::size_t i) const {
        return {grid_points_.data() + i * manifold_.ambient_dim(), manifold_.ambient_dim()};
    }

 private:
    struct Refined {
        Vector param;
        double dist2;
        bool converged;
    };
    Refined Descend(std::span<const double> x, Vector param, double dist2) const;

    Manifold manifold_;
    DescentConfig descent_;
    std::vector<Vector> grid_params_;
    std::vector<double> grid_points_;
    double initial_step_;
};

ProjectionResult Project(const Manifold& manifold, std::span<const double> x, GridSpec grid = GridSpec::Working(),
                         DescentConfig descent = {});

// Builtin manifolds -------------------------------------------------------

/// Circle (or arc) of `radius` in the plane of the first two ambient
/// coordinates. A missing or >= 2*pi arc gives the periodic full circle
/// on [-pi, pi).
struct CircleArcParams {
    double radius = 1.0;
    std::optional<double> start;
    std::optional<double> end;
    Vector center{0.0, 0.0};
};

/// Torus in R^3: ((R + r cos v) cos u, (R + r cos v) sin u, r sin v).
struct Torus2dParams {
    double major_radius = 2.0;
    double minor_radius = 0.5;
    Vector center{0.0, 0.0, 0.0};
};

/// U(t) = a + t (b - a), t in [0, 1]. a == b gives a single point.
struct Segment1dParams {
    Vector a;
    Vector b;
};

/// Rotation/translation manifold of a raster pattern. Zero translation
/// ranges and rotation=false drop the corresponding parameter.
struct PatternRtParams {
    Raster pattern;
    std::size_t canvas_width = 0;
    std::size_t canvas_height = 0;
    bool rotation = true;
    double tx_max = 0.0;
    double ty_max = 0.0;
};

using BuiltinParams = std::variant<CircleArcParams, Torus2dParams, Segment1dParams, PatternRtParams>;

/// Throws UsageError on malformed parameters.
Manifold BuiltinManifold(int id, const BuiltinParams& params);

}  // namespace manidisc
