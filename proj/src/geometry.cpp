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

#include "manidisc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include "manidisc/simd/kernels.hpp"

namespace manidisc {

namespace {

double WrapInto(double v, const Interval& iv) {
    const double w = iv.width();
    double off = std::fmod(v - iv.lo, w);
    if (off < 0.0) {
        off += w;
    }
    double wrapped = iv.lo + off;
    if (wrapped >= iv.hi) {  // fmod round-off at the upper end
        wrapped = iv.lo;
    }
    return wrapped;
}

}  // namespace

// ParameterDomain -------------------------------------------------------------

ParameterDomain::ParameterDomain(std::vector<Interval> bounds, std::vector<bool> periodic)
    : bounds_(std::move(bounds)), periodic_(std::move(periodic)) {
    if (bounds_.empty()) {
        throw UsageError("parameter domain needs at least one dimension");
    }
    if (periodic_.size() != bounds_.size()) {
        throw UsageError("periodic flags do not match domain dimension");
    }
    for (const auto& iv : bounds_) {
        if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw UsageError("parameter interval must satisfy lo < hi");
        }
    }
}

bool ParameterDomain::Contains(std::span<const double> param) const {
    if (param.size() != dims()) {
        return false;
    }
    for (std::size_t j = 0; j < dims(); ++j) {
        if (!std::isfinite(param[j])) {
            return false;
        }
        if (!periodic_[j] && (param[j] < bounds_[j].lo || param[j] > bounds_[j].hi)) {
            return false;
        }
    }
    return true;
}

Vector ParameterDomain::Canonicalize(std::span<const double> param) const {
    if (param.size() != dims()) {
        throw UsageError("parameter vector has wrong dimension");
    }
    Vector out(param.begin(), param.end());
    for (std::size_t j = 0; j < dims(); ++j) {
        if (!std::isfinite(out[j])) {
            throw DomainError("non-finite parameter");
        }
        if (periodic_[j]) {
            out[j] = WrapInto(out[j], bounds_[j]);
        } else if (out[j] < bounds_[j].lo || out[j] > bounds_[j].hi) {
            throw DomainError("parameter " + std::to_string(j) + " = " + std::to_string(out[j]) +
                              " outside [" + std::to_string(bounds_[j].lo) + ", " +
                              std::to_string(bounds_[j].hi) + "]");
        }
    }
    return out;
}

void ParameterDomain::ClampOrWrap(std::span<double> param) const {
    for (std::size_t j = 0; j < dims(); ++j) {
        param[j] = periodic_[j] ? WrapInto(param[j], bounds_[j]) : std::clamp(param[j], bounds_[j].lo, bounds_[j].hi);
    }
}

double ParameterDomain::Difference(std::size_t j, double to, double from) const {
    double d = to - from;
    if (periodic_[j]) {
        const double w = bounds_[j].width();
        d = std::remainder(d, w);
    }
    return d;
}

Vector ParameterDomain::Center() const {
    Vector c(dims());
    for (std::size_t j = 0; j < dims(); ++j) {
        c[j] = 0.5 * (bounds_[j].lo + bounds_[j].hi);
    }
    return c;
}

Vector ParameterDomain::Sample(std::mt19937_64& rng) const {
    Vector p(dims());
    for (std::size_t j = 0; j < dims(); ++j) {
        std::uniform_real_distribution<double> dist(bounds_[j].lo, bounds_[j].hi);
        p[j] = dist(rng);
        if (periodic_[j]) {
            p[j] = WrapInto(p[j], bounds_[j]);
        }
    }
    return p;
}

// Manifold --------------------------------------------------------------------

Manifold::Manifold(int id, std::string kind, ParameterDomain domain, std::size_t ambient_dim, MappingFn mapping)
    : id_(id), kind_(std::move(kind)), domain_(std::move(domain)), ambient_dim_(ambient_dim),
      mapping_(std::move(mapping)) {
    if (ambient_dim_ == 0 || !mapping_) {
        throw UsageError("manifold needs a mapping and a positive ambient dimension");
    }
}

Vector Manifold::Map(std::span<const double> param) const {
    Vector out(ambient_dim_);
    MapInto(param, out);
    return out;
}

void Manifold::MapInto(std::span<const double> param, std::span<double> out) const {
    if (out.size() != ambient_dim_) {
        throw UsageError("output buffer does not match ambient dimension");
    }
    const Vector canonical = domain_.Canonicalize(param);
    mapping_(canonical, out);
}

ManifoldSample Manifold::MakeSample(std::span<const double> param) const {
    ManifoldSample s;
    s.param = domain_.Canonicalize(param);
    s.point.resize(ambient_dim_);
    mapping_(s.param, s.point);
    return s;
}

Manifold Manifold::WithId(int id) const {
    Manifold copy = *this;
    copy.id_ = id;
    return copy;
}

// PointCloud ------------------------------------------------------------------

void PointCloud::set_labels(std::vector<int> labels) {
    if (!labels.empty() && labels.size() != size()) {
        throw UsageError("label count does not match point count");
    }
    labels_ = std::move(labels);
}

void PointCloud::Add(std::span<const double> x) {
    if (dim_ == 0 && data_.empty()) {
        dim_ = x.size();
    }
    if (x.size() != dim_ || dim_ == 0) {
        throw UsageError("point dimension mismatch");
    }
    if (!labels_.empty()) {
        throw UsageError("cannot add an unlabelled point to a labelled cloud");
    }
    data_.insert(data_.end(), x.begin(), x.end());
}

void PointCloud::Add(std::span<const double> x, int label) {
    if (!data_.empty() && labels_.size() != size()) {
        throw UsageError("cannot add a labelled point to an unlabelled cloud");
    }
    if (dim_ == 0 && data_.empty()) {
        dim_ = x.size();
    }
    if (x.size() != dim_ || dim_ == 0) {
        throw UsageError("point dimension mismatch");
    }
    data_.insert(data_.end(), x.begin(), x.end());
    labels_.push_back(label);
}

PointCloud PointCloud::WithLabel(int label) const {
    if (!has_labels() && !empty()) {
        throw UsageError("cannot select by label in an unlabelled cloud");
    }
    PointCloud out(dim_);
    for (std::size_t i = 0; i < size(); ++i) {
        if (labels_[i] == label) {
            out.Add(point(i));
        }
    }
    return out;
}

// Nearest sample --------------------------------------------------------------

NearestSample NearestSquared(std::span<const double> x, const SampleSet& set) {
    if (set.empty()) {
        throw UsageError("distance to an empty sample set");
    }
    NearestSample best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& p = set.samples[i].point;
        if (p.size() != x.size()) {
            throw UsageError("ambient dimension mismatch");
        }
        const double d2 = simd::L2Sqr(x, p);
        if (d2 < best.distance) {
            best = {i, d2};
        }
    }
    return best;
}

NearestSample DistanceToSet(std::span<const double> x, const SampleSet& set) {
    NearestSample n = NearestSquared(x, set);
    n.distance = std::sqrt(n.distance);
    return n;
}

// Grids -----------------------------------------------------------------------

std::vector<std::size_t> FactorizeGrid(const ParameterDomain& domain, std::size_t total) {
    const std::size_t d = domain.dims();
    std::vector<std::size_t> k(d, 1);
    if (total <= 1) {
        return k;
    }
    double log_width_sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        log_width_sum += std::log(domain.width(j));
    }
    const double log_scale = (std::log(static_cast<double>(total)) - log_width_sum) / static_cast<double>(d);
    std::vector<double> remainder(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        const double ideal = std::exp(std::log(domain.width(j)) + log_scale);
        // Guard against exp/log round-off turning an exact integer into n - 1e-15.
        const double floored = std::floor(ideal + 1e-9);
        k[j] = static_cast<std::size_t>(std::max(1.0, floored));
        remainder[j] = ideal - floored;
    }
    auto product = [&k] {
        return std::accumulate(k.begin(), k.end(), std::size_t{1}, std::multiplies<>());
    };
    // Clamping a tiny ideal count up to 1 can push the product over budget.
    while (product() > total) {
        auto largest = std::max_element(k.begin(), k.end());
        --*largest;
    }
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&remainder](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t j : order) {
        const std::size_t p = product();
        if (p / k[j] * (k[j] + 1) <= total) {
            ++k[j];
        }
    }
    return k;
}

std::vector<Vector> TensorGrid(const ParameterDomain& domain, std::span<const std::size_t> counts,
                               bool cell_centers) {
    const std::size_t d = domain.dims();
    if (counts.size() != d) {
        throw UsageError("grid counts do not match domain dimension");
    }
    std::vector<Vector> axes(d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t kj = counts[j];
        if (kj == 0) {
            throw UsageError("grid needs at least one point per dimension");
        }
        const Interval& iv = domain.bound(j);
        const double w = iv.width();
        for (std::size_t i = 0; i < kj; ++i) {
            const double fi = static_cast<double>(i);
            const double fk = static_cast<double>(kj);
            double v = 0.0;
            if (cell_centers) {
                v = iv.lo + (2.0 * fi + 1.0) * w / (2.0 * fk);
            } else if (domain.periodic(j)) {
                v = iv.lo + fi * w / fk;
            } else if (kj == 1) {
                v = iv.lo + 0.5 * w;
            } else {
                v = iv.lo + fi * w / (fk - 1.0);
            }
            axes[j].push_back(v);
        }
    }
    std::size_t n = 1;
    for (std::size_t kj : counts) {
        n *= kj;
    }
    std::vector<Vector> grid;
    grid.reserve(n);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t g = 0; g < n; ++g) {
        Vector p(d);
        for (std::size_t j = 0; j < d; ++j) {
            p[j] = axes[j][idx[j]];
        }
        grid.push_back(std::move(p));
        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] < counts[j]) {
                break;
            }
            idx[j] = 0;
        }
    }
    return grid;
}

std::vector<std::size_t> GridSpec::Counts(const ParameterDomain& domain) const {
    if (per_dim == 0 || max_points == 0) {
        throw UsageError("grid spec must yield at least one point per dimension");
    }
    const std::size_t d = domain.dims();
    double full = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        full *= static_cast<double>(per_dim);
    }
    if (full <= static_cast<double>(max_points)) {
        return std::vector<std::size_t>(d, per_dim);
    }
    auto counts = FactorizeGrid(domain, max_points);
    for (auto& c : counts) {
        c = std::min(c, per_dim);
    }
    return counts;
}

// Projection ------------------------------------------------------------------

Projector::Projector(Manifold manifold, GridSpec grid, DescentConfig descent)
    : manifold_(std::move(manifold)), descent_(descent) {
    const auto counts = grid.Counts(manifold_.domain());
    grid_params_ = TensorGrid(manifold_.domain(), counts, false);
    const std::size_t n = manifold_.ambient_dim();
    grid_points_.resize(grid_params_.size() * n);
    for (std::size_t g = 0; g < grid_params_.size(); ++g) {
        manifold_.MapInto(grid_params_[g], std::span<double>(grid_points_.data() + g * n, n));
    }
    const std::size_t kmax = *std::max_element(counts.begin(), counts.end());
    initial_step_ = 0.5 / static_cast<double>(kmax);
    descent_.starts = std::max(1, descent_.starts);
}

Projector::Refined Projector::Descend(std::span<const double> x, Vector param, double dist2) const {
    const ParameterDomain& dom = manifold_.domain();
    const std::size_t d = dom.dims();
    Vector scratch(manifold_.ambient_dim());
    auto objective = [&](const Vector& p) {
        manifold_.MapInto(p, scratch);
        return simd::L2Sqr(x, scratch);
    };

    Vector grad(d);
    Vector probe(d);
    Vector candidate(d);
    double step = initial_step_;
    for (int iter = 0; iter < descent_.max_iters; ++iter) {
        // Central differences in width-normalised coordinates.
        double norm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const Interval& iv = dom.bound(j);
            const double h = descent_.fd_step * iv.width();
            probe = param;
            double plus = param[j] + h;
            double minus = param[j] - h;
            if (!dom.periodic(j)) {
                plus = std::min(plus, iv.hi);
                minus = std::max(minus, iv.lo);
            }
            probe[j] = plus;
            dom.ClampOrWrap(probe);
            const double f_plus = objective(probe);
            probe[j] = minus;
            dom.ClampOrWrap(probe);
            const double f_minus = objective(probe);
            double g = (f_plus - f_minus) / (plus - minus) * iv.width();
            if (!dom.periodic(j)) {
                // Drop components that would push through an active bound.
                if ((param[j] <= iv.lo && g > 0.0) || (param[j] >= iv.hi && g < 0.0)) {
                    g = 0.0;
                }
            }
            grad[j] = g;
            norm2 += g * g;
        }
        if (!(norm2 > 0.0)) {
            return {std::move(param), dist2, true};
        }
        const double norm = std::sqrt(norm2);

        step = std::min(2.0 * step, 0.5);
        double f_candidate = dist2;
        bool accepted = false;
        while (step >= descent_.step_tol) {
            for (std::size_t j = 0; j < d; ++j) {
                candidate[j] = param[j] - step * dom.width(j) * grad[j] / norm;
            }
            dom.ClampOrWrap(candidate);
            f_candidate = objective(candidate);
            if (f_candidate < dist2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            return {std::move(param), dist2, true};
        }
        double moved2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double dj = dom.Difference(j, candidate[j], param[j]) / dom.width(j);
            moved2 += dj * dj;
        }
        param = candidate;
        dist2 = f_candidate;
        if (std::sqrt(moved2) < descent_.step_tol) {
            return {std::move(param), dist2, true};
        }
    }
    return {std::move(param), dist2, false};
}

ProjectionResult Projector::Project(std::span<const double> x) const {
    const std::size_t n = manifold_.ambient_dim();
    if (x.size() != n) {
        throw UsageError("query point does not match the manifold ambient dimension");
    }
    // Keep the `starts` best grid points ordered by (distance, index).
    // Distances within a relative 1e-12 count as ties so that equidistant
    // grid points resolve to the lowest index despite rounding in the map.
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(descent_.starts), grid_size());
    const auto closer = [](double a, double b) { return a < b - 1e-12 * b; };
    std::vector<std::pair<double, std::size_t>> best;
    best.reserve(keep + 1);
    for (std::size_t g = 0; g < grid_size(); ++g) {
        const double d2 = simd::L2Sqr(x, grid_point(g));
        if (best.size() < keep || closer(d2, best.back().first)) {
            auto pos = std::find_if(best.begin(), best.end(), [&](const auto& e) { return closer(d2, e.first); });
            best.insert(pos, {d2, g});
            if (best.size() > keep) {
                best.pop_back();
            }
        }
    }

    ProjectionResult result;
    result.coarse_index = best.front().second;
    result.coarse_distance = std::sqrt(best.front().first);
    double best_d2 = std::numeric_limits<double>::infinity();
    bool converged = true;
    for (const auto& [d2, g] : best) {
        Refined r = Descend(x, grid_params_[g], d2);
        if (r.dist2 < best_d2) {
            best_d2 = r.dist2;
            result.param = std::move(r.param);
            converged = r.converged;
        }
    }
    result.point = manifold_.Map(result.param);
    result.distance = std::sqrt(best_d2);
    result.converged = converged;
    return result;
}

ProjectionResult Project(const Manifold& manifold, std::span<const double> x, GridSpec grid, DescentConfig descent) {
    return Projector(manifold, grid, descent).Project(x);
}

// Builtins ----------------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

Manifold MakeCircle(int id, const CircleArcParams& p) {
    if (!(p.radius > 0.0) || p.center.size() < 2) {
        throw UsageError("circle_arc needs radius > 0 and a centre with at least 2 coordinates");
    }
    bool full = !p.start.has_value() || !p.end.has_value();
    Interval iv{-kPi, kPi};
    if (!full) {
        if (!(*p.end > *p.start)) {
            throw UsageError("circle_arc needs a positive arc length");
        }
        full = *p.end - *p.start >= 2.0 * kPi;
        iv = full ? Interval{*p.start, *p.start + 2.0 * kPi} : Interval{*p.start, *p.end};
    }
    const double r = p.radius;
    const Vector center = p.center;
    ParameterDomain dom({iv}, {full});
    return Manifold(id, "circle_arc", std::move(dom), center.size(),
                    [r, center](std::span<const double> lam, std::span<double> out) {
                        std::copy(center.begin(), center.end(), out.begin());
                        out[0] += r * std::cos(lam[0]);
                        out[1] += r * std::sin(lam[0]);
                    });
}

Manifold MakeTorus(int id, const Torus2dParams& p) {
    if (!(p.major_radius > 0.0) || !(p.minor_radius > 0.0) || p.center.size() != 3) {
        throw UsageError("torus_2d needs positive radii and a 3-d centre");
    }
    const double big = p.major_radius;
    const double small = p.minor_radius;
    const Vector center = p.center;
    ParameterDomain dom({{-kPi, kPi}, {-kPi, kPi}}, {true, true});
    return Manifold(id, "torus_2d", std::move(dom), 3,
                    [big, small, center](std::span<const double> lam, std::span<double> out) {
                        const double ring = big + small * std::cos(lam[1]);
                        out[0] = center[0] + ring * std::cos(lam[0]);
                        out[1] = center[1] + ring * std::sin(lam[0]);
                        out[2] = center[2] + small * std::sin(lam[1]);
                    });
}

Manifold MakeSegment(int id, const Segment1dParams& p) {
    if (p.a.empty() || p.a.size() != p.b.size()) {
        throw UsageError("segment_1d endpoints must be non-empty and of equal dimension");
    }
    const Vector a = p.a;
    Vector dir(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        dir[i] = p.b[i] - a[i];
    }
    ParameterDomain dom({{0.0, 1.0}}, {false});
    return Manifold(id, "segment_1d", std::move(dom), a.size(),
                    [a, dir](std::span<const double> lam, std::span<double> out) {
                        for (std::size_t i = 0; i < a.size(); ++i) {
                            out[i] = a[i] + lam[0] * dir[i];
                        }
                    });
}

Manifold MakePattern(int id, const PatternRtParams& p) {
    if (p.tx_max < 0.0 || p.ty_max < 0.0) {
        throw UsageError("pattern_rt translation ranges must be nonnegative");
    }
    auto renderer = std::make_shared<const PatternRenderer>(p.pattern, p.canvas_width, p.canvas_height);
    std::vector<Interval> bounds;
    std::vector<bool> periodic;
    int psi_slot = -1;
    int tx_slot = -1;
    int ty_slot = -1;
    if (p.rotation) {
        psi_slot = static_cast<int>(bounds.size());
        bounds.push_back({-kPi, kPi});
        periodic.push_back(true);
    }
    if (p.tx_max > 0.0) {
        tx_slot = static_cast<int>(bounds.size());
        bounds.push_back({-p.tx_max, p.tx_max});
        periodic.push_back(false);
    }
    if (p.ty_max > 0.0) {
        ty_slot = static_cast<int>(bounds.size());
        bounds.push_back({-p.ty_max, p.ty_max});
        periodic.push_back(false);
    }
    if (bounds.empty()) {
        throw UsageError("pattern_rt needs rotation or a nonzero translation range");
    }
    // Sufficient condition for every transform in the domain to fit.
    const double half_w = (static_cast<double>(p.canvas_width) - 1.0) / 2.0;
    const double half_h = (static_cast<double>(p.canvas_height) - 1.0) / 2.0;
    bool fits = true;
    if (p.rotation) {
        fits = renderer->support_radius() + p.tx_max <= half_w + 1e-9 &&
               renderer->support_radius() + p.ty_max <= half_h + 1e-9;
    } else {
        for (double sx : {-1.0, 1.0}) {
            for (double sy : {-1.0, 1.0}) {
                fits = fits && renderer->Fits(0.0, sx * p.tx_max, sy * p.ty_max);
            }
        }
    }
    if (!fits) {
        throw UsageError("pattern does not fit the canvas over the whole parameter domain");
    }
    ParameterDomain dom(std::move(bounds), std::move(periodic));
    const std::size_t n = renderer->ambient_dim();
    return Manifold(id, "pattern_rt", std::move(dom), n,
                    [renderer, psi_slot, tx_slot, ty_slot](std::span<const double> lam, std::span<double> out) {
                        const double psi = psi_slot >= 0 ? lam[static_cast<std::size_t>(psi_slot)] : 0.0;
                        const double tx = tx_slot >= 0 ? lam[static_cast<std::size_t>(tx_slot)] : 0.0;
                        const double ty = ty_slot >= 0 ? lam[static_cast<std::size_t>(ty_slot)] : 0.0;
                        renderer->Render(psi, tx, ty, out);
                    });
}

}  // namespace

Manifold BuiltinManifold(int id, const BuiltinParams& params) {
    return std::visit(
        [id](const auto& p) -> Manifold {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, CircleArcParams>) {
                return MakeCircle(id, p);
            } else if constexpr (std::is_same_v<T, Torus2dParams>) {
                return MakeTorus(id, p);
            } else if constexpr (std::is_same_v<T, Segment1dParams>) {
                return MakeSegment(id, p);
            } else {
                return MakePattern(id, p);
            }
        },
        params);
}

}  // namespace manidisc
