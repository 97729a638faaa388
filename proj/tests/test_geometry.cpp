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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "manidisc/geometry.hpp"
#include "manidisc/pattern.hpp"

namespace manidisc {
namespace {

constexpr double kPi = std::numbers::pi;

Manifold UnitCircle(int id = 1) { return BuiltinManifold(id, CircleArcParams{}); }

SampleSet MakeSet(std::vector<Vector> points) {
    SampleSet s;
    for (auto& p : points) s.samples.push_back({Vector{0.0}, std::move(p)});
    return s;
}

double Norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// ParameterDomain ---------------------------------------------------------------

TEST(ParameterDomain, RejectsEmptyOrInvertedBounds) {
    EXPECT_THROW(ParameterDomain({}, {}), UsageError);
    EXPECT_THROW(ParameterDomain({{1.0, 1.0}}, {false}), UsageError);
    EXPECT_THROW(ParameterDomain({{0.0, 1.0}}, {false, true}), UsageError);
}

TEST(ParameterDomain, CanonicalizeWrapsPeriodicAndRejectsOutside) {
    ParameterDomain d({{-kPi, kPi}, {0.0, 1.0}}, {true, false});
    const Vector c = d.Canonicalize(Vector{kPi + 0.5, 0.25});
    EXPECT_NEAR(c[0], -kPi + 0.5, 1e-12);
    EXPECT_EQ(c[1], 0.25);
    EXPECT_THROW(d.Canonicalize(Vector{0.0, 1.5}), DomainError);
    EXPECT_TRUE(d.Contains(Vector{3.0 * kPi, 1.0}));
    EXPECT_FALSE(d.Contains(Vector{0.0, -0.1}));
}

TEST(ParameterDomain, DifferenceTakesShortestArc) {
    ParameterDomain d({{-kPi, kPi}, {0.0, 1.0}}, {true, false});
    EXPECT_NEAR(d.Difference(0, -kPi + 0.1, kPi - 0.1), 0.2, 1e-12);
    EXPECT_NEAR(d.Difference(1, 0.1, 0.9), -0.8, 1e-15);
}

TEST(ParameterDomain, ClampOrWrap) {
    ParameterDomain d({{-kPi, kPi}, {0.0, 1.0}}, {true, false});
    Vector p{kPi + 0.25, 1.7};
    d.ClampOrWrap(p);
    EXPECT_NEAR(p[0], -kPi + 0.25, 1e-12);
    EXPECT_EQ(p[1], 1.0);
}

TEST(ParameterDomain, SampleUsesOneDrawPerCoordinate) {
    ParameterDomain d({{0.0, 1.0}, {2.0, 4.0}}, {false, false});
    std::mt19937_64 rng(5);
    std::mt19937_64 ref(5);
    const Vector p = d.Sample(rng);
    std::uniform_real_distribution<double> u0(0.0, 1.0);
    std::uniform_real_distribution<double> u1(2.0, 4.0);
    const double first = u0(ref);
    EXPECT_EQ(p[0], first);
    EXPECT_EQ(p[1], u1(ref));
}

// map ---------------------------------------------------------------------------

TEST(Map, UnitCircleClosedForm) {
    const Manifold c = UnitCircle();
    const Vector a = c.Map(Vector{0.0});
    EXPECT_NEAR(a[0], 1.0, 1e-15);
    EXPECT_NEAR(a[1], 0.0, 1e-15);
    const Vector b = c.Map(Vector{kPi / 2});
    EXPECT_NEAR(b[0], 0.0, 1e-15);
    EXPECT_NEAR(b[1], 1.0, 1e-15);
}

TEST(Map, PatternIdentityTransformIsNormalizedPattern) {
    const Raster pat = SyntheticPattern("corner", 12, 12, 4.0);
    PatternRtParams p{pat, 12, 12, true, 1.0, 1.0};
    const Manifold m = BuiltinManifold(3, p);
    const Vector y = m.Map(Vector{0.0, 0.0, 0.0});
    double norm = 0.0;
    for (double v : pat.pixels) norm += v * v;
    norm = std::sqrt(norm);
    ASSERT_EQ(y.size(), pat.pixels.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        EXPECT_NEAR(y[k], pat.pixels[k] / norm, 1e-15);
    }
}

TEST(Map, OutOfDomainNonPeriodicThrows) {
    const Manifold s = BuiltinManifold(1, Segment1dParams{{0.0, 0.0}, {1.0, 0.0}});
    EXPECT_THROW(s.Map(Vector{1.5}), DomainError);
}

TEST(Map, PeriodicWrapIsIsometric) {
    const Manifold c = UnitCircle();
    const Vector a = c.Map(Vector{0.3});
    const Vector b = c.Map(Vector{0.3 + 2.0 * kPi});
    EXPECT_NEAR(a[0], b[0], 1e-12);
    EXPECT_NEAR(a[1], b[1], 1e-12);
    const Manifold t = BuiltinManifold(2, Torus2dParams{});
    const Vector u = t.Map(Vector{1.0, -2.0});
    const Vector v = t.Map(Vector{1.0 - 2.0 * kPi, -2.0 + 2.0 * kPi});
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(u[k], v[k], 1e-12);
}

TEST(Map, MakeSampleSatisfiesRecomputeCheck) {
    const Manifold t = BuiltinManifold(2, Torus2dParams{});
    const ManifoldSample s = t.MakeSample(Vector{4.0, -4.0});
    const Vector again = t.Map(s.param);
    EXPECT_EQ(s.point, again);
}

// builtin_manifold ----------------------------------------------------------------

TEST(Builtin, SegmentMidpoint) {
    const Manifold s = BuiltinManifold(1, Segment1dParams{{1.0, 2.0, 3.0}, {3.0, 6.0, -1.0}});
    const Vector mid = s.Map(Vector{0.5});
    EXPECT_EQ(mid, (Vector{2.0, 4.0, 1.0}));
}

TEST(Builtin, CircleRadiusTwoHasConstantNorm) {
    const Manifold c = BuiltinManifold(1, CircleArcParams{2.0, std::nullopt, std::nullopt, {0.0, 0.0}});
    for (int k = 0; k < 50; ++k) {
        EXPECT_NEAR(Norm(c.Map(Vector{-kPi + 0.1 * k})), 2.0, 1e-14);
    }
}

TEST(Builtin, TorusImplicitIdentity) {
    const Manifold t = BuiltinManifold(1, Torus2dParams{2.0, 0.5, {0.0, 0.0, 0.0}});
    std::mt19937_64 rng(1);
    for (int k = 0; k < 200; ++k) {
        const Vector y = t.Map(t.domain().Sample(rng));
        const double rho = std::sqrt(y[0] * y[0] + y[1] * y[1]) - 2.0;
        EXPECT_NEAR(rho * rho + y[2] * y[2], 0.25, 1e-9);
    }
}

TEST(Builtin, ArcIsNonPeriodic) {
    const Manifold a = BuiltinManifold(1, CircleArcParams{1.0, 0.0, kPi / 2, {0.0, 0.0}});
    EXPECT_FALSE(a.domain().periodic(0));
    EXPECT_THROW(a.Map(Vector{kPi}), DomainError);
}

TEST(Builtin, MalformedParamsThrow) {
    EXPECT_THROW(BuiltinManifold(1, CircleArcParams{-1.0, std::nullopt, std::nullopt, {0.0, 0.0}}), UsageError);
    EXPECT_THROW(BuiltinManifold(1, CircleArcParams{1.0, 1.0, 1.0, {0.0, 0.0}}), UsageError);
    EXPECT_THROW(BuiltinManifold(1, Torus2dParams{2.0, 0.0, {0.0, 0.0, 0.0}}), UsageError);
    EXPECT_THROW(BuiltinManifold(1, Segment1dParams{{0.0}, {1.0, 2.0}}), UsageError);
    Raster empty{0, 0, {}};
    EXPECT_THROW(BuiltinManifold(1, PatternRtParams{empty, 8, 8, true, 0.0, 0.0}), UsageError);
    // Support radius 5 plus a 3 pixel shift overflows a 12 pixel canvas.
    const Raster pat = SyntheticPattern("disk", 12, 12, 5.0);
    EXPECT_THROW(BuiltinManifold(1, PatternRtParams{pat, 12, 12, true, 3.0, 0.0}), UsageError);
}

TEST(Builtin, PatternOutputsHaveUnitNorm) {
    const Raster pat = SyntheticPattern("triangle", 16, 16, 5.0);
    const Manifold m = BuiltinManifold(1, PatternRtParams{pat, 16, 16, true, 1.5, 1.5});
    ASSERT_EQ(m.param_dim(), 3u);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 100; ++k) {
        EXPECT_NEAR(Norm(m.Map(m.domain().Sample(rng))), 1.0, 1e-9);
    }
}

TEST(Builtin, PatternDropsUnusedDimensions) {
    const Raster pat = SyntheticPattern("bar", 8, 8, 3.0);
    EXPECT_EQ(BuiltinManifold(1, PatternRtParams{pat, 8, 8, true, 0.0, 0.0}).param_dim(), 1u);
    EXPECT_EQ(BuiltinManifold(1, PatternRtParams{pat, 12, 8, false, 2.0, 0.0}).param_dim(), 1u);
}

// distance_to_set -----------------------------------------------------------------

TEST(DistanceToSet, WorkedExamples) {
    const Vector origin{0.0, 0.0};
    const NearestSample a = DistanceToSet(origin, MakeSet({{1.0, 0.0}, {0.0, 2.0}}));
    EXPECT_EQ(a.index, 0u);
    EXPECT_EQ(a.distance, 1.0);
    const SampleSet s = MakeSet({{1.0, 0.0}, {0.5, 0.5}, {0.0, 2.0}});
    const NearestSample b = DistanceToSet(Vector{0.5, 0.5}, s);
    EXPECT_EQ(b.index, 1u);
    EXPECT_EQ(b.distance, 0.0);
    const NearestSample tie = DistanceToSet(origin, MakeSet({{1.0, 0.0}, {0.0, 1.0}}));
    EXPECT_EQ(tie.index, 0u);
    EXPECT_EQ(tie.distance, 1.0);
}

TEST(DistanceToSet, EmptySetThrows) {
    EXPECT_THROW(DistanceToSet(Vector{0.0}, SampleSet{}), UsageError);
}

// grids ---------------------------------------------------------------------------

TEST(Grid, FactorizeProportionalToWidths) {
    ParameterDomain square({{0.0, 1.0}, {0.0, 1.0}}, {false, false});
    EXPECT_EQ(FactorizeGrid(square, 9), (std::vector<std::size_t>{3, 3}));
    EXPECT_EQ(FactorizeGrid(square, 1), (std::vector<std::size_t>{1, 1}));
    ParameterDomain wide({{0.0, 4.0}, {0.0, 1.0}}, {false, false});
    const auto k = FactorizeGrid(wide, 16);
    EXPECT_EQ(k, (std::vector<std::size_t>{8, 2}));
    for (std::size_t total : {2u, 5u, 17u, 100u, 4096u}) {
        const auto c = FactorizeGrid(wide, total);
        EXPECT_LE(c[0] * c[1], total);
        EXPECT_GE(c[0], c[1]);
    }
}

TEST(Grid, CellCentresAndEndpoints) {
    ParameterDomain unit({{0.0, 1.0}}, {false});
    const std::size_t three[] = {3};
    const auto centres = TensorGrid(unit, three, true);
    ASSERT_EQ(centres.size(), 3u);
    EXPECT_NEAR(centres[0][0], 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(centres[1][0], 0.5, 1e-15);
    EXPECT_NEAR(centres[2][0], 5.0 / 6.0, 1e-15);
    const auto ends = TensorGrid(unit, three, false);
    EXPECT_EQ(ends.front()[0], 0.0);
    EXPECT_EQ(ends.back()[0], 1.0);
    ParameterDomain ring({{-kPi, kPi}}, {true});
    const std::size_t four[] = {4};
    const auto wrapped = TensorGrid(ring, four, false);
    EXPECT_NEAR(wrapped[1][0] - wrapped[0][0], kPi / 2, 1e-15);
    EXPECT_LT(wrapped.back()[0], kPi);
}

TEST(Grid, FirstDimensionOutermost) {
    ParameterDomain d({{0.0, 1.0}, {0.0, 1.0}}, {false, false});
    const std::size_t counts[] = {2, 3};
    const auto g = TensorGrid(d, counts, true);
    ASSERT_EQ(g.size(), 6u);
    EXPECT_EQ(g[0][0], g[2][0]);
    EXPECT_NE(g[2][0], g[3][0]);
}

TEST(Grid, CapsHighDimensionalGrids) {
    ParameterDomain cube({{-kPi, kPi}, {-1.5, 1.5}, {-1.5, 1.5}}, {true, false, false});
    const auto c = GridSpec::Working().Counts(cube);
    EXPECT_LE(c[0] * c[1] * c[2], 4096u);
    EXPECT_GT(c[0], c[1]);
    ParameterDomain line({{0.0, 1.0}}, {false});
    EXPECT_EQ(GridSpec::Working().Counts(line), (std::vector<std::size_t>{64}));
    EXPECT_EQ(GridSpec::Oracle().Counts(line), (std::vector<std::size_t>{256}));
}

// project -------------------------------------------------------------------------

TEST(Project, ExamplesOnUnitCircle) {
    const Manifold c = UnitCircle();
    const ProjectionResult a = Project(c, Vector{2.0, 0.0});
    EXPECT_NEAR(a.param[0], 0.0, 1e-6);
    EXPECT_NEAR(a.point[0], 1.0, 1e-6);
    EXPECT_NEAR(a.point[1], 0.0, 1e-6);
    EXPECT_NEAR(a.distance, 1.0, 1e-6);
    const ProjectionResult b = Project(c, Vector{3.0, 4.0});
    EXPECT_NEAR(b.point[0], 0.6, 1e-6);
    EXPECT_NEAR(b.point[1], 0.8, 1e-6);
    EXPECT_NEAR(b.distance, 4.0, 1e-6);
}

TEST(Project, DegenerateCentreKeepsLowestIndexGridPoint) {
    const Manifold c = UnitCircle();
    const Projector proj(c);
    const ProjectionResult r = proj.Project(Vector{0.0, 0.0});
    EXPECT_NEAR(r.distance, 1.0, 1e-12);
    EXPECT_EQ(r.coarse_index, 0u);
    // Every parameter is optimal; descent has no reason to move.
    EXPECT_NEAR(r.param[0], proj.grid_param(0)[0], 1e-12);
}

TEST(Project, AnnulusPointsProjectRadially) {
    const Manifold c = UnitCircle();
    const Projector proj(c);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> radius(0.5, 3.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int k = 0; k < 100; ++k) {
        const double r = radius(rng);
        const double t = angle(rng);
        const Vector x{r * std::cos(t), r * std::sin(t)};
        const ProjectionResult p = proj.Project(x);
        const double err = std::hypot(p.point[0] - x[0] / r, p.point[1] - x[1] / r);
        EXPECT_LT(err, 1e-5) << "r=" << r << " t=" << t;
    }
}

TEST(Project, NeverWorseThanCoarseGrid) {
    const Manifold t = BuiltinManifold(1, Torus2dParams{});
    const Projector proj(t, GridSpec{16, 4096});
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const Vector x{g(rng), g(rng), g(rng)};
        double coarse = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < proj.grid_size(); ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < 3; ++j) d += (x[j] - proj.grid_point(i)[j]) * (x[j] - proj.grid_point(i)[j]);
            coarse = std::min(coarse, std::sqrt(d));
        }
        const ProjectionResult p = proj.Project(x);
        EXPECT_LE(p.distance, coarse + 1e-15);
        EXPECT_NEAR(p.distance, Norm(Vector{x[0] - p.point[0], x[1] - p.point[1], x[2] - p.point[2]}), 1e-12);
    }
}

TEST(Project, SegmentClampsAtEndpoints) {
    const Manifold s = BuiltinManifold(1, Segment1dParams{{0.0, 0.0}, {1.0, 0.0}});
    const ProjectionResult beyond = Project(s, Vector{2.0, 1.0});
    EXPECT_NEAR(beyond.param[0], 1.0, 1e-9);
    const ProjectionResult inside = Project(s, Vector{0.3141, -2.0});
    EXPECT_NEAR(inside.param[0], 0.3141, 1e-6);
}

TEST(Project, PatternRecoversGeneratingParameters) {
    const Raster pat = SyntheticPattern("corner", 16, 16, 5.0);
    const Manifold m = BuiltinManifold(1, PatternRtParams{pat, 16, 16, true, 1.5, 1.5});
    const Projector proj(m, GridSpec::Oracle(), DescentConfig::Oracle());
    const Vector truth{0.7, -0.4, 0.9};
    const ProjectionResult p = proj.Project(m.Map(truth));
    EXPECT_LT(p.distance, 1e-4);
}

TEST(Project, DimensionMismatchThrows) {
    EXPECT_THROW(Project(UnitCircle(), Vector{1.0, 2.0, 3.0}), UsageError);
}

// PointCloud ----------------------------------------------------------------------

TEST(PointCloud, LabelsAndSelection) {
    PointCloud c(2);
    c.Add(Vector{0.0, 1.0}, 1);
    c.Add(Vector{2.0, 3.0}, 2);
    c.Add(Vector{4.0, 5.0}, 1);
    EXPECT_TRUE(c.has_labels());
    const PointCloud ones = c.WithLabel(1);
    EXPECT_EQ(ones.size(), 2u);
    EXPECT_EQ(ones.point(1)[0], 4.0);
    EXPECT_THROW(c.Add(Vector{1.0, 1.0}), UsageError);
    EXPECT_THROW(c.Add(Vector{1.0}, 1), UsageError);
}

}  // namespace
}  // namespace manidisc
