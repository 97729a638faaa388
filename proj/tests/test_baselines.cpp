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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "manidisc/baselines.hpp"

namespace manidisc {
namespace {

Manifold UnitSegment() { return BuiltinManifold(1, Segment1dParams{{0.0}, {1.0}}); }

// random sampling ---------------------------------------------------------------------

TEST(RandomSampling, DeterministicPerSeed) {
    const Manifold torus = BuiltinManifold(1, Torus2dParams{});
    const SampleSet a = RandomSampling(torus, 20, 9);
    const SampleSet b = RandomSampling(torus, 20, 9);
    const SampleSet c = RandomSampling(torus, 20, 10);
    ASSERT_EQ(a.size(), 20u);
    EXPECT_EQ(a.manifold_id, 1);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.samples[i].param, b.samples[i].param);
        EXPECT_EQ(a.samples[i].point, torus.Map(a.samples[i].param));
        EXPECT_TRUE(torus.domain().Contains(a.samples[i].param));
        differs = differs || a.samples[i].param != c.samples[i].param;
    }
    EXPECT_TRUE(differs);
}

TEST(RandomSampling, SingleSampleIsFirstUniformDraw) {
    std::mt19937_64 rng(1234);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const SampleSet s = RandomSampling(UnitSegment(), 1, 1234);
    EXPECT_EQ(s.samples[0].param[0], u);
    EXPECT_EQ(s.samples[0].point[0], u);
}

TEST(RandomSampling, MeanOfManyDrawsIsOneHalf) {
    const SampleSet s = RandomSampling(UnitSegment(), 10000, 77);
    double sum = 0.0;
    for (const auto& smp : s.samples) sum += smp.param[0];
    EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
}

TEST(RandomSampling, RejectsZero) { EXPECT_THROW(RandomSampling(UnitSegment(), 0, 1), UsageError); }

// regular grid --------------------------------------------------------------------------

TEST(RegularGrid, CellCentresOnSegment) {
    const SampleSet s = RegularGrid(UnitSegment(), 3);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_NEAR(s.samples[0].param[0], 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(s.samples[1].param[0], 0.5, 1e-15);
    EXPECT_NEAR(s.samples[2].param[0], 5.0 / 6.0, 1e-15);
    EXPECT_NEAR(RegularGrid(UnitSegment(), 1).samples[0].param[0], 0.5, 1e-15);
}

TEST(RegularGrid, SquareDomainGivesCentredLattice) {
    const Manifold torus = BuiltinManifold(1, Torus2dParams{});
    const SampleSet s = RegularGrid(torus, 9);
    ASSERT_EQ(s.size(), 9u);
    std::vector<std::pair<double, double>> got;
    for (const auto& smp : s.samples) got.emplace_back(smp.param[0], smp.param[1]);
    std::sort(got.begin(), got.end());
    const double third = 2.0 * std::numbers::pi / 3.0;
    std::size_t k = 0;
    for (double x : {-third, 0.0, third}) {
        for (double y : {-third, 0.0, third}) {
            EXPECT_NEAR(got[k].first, x, 1e-12);
            EXPECT_NEAR(got[k].second, y, 1e-12);
            ++k;
        }
    }
}

TEST(RegularGrid, LeftoversComeFromSeedZeroRandomSampling) {
    const Manifold torus = BuiltinManifold(1, Torus2dParams{});
    const SampleSet s = RegularGrid(torus, 11);
    ASSERT_EQ(s.size(), 11u);
    const std::vector<std::size_t> k = FactorizeGrid(torus.domain(), 11);
    const std::size_t grid = k[0] * k[1];
    ASSERT_LT(grid, 11u);
    const SampleSet extra = RandomSampling(torus, 11 - grid, 0);
    for (std::size_t i = 0; i < extra.size(); ++i) {
        EXPECT_EQ(s.samples[grid + i].param, extra.samples[i].param);
    }
    const SampleSet again = RegularGrid(torus, 11);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.samples[i].param, again.samples[i].param);
}

// mdsa ----------------------------------------------------------------------------------

struct SegmentFixture {
    std::vector<Manifold> manifolds{BuiltinManifold(1, Segment1dParams{{-5.0, 0.0}, {5.0, 0.0}}),
                                    BuiltinManifold(2, Segment1dParams{{-5.0, 2.0}, {5.0, 2.0}})};
    MultiSampleSet msets;
    PointCloud cloud{2};

    SegmentFixture() {
        for (std::size_t m = 0; m < 2; ++m) {
            SampleSet s;
            s.manifold_id = manifolds[m].id();
            s.samples.push_back(manifolds[m].MakeSample(Vector{m == 0 ? 0.1 : 0.9}));
            msets.sets.push_back(std::move(s));
        }
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ux(-5.0, 5.0);
        std::uniform_real_distribution<double> uy(-1.0, 3.0);
        for (int k = 0; k < 400; ++k) {
            const double y = uy(rng);
            cloud.Add(Vector{ux(rng), y}, y < 1.0 ? 1 : 2);
        }
    }
};

TEST(Mdsa, FinalNotAboveInitialAndTraceMonotone) {
    const SegmentFixture f;
    const MdsaResult r = Mdsa(f.manifolds, f.msets, f.cloud, AnnealingSchedule{}, 5);
    ASSERT_EQ(r.trace.size(), 2001u);
    ASSERT_EQ(r.current.size(), 2001u);
    EXPECT_LE(r.trace.back(), r.trace.front());
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
    for (std::size_t k = 0; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.current[k]);
    EXPECT_EQ(ClassificationError(r.msets, f.cloud), r.trace.back());
    for (std::size_t m = 0; m < 2; ++m) {
        const auto& s = r.msets.sets[m].samples[0];
        EXPECT_EQ(s.point, f.manifolds[m].Map(s.param));
    }
}

TEST(Mdsa, ColdLimitNeverAcceptsAnIncrease) {
    const SegmentFixture f;
    AnnealingSchedule cold;
    cold.t0 = 1e-12;
    cold.steps = 500;
    const MdsaResult r = Mdsa(f.manifolds, f.msets, f.cloud, cold, 8);
    for (std::size_t k = 1; k < r.current.size(); ++k) EXPECT_LE(r.current[k], r.current[k - 1]);
}

TEST(Mdsa, ZeroErrorInputStaysAtZero) {
    const SegmentFixture base;
    MultiSampleSet ms = base.msets;
    ms.sets[0].samples[0] = base.manifolds[0].MakeSample(Vector{0.5});
    ms.sets[1].samples[0] = base.manifolds[1].MakeSample(Vector{0.5});
    PointCloud c(2);
    c.Add(Vector{0.0, 0.2}, 1);
    c.Add(Vector{0.0, 1.8}, 2);
    AnnealingSchedule hot;
    hot.t0 = 10.0;
    hot.steps = 200;
    const MdsaResult r = Mdsa(base.manifolds, ms, c, hot, 2);
    EXPECT_EQ(r.trace.front(), 0.0);
    EXPECT_EQ(r.trace.back(), 0.0);
    EXPECT_EQ(ClassificationError(r.msets, c), 0.0);
}

TEST(Mdsa, DeterministicPerSeed) {
    const SegmentFixture f;
    AnnealingSchedule s;
    s.steps = 300;
    const MdsaResult a = Mdsa(f.manifolds, f.msets, f.cloud, s, 4);
    const MdsaResult b = Mdsa(f.manifolds, f.msets, f.cloud, s, 4);
    EXPECT_EQ(a.current, b.current);
    EXPECT_EQ(a.accepted, b.accepted);
}

TEST(AnnealingSchedule, Validate) {
    AnnealingSchedule s;
    EXPECT_NO_THROW(s.Validate());
    s.t0 = 0.0;
    EXPECT_THROW(s.Validate(), UsageError);
    s = AnnealingSchedule{};
    s.cooling = 1.0;
    EXPECT_THROW(s.Validate(), UsageError);
    s = AnnealingSchedule{};
    s.steps = -1;
    EXPECT_THROW(s.Validate(), UsageError);
}

}  // namespace
}  // namespace manidisc
