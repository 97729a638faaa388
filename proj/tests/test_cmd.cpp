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

#include "manidisc/cmd.hpp"
#include "manidisc/pattern.hpp"
#include "manidisc/remd.hpp"

namespace manidisc {
namespace {

constexpr double kPi = std::numbers::pi;

MultiSampleSet OneSampleEach(const std::vector<Manifold>& manifolds, const std::vector<double>& params) {
    MultiSampleSet ms;
    for (std::size_t m = 0; m < manifolds.size(); ++m) {
        SampleSet s;
        s.manifold_id = manifolds[m].id();
        s.samples.push_back(manifolds[m].MakeSample(Vector{params[m]}));
        ms.sets.push_back(std::move(s));
    }
    return ms;
}

// StepParam ---------------------------------------------------------------------------

TEST(StepParam, InterpolatesAndClamps) {
    const ParameterDomain d({Interval{0.0, 1.0}}, {false});
    const Vector lambda{0.4};
    const Vector target{0.8};
    EXPECT_NEAR(StepParam(d, lambda, target, 0.5, Direction::kToward)[0], 0.6, 1e-15);
    EXPECT_NEAR(StepParam(d, lambda, target, 1.0, Direction::kToward)[0], 0.8, 1e-15);
    EXPECT_NEAR(StepParam(d, lambda, target, 0.5, Direction::kAway)[0], 0.2, 1e-15);
    EXPECT_EQ(StepParam(d, lambda, Vector{0.0}, 1.0, Direction::kAway)[0], 0.8);
    EXPECT_EQ(StepParam(d, Vector{0.1}, Vector{0.9}, 1.0, Direction::kAway)[0], 0.0);
}

TEST(StepParam, TakesShortestArcOnPeriodicCoordinates) {
    const ParameterDomain d({Interval{-kPi, kPi}}, {true});
    const double from = kPi - 0.1;
    const double to = -kPi + 0.1;
    const double mid = StepParam(d, Vector{from}, Vector{to}, 0.5, Direction::kToward)[0];
    EXPECT_NEAR(std::abs(mid), kPi, 1e-12);
    const double end = StepParam(d, Vector{from}, Vector{to}, 1.0, Direction::kToward)[0];
    EXPECT_NEAR(end, to, 1e-12);
    const double away = StepParam(d, Vector{from}, Vector{to}, 1.0, Direction::kAway)[0];
    EXPECT_NEAR(away, from - 0.2, 1e-12);
}

// perturbation ------------------------------------------------------------------------

struct FlipFixture {
    std::vector<Manifold> manifolds{BuiltinManifold(1, Segment1dParams{{0.0, 0.0}, {1.0, 0.0}}),
                                    BuiltinManifold(2, Segment1dParams{{0.0, 1.0}, {1.0, 1.0}})};
    MultiSampleSet msets = OneSampleEach(manifolds, {0.0, 1.0});
    PointCloud cloud{2};

    FlipFixture() {
        cloud.Add(Vector{1.0, 0.4}, 1);  // wrong: nearer (1, 1) than (0, 0)
        cloud.Add(Vector{0.0, 0.1}, 1);
        cloud.Add(Vector{1.0, 0.9}, 2);
    }
};

TEST(Perturb, ZeroStepLeavesEverythingUnchanged) {
    const FlipFixture f;
    ClassificationState state(f.msets, f.cloud);
    const double zero[] = {0.0};
    EXPECT_FALSE(PerturbSample(state, f.manifolds[0], 0, 0, Vector{1.0}, Direction::kToward, zero));
    EXPECT_EQ(state.msets().sets[0].samples[0].param, (Vector{0.0}));
    EXPECT_EQ(state.misclassified(), 1u);
}

TEST(Perturb, NoImprovingCandidateKeepsSample) {
    const FlipFixture f;
    CmdConfig cfg;
    // Moving away from param 1 is blocked by the clamp at 0.
    const PerturbResult r = PerturbSampleToward(0, 0, Vector{1.0}, Direction::kAway, f.manifolds, f.msets, f.cloud, cfg);
    EXPECT_FALSE(r.moved);
    EXPECT_EQ(r.msets.sets[0].samples[0].param, (Vector{0.0}));
    EXPECT_DOUBLE_EQ(r.epsilon, 1.0 / 3.0);
}

TEST(Perturb, FlippingOnePointDropsErrorByOneOverCloudSize) {
    const FlipFixture f;
    const double before = ClassificationError(f.msets, f.cloud);
    CmdConfig cfg;
    const PerturbResult r = PerturbSampleToward(0, 0, Vector{1.0}, Direction::kToward, f.manifolds, f.msets, f.cloud, cfg);
    EXPECT_TRUE(r.moved);
    EXPECT_DOUBLE_EQ(before - r.epsilon, 1.0 / 3.0);
    EXPECT_EQ(r.epsilon, ClassificationError(r.msets, f.cloud));
    // First candidate reaching the minimum: 0.75 is the smallest step that flips the point.
    EXPECT_DOUBLE_EQ(r.msets.sets[0].samples[0].param[0], 0.75);
    EXPECT_EQ(r.msets.sets[0].samples[0].point, f.manifolds[0].Map(Vector{0.75}));
}

// cmd ---------------------------------------------------------------------------------

TEST(Cmd, ZeroErrorInputIsReturnedUnchanged) {
    const std::vector<Manifold> lines{BuiltinManifold(1, Segment1dParams{{0.0, 0.0}, {1.0, 0.0}}),
                                      BuiltinManifold(2, Segment1dParams{{0.0, 2.0}, {1.0, 2.0}})};
    const MultiSampleSet ms = OneSampleEach(lines, {0.5, 0.5});
    PointCloud c(2);
    c.Add(Vector{0.2, 0.3}, 1);
    c.Add(Vector{0.7, 1.8}, 2);
    const CmdResult r = Cmd(lines, ms, c, CmdConfig{});
    ASSERT_EQ(r.trace.front(), 0.0);
    for (std::size_t m = 0; m < 2; ++m) {
        EXPECT_EQ(r.msets.sets[m].samples[0].param, ms.sets[m].samples[0].param);
    }
    EXPECT_TRUE(r.converged);
}

TEST(Cmd, TwoSegmentFixtureBeatsSingleAxisBruteForce) {
    const std::vector<Manifold> lines{BuiltinManifold(1, Segment1dParams{{-5.0, 0.0}, {5.0, 0.0}}),
                                      BuiltinManifold(2, Segment1dParams{{-5.0, 2.0}, {5.0, 2.0}})};
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    std::uniform_real_distribution<double> uy(-1.0, 3.0);
    PointCloud c(2);
    for (int k = 0; k < 400; ++k) {
        const double y = uy(rng);
        c.Add(Vector{ux(rng), y}, y < 1.0 ? 1 : 2);
    }
    const MultiSampleSet init = OneSampleEach(lines, {0.1, 0.9});
    const double eps0 = ClassificationError(init, c);

    double brute = 1.0;
    for (int k = 0; k <= 1000; ++k) {
        const double t = k / 1000.0;
        brute = std::min(brute, ClassificationError(OneSampleEach(lines, {t, 0.9}), c));
        brute = std::min(brute, ClassificationError(OneSampleEach(lines, {0.1, t}), c));
    }

    const CmdResult r = Cmd(lines, init, c, CmdConfig{});
    const double eps = ClassificationError(r.msets, c);
    EXPECT_EQ(eps, r.trace.back());
    EXPECT_LE(eps, eps0);
    EXPECT_LE(eps, brute + 1.0 / c.size());
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
}

TEST(Cmd, PatternManifoldsImproveOnRemd) {
    std::vector<Manifold> manifolds;
    const char* names[] = {"bar", "corner"};
    for (int m = 0; m < 2; ++m) {
        PatternRtParams p;
        p.pattern = SyntheticPattern(names[m], 8, 8, 3.0);
        p.canvas_width = 8;
        p.canvas_height = 8;
        manifolds.push_back(BuiltinManifold(m + 1, p));
    }
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 0.08);
    PointCloud cloud(64);
    for (int m = 0; m < 2; ++m) {
        for (int k = 0; k < 150; ++k) {
            Vector x = manifolds[m].Map(manifolds[m].domain().Sample(rng));
            for (double& v : x) v += noise(rng);
            cloud.Add(x, m + 1);
        }
    }
    MultiSampleSet remd;
    for (int m = 0; m < 2; ++m) {
        RemdConfig cfg;
        cfg.n_samples = 4;
        cfg.seed = 40 + m;
        RemdResult r = Remd(manifolds[m], cloud.WithLabel(m + 1), cfg);
        r.samples.manifold_id = m + 1;
        remd.sets.push_back(std::move(r.samples));
    }
    const double eps_remd = ClassificationError(remd, cloud);
    const CmdResult r = Cmd(manifolds, remd, cloud, CmdConfig{});
    EXPECT_LE(r.trace.back(), eps_remd);
    EXPECT_EQ(r.trace.front(), eps_remd);
    EXPECT_EQ(r.msets.Allocation(), remd.Allocation());
}

TEST(Cmd, RandomOrderIsDeterministicPerSeed) {
    const FlipFixture f;
    CmdConfig cfg;
    cfg.sweep_order = SweepOrder::kRandom;
    cfg.seed = 3;
    const CmdResult a = Cmd(f.manifolds, f.msets, f.cloud, cfg);
    const CmdResult b = Cmd(f.manifolds, f.msets, f.cloud, cfg);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.msets.sets[0].samples[0].param, b.msets.sets[0].samples[0].param);
    EXPECT_EQ(a.trace.back(), 0.0);
}

TEST(CmdConfig, RejectsBadGrids) {
    CmdConfig cfg;
    cfg.alpha_grid = {0.0, 0.5};
    EXPECT_THROW(cfg.Validate(), UsageError);
    cfg.alpha_grid = {1.5};
    EXPECT_THROW(cfg.Validate(), UsageError);
    cfg.alpha_grid = {};
    EXPECT_THROW(cfg.Validate(), UsageError);
    cfg = CmdConfig{};
    cfg.outer_max = 0;
    EXPECT_THROW(cfg.Validate(), UsageError);
}

}  // namespace
}  // namespace manidisc
