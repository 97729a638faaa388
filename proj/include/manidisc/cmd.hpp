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
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "manidisc/classification.hpp"
#include "manidisc/geometry.hpp"

namespace manidisc {

enum class SweepOrder { kRoundRobin, kRandom };

struct CmdConfig {
    std::vector<double> alpha_grid{0.125, 0.25, 0.375, 0.5, 0.75, 1.0};
    std::vector<double> beta_grid{0.125, 0.25, 0.375, 0.5, 0.75, 1.0};
    int inner_max = 10;
    int outer_max = 20;
    double tol = 1e-9;  // minimum decrease of eps per sweep
    std::uint64_t seed = 0;
    SweepOrder sweep_order = SweepOrder::kRoundRobin;
    GridSpec grid = GridSpec::Working();
    DescentConfig descent;

    /// Step candidates in (0, 1], finite loop bounds; throws UsageError.
    void Validate() const;
};

enum class Direction { kToward, kAway };

/// Parameter reached from `lambda` by a step of size t toward (or away from)
/// `target`: shortest arc on periodic coordinates, clamped elsewhere.
Vector StepParam(const ParameterDomain& domain, std::span<const double> lambda, std::span<const double> target,
                 double t, Direction direction);

/// Tries every step in `steps` (step 0 is the current position) and commits
/// the first one reaching the lowest misclassified count, if that count is
/// strictly below the current one. Returns whether the sample moved.
bool PerturbSample(ClassificationState& state, const Manifold& manifold, std::size_t m, std::size_t i,
                   std::span<const double> target, Direction direction, std::span<const double> steps);

struct PerturbResult {
    MultiSampleSet msets;
    double epsilon = 0.0;
    bool moved = false;
};

/// Single perturbation on a copy of `msets`; manifolds are in msets order.
PerturbResult PerturbSampleToward(std::size_t m, std::size_t i, std::span<const double> target, Direction direction,
                                  std::span<const Manifold> manifolds, const MultiSampleSet& msets,
                                  const PointCloud& cloud, const CmdConfig& cfg);

/// Per-manifold projectors and the sample-level moves shared by CMD and DMD.
class CmdEngine {
 public:
    CmdEngine(std::span<const Manifold> manifolds, CmdConfig cfg);

    const CmdConfig& config() const { return cfg_; }
    const Manifold& manifold(std::size_t m) const { return projectors_[m].manifold(); }
    const Projector& projector(std::size_t m) const { return projectors_[m]; }
    std::size_t num_manifolds() const { return projectors_.size(); }

    /// Alternates the toward-theta and away-from-phi moves of sample (m, i)
    /// until neither moves it or inner_max is reached. Returns whether it moved.
    bool OptimizeSample(ClassificationState& state, std::size_t m, std::size_t i) const;

    /// One pass over the samples of the listed manifolds (all when empty) in
    /// the configured order. moved[m][i] reports which samples changed.
    std::vector<std::vector<bool>> Sweep(ClassificationState& state, std::mt19937_64& rng,
                                         std::span<const std::size_t> manifolds = {}) const;

    /// Checks that the sets line up with the manifolds by position and id.
    void CheckSets(const MultiSampleSet& msets) const;

 private:
    CmdConfig cfg_;
    std::vector<Projector> projectors_;
};

struct CmdResult {
    MultiSampleSet msets;
    std::vector<double> trace;  // eps before the first sweep and after each sweep
    int sweeps = 0;
    bool converged = false;
};

/// Classification-driven joint optimization of the sample sets. The eps trace
/// is non-increasing because only strictly improving moves are committed.
CmdResult Cmd(std::span<const Manifold> manifolds, const MultiSampleSet& msets, const PointCloud& cloud,
              const CmdConfig& cfg);

}  // namespace manidisc
