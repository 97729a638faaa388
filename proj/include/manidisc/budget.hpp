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
#include <span>
#include <vector>

#include "manidisc/classification.hpp"
#include "manidisc/cmd.hpp"
#include "manidisc/geometry.hpp"
#include "manidisc/remd.hpp"

namespace manidisc {

struct BudgetConfig {
    std::size_t total_budget = 0;
    std::size_t dense_grid_per_manifold = 0;
    double dmd_poor_factor = 2.0;
    int dmd_stall_sweeps = 2;
    std::uint64_t seed = 0;
};

/// One attempted DMD transfer.
struct Transfer {
    int sweep = 0;
    std::size_t donor_manifold = 0;
    std::size_t donor_sample = 0;
    std::size_t recipient_manifold = 0;
    std::size_t recipient_sample = 0;  // sample of the recipient cell whose theta drove the move
    double eps_before = 0.0;
    double eps_after = 0.0;
    bool committed = false;
};

struct BudgetResult {
    MultiSampleSet msets;
    std::vector<std::size_t> allocation;
    std::vector<double> trace;  // training eps
    std::vector<Transfer> transfers;
};

/// B split into M near-equal parts, remainder to the lowest positions.
std::vector<std::size_t> EqualSplit(std::size_t total, std::size_t parts);

/// Prune dense regular grids down to the budget by repeatedly deleting the
/// sample with the smallest (|theta|, |phi|, cell population, m, i), then run
/// CMD. Throws UsageError for an infeasible budget.
BudgetResult Mdpa(std::span<const Manifold> manifolds, const PointCloud& cloud, const BudgetConfig& cfg,
                  const CmdConfig& cmd_cfg);

/// CMD sweeps with sample transfers between manifolds. Once the sweeps stop
/// improving, a sample whose |theta| exceeds dmd_poor_factor times the
/// average and that has not moved for dmd_stall_sweeps sweeps receives a new
/// neighbour at the projection of its theta centroid; the globally weakest
/// sample of another manifold is deleted. A transfer is kept only if eps
/// strictly decreases after re-optimizing both manifolds.
BudgetResult Dmd(std::span<const Manifold> manifolds, const PointCloud& cloud, const MultiSampleSet& initial,
                 const BudgetConfig& cfg, const CmdConfig& cmd_cfg);

/// Equal-split REMD initialization on the per-class subclouds, then Dmd.
BudgetResult Dmd(std::span<const Manifold> manifolds, const PointCloud& cloud, const BudgetConfig& cfg,
                 const CmdConfig& cmd_cfg, const RemdConfig& remd_cfg);

}  // namespace manidisc
