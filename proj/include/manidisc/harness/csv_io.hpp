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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manidisc/budget.hpp"
#include "manidisc/classification.hpp"
#include "manidisc/geometry.hpp"

namespace manidisc::harness {

/// Decimal with 9 significant digits ("%.9g"); "nan"/"inf" for non-finite.
std::string FormatNumber(double value);

/// Parses a decimal field; throws UsageError on trailing garbage.
double ParseNumber(std::string_view field);

using CsvRow = std::vector<std::string>;

/// Comma-joined rows with '\n' endings. Fields must not contain commas.
std::string JoinCsv(std::span<const CsvRow> rows);

/// Splits lines on commas; no quoting. Blank lines are skipped.
std::vector<CsvRow> ReadCsv(const std::filesystem::path& path);

/// Creates parent directories; throws std::runtime_error on I/O failure.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

/// Header manifold_id,lambda_0..,x_0..; parameter columns padded to the
/// widest manifold with empty fields.
std::string SampleSetsCsv(std::span<const SampleSet> sets);
void WriteSampleSets(const std::filesystem::path& path, std::span<const SampleSet> sets);

/// Reads a sample-set CSV and recomputes every point from its parameters on
/// the manifold with the matching id. Sets come back in `manifolds` order;
/// manifolds without rows give empty sets.
std::vector<SampleSet> ReadSampleSets(const std::filesystem::path& path, std::span<const Manifold> manifolds);

/// Header label,x_0..; the label column is empty for unlabelled clouds.
std::string CloudCsv(const PointCloud& cloud);
void WriteCloud(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud ReadCloud(const std::filesystem::path& path);

/// Header sweep,donor_manifold,donor_sample,recipient_manifold,
/// recipient_sample,eps_before,eps_after,committed (manifold ids, not positions).
std::string TransferLogCsv(std::span<const Transfer> log, const MultiSampleSet& msets);

}  // namespace manidisc::harness
