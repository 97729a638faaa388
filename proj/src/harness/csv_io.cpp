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

#include "manidisc/harness/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "manidisc/errors.hpp"

namespace manidisc::harness {

std::string FormatNumber(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

double ParseNumber(std::string_view field) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
        field.remove_suffix(1);
    }
    if (field == "nan") return std::nan("");
    if (field == "inf") return HUGE_VAL;
    if (field == "-inf") return -HUGE_VAL;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw UsageError("not a number: '" + std::string(field) + "'");
    }
    return value;
}

std::string JoinCsv(std::span<const CsvRow> rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0) out += ',';
            out += row[k];
        }
        out += '\n';
    }
    return out;
}

std::vector<CsvRow> ReadCsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path.string());
    }
    std::vector<CsvRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        CsvRow row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            row.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string SampleSetsCsv(std::span<const SampleSet> sets) {
    std::size_t d = 0;
    std::size_t n = 0;
    for (const auto& set : sets) {
        for (const auto& s : set.samples) {
            d = std::max(d, s.param.size());
            n = std::max(n, s.point.size());
        }
    }
    std::vector<CsvRow> rows;
    CsvRow header{"manifold_id"};
    for (std::size_t j = 0; j < d; ++j) header.push_back("lambda_" + std::to_string(j));
    for (std::size_t k = 0; k < n; ++k) header.push_back("x_" + std::to_string(k));
    rows.push_back(std::move(header));
    for (const auto& set : sets) {
        for (const auto& s : set.samples) {
            CsvRow row{std::to_string(set.manifold_id)};
            for (std::size_t j = 0; j < d; ++j) row.push_back(j < s.param.size() ? FormatNumber(s.param[j]) : "");
            for (std::size_t k = 0; k < n; ++k) row.push_back(k < s.point.size() ? FormatNumber(s.point[k]) : "");
            rows.push_back(std::move(row));
        }
    }
    return JoinCsv(rows);
}

void WriteSampleSets(const std::filesystem::path& path, std::span<const SampleSet> sets) {
    WriteTextFile(path, SampleSetsCsv(sets));
}

std::vector<SampleSet> ReadSampleSets(const std::filesystem::path& path, std::span<const Manifold> manifolds) {
    const auto rows = ReadCsv(path);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "manifold_id") {
        throw UsageError(path.string() + " is not a sample-set CSV");
    }
    std::vector<std::size_t> lambda_cols;
    for (std::size_t k = 1; k < rows[0].size(); ++k) {
        if (rows[0][k].rfind("lambda_", 0) == 0) lambda_cols.push_back(k);
    }
    std::vector<SampleSet> sets(manifolds.size());
    std::map<int, std::size_t> position;
    for (std::size_t m = 0; m < manifolds.size(); ++m) {
        sets[m].manifold_id = manifolds[m].id();
        position[manifolds[m].id()] = m;
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != rows[0].size()) {
            throw UsageError(path.string() + ": row " + std::to_string(r) + " has the wrong field count");
        }
        const int id = static_cast<int>(ParseNumber(row[0]));
        const auto it = position.find(id);
        if (it == position.end()) {
            throw UsageError(path.string() + ": unknown manifold id " + std::to_string(id));
        }
        const Manifold& manifold = manifolds[it->second];
        if (lambda_cols.size() < manifold.param_dim()) {
            throw UsageError(path.string() + ": too few parameter columns for manifold " + std::to_string(id));
        }
        Vector param;
        for (std::size_t j = 0; j < manifold.param_dim(); ++j) param.push_back(ParseNumber(row[lambda_cols[j]]));
        sets[it->second].samples.push_back(manifold.MakeSample(param));
    }
    return sets;
}

std::string CloudCsv(const PointCloud& cloud) {
    std::vector<CsvRow> rows;
    CsvRow header{"label"};
    for (std::size_t k = 0; k < cloud.dim(); ++k) header.push_back("x_" + std::to_string(k));
    rows.push_back(std::move(header));
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        CsvRow row{cloud.has_labels() ? std::to_string(cloud.label(p)) : ""};
        for (double v : cloud.point(p)) row.push_back(FormatNumber(v));
        rows.push_back(std::move(row));
    }
    return JoinCsv(rows);
}

void WriteCloud(const std::filesystem::path& path, const PointCloud& cloud) { WriteTextFile(path, CloudCsv(cloud)); }

PointCloud ReadCloud(const std::filesystem::path& path) {
    const auto rows = ReadCsv(path);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "label") {
        throw UsageError(path.string() + " is not a point-cloud CSV");
    }
    const std::size_t dim = rows[0].size() - 1;
    PointCloud cloud(dim);
    std::vector<int> labels;
    bool labelled = rows.size() > 1;
    Vector x(dim);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != dim + 1) {
            throw UsageError(path.string() + ": row " + std::to_string(r) + " has the wrong field count");
        }
        for (std::size_t k = 0; k < dim; ++k) x[k] = ParseNumber(row[k + 1]);
        cloud.Add(x);
        if (row[0].empty()) {
            labelled = false;
        } else {
            labels.push_back(static_cast<int>(ParseNumber(row[0])));
        }
    }
    if (labelled) {
        cloud.set_labels(std::move(labels));
    }
    return cloud;
}

std::string TransferLogCsv(std::span<const Transfer> log, const MultiSampleSet& msets) {
    std::vector<CsvRow> rows;
    rows.push_back({"sweep", "donor_manifold", "donor_sample", "recipient_manifold", "recipient_sample", "eps_before",
                    "eps_after", "committed"});
    for (const auto& t : log) {
        rows.push_back({std::to_string(t.sweep), std::to_string(msets.sets[t.donor_manifold].manifold_id),
                        std::to_string(t.donor_sample), std::to_string(msets.sets[t.recipient_manifold].manifold_id),
                        std::to_string(t.recipient_sample), FormatNumber(t.eps_before), FormatNumber(t.eps_after),
                        t.committed ? "1" : "0"});
    }
    return JoinCsv(rows);
}

}  // namespace manidisc::harness
