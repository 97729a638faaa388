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

#include "manidisc/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "manidisc/errors.hpp"
#include "manidisc/pattern.hpp"

namespace manidisc::harness {

using nlohmann::json;

namespace {

void CheckObject(const json& obj, std::string_view context) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(context) + " must be a JSON object");
    }
}

void CheckKeys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view context) {
    CheckObject(obj, context);
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + item.key() + "' in " + std::string(context));
        }
    }
}

template <typename T>
T Get(const json& obj, const std::string& key, T fallback, std::string_view context) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + key + "' in " + std::string(context));
    }
}

template <typename T>
T Require(const json& obj, const std::string& key, std::string_view context) {
    if (!obj.contains(key)) {
        throw ConfigError("missing '" + key + "' in " + std::string(context));
    }
    return Get<T>(obj, key, T{}, context);
}

std::size_t GetCount(const json& obj, const std::string& key, std::size_t fallback, std::string_view context) {
    const long long v = Get<long long>(obj, key, static_cast<long long>(fallback), context);
    if (v < 0) {
        throw ConfigError("'" + key + "' in " + std::string(context) + " must be nonnegative");
    }
    return static_cast<std::size_t>(v);
}

GridSpec ParseGrid(const json& obj, GridSpec fallback, std::string_view context) {
    CheckKeys(obj, {"per_dim", "max_points"}, context);
    GridSpec g;
    g.per_dim = GetCount(obj, "per_dim", fallback.per_dim, context);
    g.max_points = GetCount(obj, "max_points", fallback.max_points, context);
    if (g.per_dim == 0 || g.max_points == 0) {
        throw ConfigError(std::string(context) + " needs positive grid sizes");
    }
    return g;
}

DescentConfig ParseDescent(const json& obj, DescentConfig fallback, std::string_view context) {
    CheckKeys(obj, {"fd_step", "max_iters", "step_tol", "starts"}, context);
    DescentConfig d;
    d.fd_step = Get<double>(obj, "fd_step", fallback.fd_step, context);
    d.max_iters = Get<int>(obj, "max_iters", fallback.max_iters, context);
    d.step_tol = Get<double>(obj, "step_tol", fallback.step_tol, context);
    d.starts = Get<int>(obj, "starts", fallback.starts, context);
    if (!(d.fd_step > 0.0) || !(d.step_tol > 0.0) || d.max_iters < 0 || d.starts < 1) {
        throw ConfigError("invalid descent settings in " + std::string(context));
    }
    return d;
}

ProjectionSettings ParseProjection(const json& obj) {
    constexpr std::string_view ctx = "projection";
    CheckKeys(obj, {"working", "oracle", "descent", "oracle_descent"}, ctx);
    ProjectionSettings p;
    if (obj.contains("working")) p.working = ParseGrid(obj["working"], p.working, "projection.working");
    if (obj.contains("oracle")) p.oracle = ParseGrid(obj["oracle"], p.oracle, "projection.oracle");
    if (obj.contains("descent")) p.descent = ParseDescent(obj["descent"], p.descent, "projection.descent");
    if (obj.contains("oracle_descent")) {
        p.oracle_descent = ParseDescent(obj["oracle_descent"], p.oracle_descent, "projection.oracle_descent");
    }
    return p;
}

Vector GetVector(const json& obj, const std::string& key, Vector fallback, std::string_view context) {
    return Get<Vector>(obj, key, std::move(fallback), context);
}

Raster ParsePattern(const json& obj, const std::filesystem::path& base_dir) {
    constexpr std::string_view ctx = "pattern";
    CheckKeys(obj, {"synthetic", "file", "width", "height", "support_radius"}, ctx);
    if (obj.contains("file") == obj.contains("synthetic")) {
        throw ConfigError("pattern needs exactly one of 'file' or 'synthetic'");
    }
    try {
        if (obj.contains("file")) {
            std::filesystem::path file = Get<std::string>(obj, "file", "", ctx);
            if (file.is_relative()) {
                file = base_dir / file;
            }
            return LoadPattern(file);
        }
        const std::size_t w = GetCount(obj, "width", 16, ctx);
        const std::size_t h = GetCount(obj, "height", w, ctx);
        const double radius = Get<double>(obj, "support_radius", static_cast<double>(std::min(w, h)) / 4.0, ctx);
        return SyntheticPattern(Get<std::string>(obj, "synthetic", "", ctx), w, h, radius);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("pattern: ") + e.what());
    }
}

void CheckAlgorithmParams(const AlgorithmSpec& spec) {
    const std::string ctx = spec.name + " params";
    if (spec.name == "random" || spec.name == "regular") {
        CheckKeys(spec.params, {}, ctx);
    } else if (spec.name == "remd") {
        CheckKeys(spec.params, {"max_iters", "tol", "min_init_spacing", "empty_cell_policy"}, ctx);
    } else if (spec.name == "cmd") {
        CheckKeys(spec.params, {"alpha_grid", "beta_grid", "inner_max", "outer_max", "tol", "sweep_order"}, ctx);
    } else if (spec.name == "mdsa") {
        CheckKeys(spec.params, {"t0", "cooling", "steps", "sigma_rel"}, ctx);
    } else if (spec.name == "mdpa") {
        CheckKeys(spec.params,
                  {"alpha_grid", "beta_grid", "inner_max", "outer_max", "tol", "sweep_order", "dense_factor"}, ctx);
    } else if (spec.name == "dmd") {
        CheckKeys(spec.params,
                  {"alpha_grid", "beta_grid", "inner_max", "outer_max", "tol", "sweep_order", "poor_factor",
                   "stall_sweeps"},
                  ctx);
    }
}

}  // namespace

Manifold ParseManifold(const json& decl, int default_id, const std::filesystem::path& base_dir) {
    constexpr std::string_view ctx = "manifold";
    CheckObject(decl, ctx);
    const std::string kind = Require<std::string>(decl, "kind", ctx);
    const int id = Get<int>(decl, "id", default_id, ctx);
    BuiltinParams params;
    if (kind == "circle_arc") {
        CheckKeys(decl, {"kind", "id", "radius", "start", "end", "center"}, ctx);
        CircleArcParams p;
        p.radius = Get<double>(decl, "radius", p.radius, ctx);
        if (decl.contains("start")) p.start = Get<double>(decl, "start", 0.0, ctx);
        if (decl.contains("end")) p.end = Get<double>(decl, "end", 0.0, ctx);
        p.center = GetVector(decl, "center", p.center, ctx);
        params = p;
    } else if (kind == "torus_2d") {
        CheckKeys(decl, {"kind", "id", "major_radius", "minor_radius", "center"}, ctx);
        Torus2dParams p;
        p.major_radius = Get<double>(decl, "major_radius", p.major_radius, ctx);
        p.minor_radius = Get<double>(decl, "minor_radius", p.minor_radius, ctx);
        p.center = GetVector(decl, "center", p.center, ctx);
        params = p;
    } else if (kind == "segment_1d") {
        CheckKeys(decl, {"kind", "id", "a", "b"}, ctx);
        params = Segment1dParams{Require<Vector>(decl, "a", ctx), Require<Vector>(decl, "b", ctx)};
    } else if (kind == "pattern_rt") {
        CheckKeys(decl, {"kind", "id", "pattern", "canvas", "rotation", "tx_max", "ty_max"}, ctx);
        PatternRtParams p;
        p.pattern = ParsePattern(Require<json>(decl, "pattern", ctx), base_dir);
        const auto canvas = Get<std::vector<std::size_t>>(decl, "canvas", {p.pattern.width, p.pattern.height}, ctx);
        if (canvas.size() != 2) {
            throw ConfigError("canvas must be [width, height]");
        }
        p.canvas_width = canvas[0];
        p.canvas_height = canvas[1];
        p.rotation = Get<bool>(decl, "rotation", true, ctx);
        p.tx_max = Get<double>(decl, "tx_max", 0.0, ctx);
        p.ty_max = Get<double>(decl, "ty_max", 0.0, ctx);
        params = std::move(p);
    } else {
        throw ConfigError("unknown manifold kind '" + kind + "'");
    }
    try {
        return BuiltinManifold(id, params);
    } catch (const ConfigError&) {
        throw;
    } catch (const UsageError& e) {
        throw ConfigError(std::string("manifold ") + std::to_string(id) + ": " + e.what());
    }
}

bool IsKnownAlgorithm(const std::string& name) {
    static const char* const kNames[] = {"random", "regular", "remd", "cmd", "mdsa", "mdpa", "dmd"};
    return std::any_of(std::begin(kNames), std::end(kNames), [&](const char* n) { return name == n; });
}

RemdConfig ParseRemdConfig(const json& params, const ProjectionSettings& projection) {
    constexpr std::string_view ctx = "remd params";
    CheckObject(params, ctx);
    RemdConfig c;
    c.max_iters = Get<int>(params, "max_iters", c.max_iters, ctx);
    c.tol = Get<double>(params, "tol", c.tol, ctx);
    if (params.contains("min_init_spacing")) {
        c.min_init_spacing = Get<double>(params, "min_init_spacing", 0.0, ctx);
    }
    const std::string policy = Get<std::string>(params, "empty_cell_policy", "reseed_to_farthest_point", ctx);
    if (policy == "reseed_to_farthest_point") {
        c.empty_cell_policy = EmptyCellPolicy::kReseedToFarthestPoint;
    } else if (policy == "keep") {
        c.empty_cell_policy = EmptyCellPolicy::kKeep;
    } else {
        throw ConfigError("unknown empty_cell_policy '" + policy + "'");
    }
    if (c.max_iters < 0 || !(c.tol >= 0.0)) {
        throw ConfigError("invalid remd params");
    }
    c.grid = projection.working;
    c.descent = projection.descent;
    return c;
}

CmdConfig ParseCmdConfig(const json& params, const ProjectionSettings& projection) {
    constexpr std::string_view ctx = "cmd params";
    CheckObject(params, ctx);
    CmdConfig c;
    c.alpha_grid = Get<std::vector<double>>(params, "alpha_grid", c.alpha_grid, ctx);
    c.beta_grid = Get<std::vector<double>>(params, "beta_grid", c.beta_grid, ctx);
    c.inner_max = Get<int>(params, "inner_max", c.inner_max, ctx);
    c.outer_max = Get<int>(params, "outer_max", c.outer_max, ctx);
    c.tol = Get<double>(params, "tol", c.tol, ctx);
    const std::string order = Get<std::string>(params, "sweep_order", "round_robin", ctx);
    if (order == "round_robin") {
        c.sweep_order = SweepOrder::kRoundRobin;
    } else if (order == "random") {
        c.sweep_order = SweepOrder::kRandom;
    } else {
        throw ConfigError("unknown sweep_order '" + order + "'");
    }
    c.grid = projection.working;
    c.descent = projection.descent;
    try {
        c.Validate();
    } catch (const UsageError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

AnnealingSchedule ParseAnnealingSchedule(const json& params) {
    constexpr std::string_view ctx = "mdsa params";
    CheckObject(params, ctx);
    AnnealingSchedule s;
    s.t0 = Get<double>(params, "t0", s.t0, ctx);
    s.cooling = Get<double>(params, "cooling", s.cooling, ctx);
    s.steps = Get<int>(params, "steps", s.steps, ctx);
    s.sigma_rel = Get<double>(params, "sigma_rel", s.sigma_rel, ctx);
    try {
        s.Validate();
    } catch (const UsageError& e) {
        throw ConfigError(e.what());
    }
    return s;
}

BudgetConfig ParseBudgetConfig(const json& params) {
    constexpr std::string_view ctx = "budget params";
    CheckObject(params, ctx);
    BudgetConfig b;
    b.dmd_poor_factor = Get<double>(params, "poor_factor", b.dmd_poor_factor, ctx);
    b.dmd_stall_sweeps = Get<int>(params, "stall_sweeps", b.dmd_stall_sweeps, ctx);
    if (!(b.dmd_poor_factor >= 0.0) || b.dmd_stall_sweeps < 0) {
        throw ConfigError("invalid dmd thresholds");
    }
    return b;
}

json MergedParams(const ExperimentConfig& cfg, const AlgorithmSpec& spec) {
    json merged = json::object();
    for (const auto& a : cfg.algorithms) {
        if (a.name == "cmd") {
            merged = a.params;
            break;
        }
    }
    for (const auto& item : spec.params.items()) {
        merged[item.key()] = item.value();
    }
    return merged;
}

ExperimentConfig ParseExperimentConfig(const json& doc, const std::filesystem::path& base_dir) {
    constexpr std::string_view ctx = "config";
    CheckKeys(doc,
              {"seed", "repetitions", "output_dir", "manifolds", "dataset", "algorithms", "budgets", "projection",
               "write_samples"},
              ctx);
    ExperimentConfig cfg;
    cfg.seed = Get<std::uint64_t>(doc, "seed", 0, ctx);
    cfg.repetitions = Get<int>(doc, "repetitions", 1, ctx);
    if (cfg.repetitions < 1) {
        throw ConfigError("repetitions must be positive");
    }
    cfg.output_dir = Get<std::string>(doc, "output_dir", "results", ctx);
    if (cfg.output_dir.is_relative() && !base_dir.empty()) {
        cfg.output_dir = base_dir / cfg.output_dir;
    }
    cfg.write_samples = Get<bool>(doc, "write_samples", true, ctx);
    if (doc.contains("projection")) {
        cfg.projection = ParseProjection(doc["projection"]);
    }

    const json manifolds = Require<json>(doc, "manifolds", ctx);
    if (!manifolds.is_array() || manifolds.empty()) {
        throw ConfigError("'manifolds' must be a non-empty array");
    }
    for (std::size_t m = 0; m < manifolds.size(); ++m) {
        cfg.manifolds.push_back(ParseManifold(manifolds[m], static_cast<int>(m + 1), base_dir));
        for (std::size_t r = 0; r < m; ++r) {
            if (cfg.manifolds[r].id() == cfg.manifolds[m].id()) {
                throw ConfigError("duplicate manifold id " + std::to_string(cfg.manifolds[m].id()));
            }
        }
        if (cfg.manifolds[m].ambient_dim() != cfg.manifolds[0].ambient_dim()) {
            throw ConfigError("all manifolds must share one ambient dimension");
        }
    }

    if (doc.contains("dataset")) {
        const json& d = doc["dataset"];
        CheckKeys(d, {"train_per_class", "test_per_class", "noise"}, "dataset");
        cfg.dataset.train_per_class = GetCount(d, "train_per_class", cfg.dataset.train_per_class, "dataset");
        cfg.dataset.test_per_class = GetCount(d, "test_per_class", cfg.dataset.test_per_class, "dataset");
        cfg.dataset.noise = Get<double>(d, "noise", cfg.dataset.noise, "dataset");
    }
    if (cfg.dataset.train_per_class == 0 || cfg.dataset.test_per_class == 0 || !(cfg.dataset.noise >= 0.0)) {
        throw ConfigError("dataset sizes must be positive and noise nonnegative");
    }

    const json algorithms = Get<json>(doc, "algorithms", json::array(), ctx);
    if (!algorithms.is_array()) {
        throw ConfigError("'algorithms' must be an array");
    }
    for (const auto& a : algorithms) {
        AlgorithmSpec spec;
        if (a.is_string()) {
            spec.name = a.get<std::string>();
        } else {
            CheckKeys(a, {"name", "params"}, "algorithm");
            spec.name = Require<std::string>(a, "name", "algorithm");
            spec.params = Get<json>(a, "params", json::object(), "algorithm");
            CheckObject(spec.params, "algorithm params");
        }
        if (!IsKnownAlgorithm(spec.name)) {
            throw ConfigError("unknown algorithm '" + spec.name + "'");
        }
        for (const auto& other : cfg.algorithms) {
            if (other.name == spec.name) {
                throw ConfigError("algorithm '" + spec.name + "' listed twice");
            }
        }
        const bool needs_classes = spec.name == "cmd" || spec.name == "mdsa" || spec.name == "mdpa" ||
                                   spec.name == "dmd";
        if (needs_classes && cfg.manifolds.size() < 2) {
            throw ConfigError("algorithm '" + spec.name + "' needs at least two manifolds");
        }
        cfg.algorithms.push_back(std::move(spec));
    }

    const json budgets = Require<json>(doc, "budgets", ctx);
    if (!budgets.is_array() || budgets.empty()) {
        throw ConfigError("'budgets' must be a non-empty array");
    }
    for (const auto& b : budgets) {
        if (!b.is_number_integer() || b.get<long long>() < 1) {
            throw ConfigError("budgets must be positive integers");
        }
        cfg.budgets.push_back(b.get<std::size_t>());
    }

    // Surface parameter errors before any work starts.
    for (const auto& spec : cfg.algorithms) {
        CheckAlgorithmParams(spec);
        const json merged = MergedParams(cfg, spec);
        if (spec.name == "remd") {
            ParseRemdConfig(spec.params, cfg.projection);
        } else if (spec.name == "cmd") {
            ParseCmdConfig(spec.params, cfg.projection);
        } else if (spec.name == "mdsa") {
            ParseAnnealingSchedule(spec.params);
        } else if (spec.name == "mdpa" || spec.name == "dmd") {
            ParseCmdConfig(merged, cfg.projection);
            ParseBudgetConfig(merged);
            if (Get<double>(merged, "dense_factor", 2.0, "mdpa params") < 1.0) {
                throw ConfigError("mdpa dense_factor must be at least 1");
            }
        }
    }
    return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return ParseExperimentConfig(doc, path.parent_path());
}

}  // namespace manidisc::harness
