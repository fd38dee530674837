#pragma once

// Run configuration: JSON file -> RunConfig with strict key checking, plus
// dotted-path overrides ("crystal.g=2.0"). Detector coordinates in config and
// emitted files are the dimensionless X = k b x / (2 pi z); X = 1 is the first
// null of the single-slit envelope.

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../errors.hpp"
#include "../observables.hpp"
#include "../params.hpp"

namespace subwave::io {

struct ScanConfig {
    double x_min = -1.0;
    double x_max = 1.0;
    int points = 401;
    int grid_points = 41;
    double alpha_sq = 1.0;
};

struct SweepConfig {
    double g_min = 0.1;
    double g_max = 6.0;
    int points = 60;
    std::vector<double> delta0_list{0.0, 2.0, -2.0};
};

struct RunConfig {
    SpdcScene scene;
    EvalMode mode = EvalMode::broadband;
    std::string out_dir = "out";
    ScanConfig scan;
    SweepConfig sweep;
};

inline RunConfig default_run_config() {
    RunConfig cfg;
    cfg.scene.crystal = CrystalParams{1.84, 0.0, 20.0, 1.0, 0.0};
    cfg.scene.slits = SlitGeometry{1.0, 5.0};
    cfg.scene.det = DetectionGeometry{1.0, 2.5e5};
    cfg.scene.quad = QuadSpec{};
    return cfg;
}

inline double physical_x(double x_norm, const SlitGeometry& slits, const DetectionGeometry& det) {
    return 2.0 * std::numbers::pi * det.z * x_norm / (det.k * slits.b);
}

inline double normalized_x(double x_phys, const SlitGeometry& slits, const DetectionGeometry& det) {
    return det.k * slits.b * x_phys / (2.0 * std::numbers::pi * det.z);
}

namespace detail {

using nlohmann::json;

inline void expect_keys(const json& j, const std::string& where,
                        std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) throw ConfigError("config: unknown key '" + where + it.key() + "'");
    }
}

inline double get_number(const json& j, const char* key, double fallback,
                         const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config: '" + where + key + "' must be a number");
    return v.get<double>();
}

inline int get_int(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError("config: '" + where + key + "' must be an integer");
    return v.get<int>();
}

inline void parse_crystal(const json& j, CrystalParams& p) {
    expect_keys(j, "crystal.", {"g", "delta0", "q0", "omega0", "group_delay"});
    p.g = get_number(j, "g", p.g, "crystal.");
    p.delta0 = get_number(j, "delta0", p.delta0, "crystal.");
    p.q0 = get_number(j, "q0", p.q0, "crystal.");
    p.omega0 = get_number(j, "omega0", p.omega0, "crystal.");
    p.group_delay = get_number(j, "group_delay", p.group_delay, "crystal.");
}

inline void parse_slits(const json& j, SlitGeometry& s) {
    expect_keys(j, "slits.", {"b", "d"});
    s.b = get_number(j, "b", s.b, "slits.");
    s.d = get_number(j, "d", s.d, "slits.");
}

inline void parse_detection(const json& j, DetectionGeometry& d) {
    expect_keys(j, "detection.", {"k", "z"});
    d.k = get_number(j, "k", d.k, "detection.");
    d.z = get_number(j, "z", d.z, "detection.");
}

inline void parse_quadrature(const json& j, QuadSpec& q) {
    expect_keys(j, "quadrature.", {"rel_tol", "abs_tol", "max_subdivisions", "tail_cut"});
    q.rel_tol = get_number(j, "rel_tol", q.rel_tol, "quadrature.");
    q.abs_tol = get_number(j, "abs_tol", q.abs_tol, "quadrature.");
    q.max_subdivisions = get_int(j, "max_subdivisions", q.max_subdivisions, "quadrature.");
    q.tail_cut = get_number(j, "tail_cut", q.tail_cut, "quadrature.");
}

inline void parse_scan(const json& j, ScanConfig& s) {
    expect_keys(j, "scan.", {"x_min", "x_max", "points", "grid_points", "alpha_sq"});
    s.x_min = get_number(j, "x_min", s.x_min, "scan.");
    s.x_max = get_number(j, "x_max", s.x_max, "scan.");
    s.points = get_int(j, "points", s.points, "scan.");
    s.grid_points = get_int(j, "grid_points", s.grid_points, "scan.");
    s.alpha_sq = get_number(j, "alpha_sq", s.alpha_sq, "scan.");
    if (!(s.x_max > s.x_min)) throw ConfigError("config: scan.x_max must exceed scan.x_min");
    if (s.points < 2) throw ConfigError("config: scan.points must be >= 2");
    if (s.grid_points < 2) throw ConfigError("config: scan.grid_points must be >= 2");
    if (s.alpha_sq < 0.0) throw ConfigError("config: scan.alpha_sq must be >= 0");
}

inline void parse_sweep(const json& j, SweepConfig& s) {
    expect_keys(j, "sweep.", {"g_min", "g_max", "points", "delta0_list"});
    s.g_min = get_number(j, "g_min", s.g_min, "sweep.");
    s.g_max = get_number(j, "g_max", s.g_max, "sweep.");
    s.points = get_int(j, "points", s.points, "sweep.");
    if (j.contains("delta0_list")) {
        const json& v = j.at("delta0_list");
        if (!v.is_array() || v.empty())
            throw ConfigError("config: sweep.delta0_list must be a non-empty array");
        s.delta0_list.clear();
        for (const json& e : v) {
            if (!e.is_number()) throw ConfigError("config: sweep.delta0_list entries must be numbers");
            s.delta0_list.push_back(e.get<double>());
        }
    }
    if (s.g_min < 0.0) throw ConfigError("config: sweep.g_min must be >= 0");
    if (!(s.g_max > s.g_min)) throw ConfigError("config: sweep.g_max must exceed sweep.g_min");
    if (s.points < 2) throw ConfigError("config: sweep.points must be >= 2");
}

inline EvalMode parse_mode(const std::string& s) {
    if (s == "full") return EvalMode::full;
    if (s == "broadband") return EvalMode::broadband;
    throw ConfigError("config: mode must be 'full' or 'broadband', got '" + s + "'");
}

inline RunConfig from_json(const json& j) {
    RunConfig cfg = default_run_config();
    expect_keys(j, "", {"mode", "out", "crystal", "slits", "detection", "quadrature", "scan",
                        "sweep"});
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) throw ConfigError("config: 'mode' must be a string");
        cfg.mode = parse_mode(j.at("mode").get<std::string>());
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) throw ConfigError("config: 'out' must be a string");
        cfg.out_dir = j.at("out").get<std::string>();
    }
    if (j.contains("crystal")) parse_crystal(j.at("crystal"), cfg.scene.crystal);
    if (j.contains("slits")) parse_slits(j.at("slits"), cfg.scene.slits);
    if (j.contains("detection")) parse_detection(j.at("detection"), cfg.scene.det);
    if (j.contains("quadrature")) parse_quadrature(j.at("quadrature"), cfg.scene.quad);
    if (j.contains("scan")) parse_scan(j.at("scan"), cfg.scan);
    if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg.sweep);
    validate(cfg.scene);
    return cfg;
}

inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key.path=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::istringstream keys(path);
    std::string key, next;
    if (!std::getline(keys, key, '.'))
        throw ConfigError("--set expects key.path=value, got '" + assignment + "'");
    while (std::getline(keys, next, '.')) {
        if (key.empty() || next.empty())
            throw ConfigError("--set: empty path segment in '" + path + "'");
        node = &(*node)[key];
        if (!node->is_object() && !node->is_null())
            throw ConfigError("--set: '" + path + "' descends into a non-object");
        key = next;
    }
    (*node)[key] = value;
}

} // namespace detail

inline RunConfig load_run_config(const std::string& config_path,
                                 const std::vector<std::string>& overrides) {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config file: " + config_path);
        try {
            in >> doc;
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config parse error in " + config_path + ": " + e.what());
        }
    }
    for (const std::string& s : overrides) detail::apply_override(doc, s);
    return detail::from_json(doc);
}

inline EvalMode parse_mode(const std::string& s) { return detail::parse_mode(s); }

} // namespace subwave::io
