#pragma once

// Detector-plane observables: fringe scans along the diagonal x1 = x2 and the
// antidiagonal x1 = -x2, visibility metrics, fringe-period extraction, the
// coherent-state reference curves, and the coupling-strength sweep.
//
// Visibility conventions follow the closed forms
//   diagonal      V1 = 1 / (1 + 4 xi)
//   antidiagonal  V2 = 1 / (3 + 2/xi)
// read off between the central maximum x = 0 and the first oscillatory null
// x_null = pi z / (2 k d), where the sinc envelope is exactly 1. Scan-based
// extraction re-evaluates the correlation at those two pinned abscissae, so on
// broadband scans it reproduces the formulas to rounding.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "correlator.hpp"
#include "errors.hpp"
#include "params.hpp"

namespace subwave {

enum class ScanKind { diagonal, antidiagonal, classical_g1, classical_g2_diagonal, grid_row };
enum class EvalMode { full, broadband };

inline const char* to_string(ScanKind k) {
    switch (k) {
        case ScanKind::diagonal: return "diagonal";
        case ScanKind::antidiagonal: return "antidiagonal";
        case ScanKind::classical_g1: return "classical_g1";
        case ScanKind::classical_g2_diagonal: return "classical_g2_diagonal";
        case ScanKind::grid_row: return "grid_row";
    }
    return "unknown";
}

inline const char* to_string(EvalMode m) {
    return m == EvalMode::full ? "full" : "broadband";
}

struct FringeScan {
    std::vector<double> positions;
    std::vector<double> values;
    ScanKind kind = ScanKind::diagonal;
    EvalMode mode = EvalMode::broadband;
    std::string normalization;
};

struct VisibilityReport {
    double v_formula = 0.0;
    double v_extracted = 0.0;
    double xi = 0.0;
    double strength = 0.0;
};

namespace detail {

inline void check_scan_inputs(const std::vector<double>& xs) {
    if (xs.empty()) throw ConfigError("scan: positions must be non-empty");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw ConfigError("scan: positions must be strictly increasing");
}

inline void check_scan_values(const std::vector<double>& vs) {
    for (double v : vs)
        if (!std::isfinite(v) || v < 0.0)
            throw Error("scan produced a negative or non-finite correlation value");
}

} // namespace detail

inline FringeScan diagonal_scan(const std::vector<double>& xs, const Correlator& corr,
                                EvalMode mode) {
    detail::check_scan_inputs(xs);
    FringeScan scan;
    scan.positions = xs;
    scan.kind = ScanKind::diagonal;
    scan.mode = mode;
    scan.values.reserve(xs.size());
    for (double x : xs)
        scan.values.push_back(mode == EvalMode::full ? corr.g2_full(x, x)
                                                     : corr.g2_broadband(x, x));
    detail::check_scan_values(scan.values);
    scan.normalization = std::string("g2 ") + to_string(mode) + ", unit proportionality";
    return scan;
}

inline FringeScan antidiagonal_scan(const std::vector<double>& xs, const Correlator& corr,
                                    EvalMode mode) {
    detail::check_scan_inputs(xs);
    FringeScan scan;
    scan.positions = xs;
    scan.kind = ScanKind::antidiagonal;
    scan.mode = mode;
    scan.values.reserve(xs.size());
    for (double x : xs)
        scan.values.push_back(mode == EvalMode::full ? corr.g2_full(x, -x)
                                                     : corr.g2_broadband(x, -x));
    detail::check_scan_values(scan.values);
    scan.normalization = std::string("g2 ") + to_string(mode) + ", unit proportionality";
    return scan;
}

inline FringeScan diagonal_scan(const std::vector<double>& xs, const SpdcScene& scene,
                                EvalMode mode) {
    return diagonal_scan(xs, Correlator(scene), mode);
}

inline FringeScan antidiagonal_scan(const std::vector<double>& xs, const SpdcScene& scene,
                                    EvalMode mode) {
    return antidiagonal_scan(xs, Correlator(scene), mode);
}

inline double visibility_formula(double xi, ScanKind kind) {
    if (kind == ScanKind::diagonal) {
        if (xi < 0.0) throw ConfigError("visibility_formula: xi must be >= 0");
        return 1.0 / (1.0 + 4.0 * xi);
    }
    if (kind == ScanKind::antidiagonal) {
        if (xi == 0.0)
            throw DegenerateGain("visibility_formula: antidiagonal visibility undefined at xi = 0");
        if (xi < 0.0) throw ConfigError("visibility_formula: xi must be > 0");
        return 1.0 / (3.0 + 2.0 / xi);
    }
    throw ConfigError("visibility_formula: kind must be diagonal or antidiagonal");
}

// First oscillatory null of the two-photon fringes.
inline double first_null(const SlitGeometry& slits, const DetectionGeometry& det) {
    return 0.5 * std::numbers::pi * det.z / (det.k * slits.d);
}

inline double visibility_from_scan(const FringeScan& scan, const SpdcScene& scene) {
    if (scan.kind != ScanKind::diagonal && scan.kind != ScanKind::antidiagonal)
        throw ConfigError("visibility_from_scan: expects a diagonal or antidiagonal scan");
    const double x_null = first_null(scene.slits, scene.det);
    if (scan.positions.empty() || scan.positions.front() > 0.0 ||
        scan.positions.back() < x_null)
        throw InsufficientSpan("visibility_from_scan: scan must cover [0, pi z/(2 k d)]");
    Correlator corr(scene);
    auto eval = [&](double x) {
        const double x2 = (scan.kind == ScanKind::diagonal) ? x : -x;
        return scan.mode == EvalMode::full ? corr.g2_full(x, x2) : corr.g2_broadband(x, x2);
    };
    const double peak = eval(0.0);
    const double null = eval(x_null);
    return (peak - null) / (peak + null);
}

// Fringe period from successive interior minima, each refined by a parabola
// through its three surrounding samples.
inline double fringe_period(const FringeScan& scan) {
    const auto& x = scan.positions;
    const auto& v = scan.values;
    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] < v[i - 1] && v[i] <= v[i + 1]) {
            const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
            const double v0 = v[i - 1], v1 = v[i], v2 = v[i + 1];
            const double denom = (x1 - x0) * (v1 - v2) - (x1 - x2) * (v1 - v0);
            double xm = x1;
            if (denom != 0.0) {
                xm = x1 - 0.5 *
                              ((x1 - x0) * (x1 - x0) * (v1 - v2) -
                               (x1 - x2) * (x1 - x2) * (v1 - v0)) /
                              denom;
                xm = std::clamp(xm, x0, x2);
            }
            minima.push_back(xm);
        }
    }
    if (minima.size() < 3)
        throw InsufficientSpan("fringe_period: need at least three interior minima");
    double sum = 0.0;
    for (std::size_t i = 1; i < minima.size(); ++i) sum += minima[i] - minima[i - 1];
    return sum / static_cast<double>(minima.size() - 1);
}

inline double classical_g1(double x, double alpha_sq, const SlitGeometry& slits,
                           const DetectionGeometry& det) {
    if (alpha_sq < 0.0) throw ConfigError("classical_g1: alpha_sq must be >= 0");
    const double dt = slit_spectrum(det.k * x / det.z, slits);
    const double pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    return det.k / (pi2 * det.z) * alpha_sq * dt * dt;
}

inline double classical_g2(double x1, double x2, double alpha_sq, const SlitGeometry& slits,
                           const DetectionGeometry& det) {
    return classical_g1(x1, alpha_sq, slits, det) * classical_g1(x2, alpha_sq, slits, det);
}

inline FringeScan classical_g1_scan(const std::vector<double>& xs, double alpha_sq,
                                    const SlitGeometry& slits, const DetectionGeometry& det) {
    detail::check_scan_inputs(xs);
    FringeScan scan;
    scan.positions = xs;
    scan.kind = ScanKind::classical_g1;
    scan.mode = EvalMode::broadband;
    for (double x : xs) scan.values.push_back(classical_g1(x, alpha_sq, slits, det));
    detail::check_scan_values(scan.values);
    scan.normalization = "classical first-order reference";
    return scan;
}

// Visibility summary for a two-photon scan: formula value, scan extraction,
// and the oscillation strength coefficient (|f2|^2 D^2(0) on the diagonal,
// |f1|^2 D^2(0) = xi |f2|^2 D^2(0) on the antidiagonal).
inline VisibilityReport visibility_report(const FringeScan& scan, const SpdcScene& scene) {
    const BroadbandCoefficients c = f_integrals(scene);
    VisibilityReport r;
    r.xi = c.xi;
    r.v_formula = visibility_formula(c.xi, scan.kind);
    r.v_extracted = visibility_from_scan(scan, scene);
    const double d0 = slit_spectrum(0.0, scene.slits);
    const double base = std::norm(c.f2) * d0 * d0;
    r.strength = (scan.kind == ScanKind::diagonal) ? base : c.xi * base;
    return r;
}

struct GainSweepRow {
    double g = 0.0;
    double delta0 = 0.0;
    double xi = 0.0;
    double f1_sq = 0.0;
    double f2_sq = 0.0;
    bool degenerate = false;
};

// Broadband coefficients per coupling value; g = 0 rows are flagged degenerate
// instead of carrying undefined ratios.
inline std::vector<GainSweepRow> gain_sweep(const std::vector<double>& g_values, double delta0,
                                            const SpdcScene& scene_template) {
    for (std::size_t i = 0; i < g_values.size(); ++i) {
        if (g_values[i] < 0.0) throw ConfigError("gain_sweep: g values must be >= 0");
        if (i > 0 && !(g_values[i] > g_values[i - 1]))
            throw ConfigError("gain_sweep: g values must be increasing");
    }
    std::vector<GainSweepRow> rows;
    rows.reserve(g_values.size());
    for (double g : g_values) {
        GainSweepRow row;
        row.g = g;
        row.delta0 = delta0;
        if (g == 0.0) {
            row.degenerate = true;
        } else {
            SpdcScene scene = scene_template;
            scene.crystal.g = g;
            scene.crystal.delta0 = delta0;
            const BroadbandCoefficients c = f_integrals(scene);
            row.xi = c.xi;
            row.f1_sq = c.f1 * c.f1;
            row.f2_sq = std::norm(c.f2);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace subwave
