#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace subwave {

using complex = std::complex<double>;

// Tolerances and domain-truncation control for the adaptive integrators.
struct QuadSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 500000;
    double tail_cut = 50.0;
};

inline void validate(const QuadSpec& q) {
    if (!(q.rel_tol > 0.0)) throw ConfigError("QuadSpec: rel_tol must be > 0");
    if (!(q.abs_tol >= 0.0)) throw ConfigError("QuadSpec: abs_tol must be >= 0");
    if (q.max_subdivisions < 1) throw ConfigError("QuadSpec: max_subdivisions must be >= 1");
    if (!(q.tail_cut > 0.0)) throw ConfigError("QuadSpec: tail_cut must be > 0");
}

// Per-point correlation quadrature can run looser than the scalar integrals;
// comparisons downstream live at the 1e-4 .. 1e-2 level.
inline QuadSpec default_g2_quad() {
    return QuadSpec{1e-6, 1e-12, 500000, 50.0};
}

struct QuadResult {
    complex value{};
    double error_estimate = 0.0;
    int subdivisions_used = 0;
};

// Parametric amplifier: coupling g, phase-matching offset delta0, gain bandwidths
// q0 (spatial frequency) and omega0 (frequency), optional residual group-delay
// phase slope (pure phase, provably invisible in every observable here).
struct CrystalParams {
    double g = 1.0;
    double delta0 = 0.0;
    double q0 = 1.0;
    double omega0 = 1.0;
    double group_delay = 0.0;
};

inline void validate(const CrystalParams& c) {
    if (!(c.g >= 0.0)) throw ConfigError("CrystalParams: g must be >= 0");
    if (!(c.q0 > 0.0)) throw ConfigError("CrystalParams: q0 must be > 0");
    if (!(c.omega0 > 0.0)) throw ConfigError("CrystalParams: omega0 must be > 0");
    if (!std::isfinite(c.delta0)) throw ConfigError("CrystalParams: delta0 must be finite");
    if (!std::isfinite(c.group_delay)) throw ConfigError("CrystalParams: group_delay must be finite");
}

// Two slits of width b centered at +-d/2; disjoint only if b < d.
struct SlitGeometry {
    double b = 1.0;
    double d = 5.0;
};

inline void validate(const SlitGeometry& s) {
    if (!(s.b > 0.0) || !(s.d > s.b))
        throw ConfigError("SlitGeometry: need 0 < b < d");
}

struct DetectionGeometry {
    double k = 1.0;
    double z = 1.0;
};

inline void validate(const DetectionGeometry& d) {
    if (!(d.k > 0.0)) throw ConfigError("DetectionGeometry: k must be > 0");
    if (!(d.z > 0.0)) throw ConfigError("DetectionGeometry: z must be > 0");
}

struct SpdcScene {
    CrystalParams crystal;
    SlitGeometry slits;
    DetectionGeometry det;
    QuadSpec quad;

    // Broadband-validity diagnostic; the analytic limit assumes q0*d >> 1.
    double broadband_ratio() const { return crystal.q0 * slits.d; }
};

inline void validate(const SpdcScene& s) {
    validate(s.crystal);
    validate(s.slits);
    validate(s.det);
    validate(s.quad);
}

struct BroadbandCoefficients {
    double f1 = 0.0;
    complex f2{};
    double xi = 0.0;
};

} // namespace subwave
