#pragma once

// Double-slit geometry: the indicator D(x), its Fourier transform, and the
// Fresnel-propagated aperture kernel that replaces the Fourier transform at
// finite distance.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "params.hpp"
#include "quadrature.hpp"

namespace subwave {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

inline int slit_indicator(double x, const SlitGeometry& s) {
    const double lo = 0.5 * (s.d - s.b);
    const double hi = 0.5 * (s.d + s.b);
    const double ax = std::abs(x);
    return (ax >= lo && ax <= hi) ? 1 : 0;
}

namespace detail {

inline double sinc(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

} // namespace detail

// Fourier transform of the indicator: (2b/sqrt(2pi)) sinc(qb/2) cos(qd/2).
inline double slit_spectrum(double q, const SlitGeometry& s) {
    return 2.0 * s.b * kInvSqrt2Pi * detail::sinc(0.5 * q * s.b) * std::cos(0.5 * q * s.d);
}

// Fresnel kernel evaluated at spatial frequency q and detector position x:
//   (1/sqrt(2pi)) Int D(x') exp[i k x'^2/(2z) + i (q - kx/z) x'] dx'.
// The indicator reduces the line integral to the two slit intervals; mirror
// symmetry folds them into a single cosine integral, manifestly even in the
// shifted frequency beta = q - kx/z.
inline complex fresnel_aperture_kernel(double q, double x, const SlitGeometry& s,
                                       const DetectionGeometry& det, const QuadSpec& spec) {
    const double lo = 0.5 * (s.d - s.b);
    const double hi = 0.5 * (s.d + s.b);
    const double alpha = 0.5 * det.k / det.z;
    const double beta = std::abs(q - det.k * x / det.z);

    // seed roughly two cosine periods per initial segment
    std::vector<double> pts;
    const double period = 2.0 * std::numbers::pi / std::max(beta, 1.0);
    const int n = static_cast<int>((hi - lo) / (2.0 * period)) + 1;
    for (int i = 1; i < n; ++i) pts.push_back(lo + (hi - lo) * i / n);

    auto integrand = [&](double t) {
        return std::polar(1.0, alpha * t * t) * std::cos(beta * t);
    };
    const QuadResult r = integrate_1d(integrand, lo, hi, spec, pts);
    return 2.0 * kInvSqrt2Pi * r.value;
}

// Far-field limit of the kernel: the Fourier transform at the shifted frequency.
inline double far_field_kernel(double q, double x, const SlitGeometry& s,
                               const DetectionGeometry& det) {
    return slit_spectrum(det.k * x / det.z - q, s);
}

} // namespace subwave
