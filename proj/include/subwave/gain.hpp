#pragma once

// Parametric-gain coefficients of the amplifier input-output relation:
//   U(q,Omega) = Theta * [cosh(Gamma) + (i*delta/(2*Gamma)) sinh(Gamma)]
//   V(q,Omega) = Theta * (g/Gamma) sinh(Gamma)
// with Gamma = sqrt(g^2 - delta^2/4) taken on the principal branch, so Gamma is
// real inside the gain band |delta| <= 2g and positive-imaginary outside. One
// complex code path covers both branches; the Gamma -> 0 point is removable.

#include <cmath>
#include <complex>

#include "params.hpp"

namespace subwave {

namespace detail {

// sinh(x)/x with the removable singularity handled by series; for |x| < 1e-4
// the x^6 term sits near 1e-25, far below double rounding.
inline complex sinhc(complex x) {
    const double m = std::abs(x);
    if (m < 1e-4) {
        const complex x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

// Coefficient factors with the propagation phase stripped off.
struct BareGain {
    complex u;
    complex v;
};

inline BareGain bare_gain(double d, const CrystalParams& p) {
    const complex G = std::sqrt(complex(p.g * p.g - 0.25 * d * d, 0.0));
    const complex sc = sinhc(G);
    return {std::cosh(G) + complex(0.0, 0.5 * d) * sc, p.g * sc};
}

} // namespace detail

struct GainPair {
    complex u{};
    complex v{};
};

// Dimensionless phase mismatch delta(q,Omega) = delta0 + (Omega/omega0)^2 - (q/q0)^2.
inline double mismatch(double q, double omega, const CrystalParams& p) {
    const double qn = q / p.q0;
    const double wn = omega / p.omega0;
    return p.delta0 + wn * wn - qn * qn;
}

inline complex gamma(double q, double omega, const CrystalParams& p) {
    const double d = mismatch(q, omega, p);
    return std::sqrt(complex(p.g * p.g - 0.25 * d * d, 0.0));
}

// Residual propagation phase. Under paraxial quadratic dispersion the
// q- and Omega-quadratic pieces cancel against delta/2, leaving a linear
// frequency slope (group_delay) and the constant -delta0/2. Unimodular.
inline complex theta_phase(double /*q*/, double omega, const CrystalParams& p) {
    return std::polar(1.0, p.group_delay * omega / p.omega0 - 0.5 * p.delta0);
}

inline GainPair gain_pair(double q, double omega, const CrystalParams& p) {
    const detail::BareGain b = detail::bare_gain(mismatch(q, omega, p), p);
    const complex theta = theta_phase(q, omega, p);
    return {theta * b.u, theta * b.v};
}

// V(q,Omega) * U(-q,-Omega), the pair-correlation factor of the second-order
// kernels. The mismatch is even under the joint sign flip and the two
// propagation phases collapse to exp(-i*delta0), so a single coefficient
// evaluation suffices; in particular the group delay drops out exactly.
inline complex pair_product(double q, double omega, const CrystalParams& p) {
    const detail::BareGain b = detail::bare_gain(mismatch(q, omega, p), p);
    return std::polar(1.0, -p.delta0) * (b.v * b.u);
}

} // namespace subwave
