#pragma once

// Global-adaptive Gauss-Kronrod (G7/K15) integration for real- or complex-valued
// integrands, one- and two-dimensional, plus the frequency-domain truncation rule.
//
// Strategy: keep a worst-error-first heap of segments, bisect until the summed
// Kronrod-Gauss discrepancy meets max(abs_tol, rel_tol*|value|). Callers with
// oscillatory integrands can seed interior breakpoints; refinement stays on the
// dyadic lattice those segments induce, which keeps memoised integrand factors
// shared between repeated calls.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace subwave {

namespace detail {

// Kronrod-15 abscissae (positive half) and weights; rows 1,3,5,7 carry the
// embedded Gauss-7 rule.
inline constexpr double kGkNodes[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};

inline constexpr double kKronrodW[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};

inline constexpr double kGaussW[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

template <class F>
std::pair<complex, double> gauss_kronrod_15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    auto eval = [&](double x) -> complex {
        complex v = f(x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteIntegrand("integrand not finite at x = " + std::to_string(x));
        return v;
    };
    complex kronrod = kKronrodW[7] * eval(c);
    complex gauss = kGaussW[3] * eval(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGkNodes[i];
        const complex sum = eval(c - dx) + eval(c + dx);
        kronrod += kKronrodW[i] * sum;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * sum;
    }
    kronrod *= h;
    gauss *= h;
    return {kronrod, std::abs(kronrod - gauss)};
}

struct Segment {
    double a, b;
    complex value;
    double err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

} // namespace detail

// Breakpoint-seeded variant: `interior` lists strictly increasing split points
// inside (a,b). An empty list falls back to an eightfold uniform split so a
// single deceptive coarse estimate cannot satisfy the tolerance unexamined.
template <class F>
QuadResult integrate_1d(F&& f, double a, double b, const QuadSpec& spec,
                        const std::vector<double>& interior) {
    validate(spec);
    if (!(a < b)) throw InvalidInterval("integrate_1d: require a < b");

    std::vector<double> edges;
    edges.push_back(a);
    for (double p : interior) {
        if (!(p > edges.back() && p < b))
            throw InvalidInterval("integrate_1d: breakpoints must be increasing within (a,b)");
        edges.push_back(p);
    }
    edges.push_back(b);
    if (edges.size() == 2) {
        edges.pop_back();
        for (int i = 1; i < 8; ++i) edges.push_back(a + (b - a) * i / 8.0);
        edges.push_back(b);
    }

    std::priority_queue<detail::Segment> heap;
    complex total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto [v, e] = detail::gauss_kronrod_15(f, edges[i], edges[i + 1]);
        heap.push({edges[i], edges[i + 1], v, e});
        total += v;
        total_err += e;
    }

    int splits = 0;
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (total_err > tolerance()) {
        if (splits >= spec.max_subdivisions)
            throw NonConvergent("integrate_1d: error " + std::to_string(total_err) +
                                " above tolerance " + std::to_string(tolerance()) + " after " +
                                std::to_string(splits) + " subdivisions");
        detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw NonConvergent("integrate_1d: interval below machine resolution");
        auto [v1, e1] = detail::gauss_kronrod_15(f, worst.a, mid);
        auto [v2, e2] = detail::gauss_kronrod_15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push({worst.a, mid, v1, e1});
        heap.push({mid, worst.b, v2, e2});
        ++splits;
    }
    return {total, total_err, splits};
}

template <class F>
QuadResult integrate_1d(F&& f, double a, double b, const QuadSpec& spec) {
    return integrate_1d(std::forward<F>(f), a, b, spec, {});
}

struct Rectangle {
    double x_min, x_max;
    double y_min, y_max;
};

// Iterated 1D integration; the inner pass runs at half tolerance so its noise
// stays below the outer rule's discrimination.
template <class F>
QuadResult integrate_2d(F&& f, const Rectangle& r, const QuadSpec& spec) {
    validate(spec);
    if (!(r.x_min < r.x_max) || !(r.y_min < r.y_max))
        throw InvalidInterval("integrate_2d: degenerate rectangle");
    QuadSpec inner = spec;
    inner.rel_tol *= 0.5;
    inner.abs_tol *= 0.5;
    auto row = [&](double y) -> complex {
        return integrate_1d([&](double x) { return complex(f(x, y)); }, r.x_min, r.x_max, inner)
            .value;
    };
    return integrate_1d(row, r.y_min, r.y_max, spec);
}

// Truncation of the infinite frequency domain: past Omega_max the mismatch
// delta = delta0 + (Omega/omega0)^2 - (q/q0)^2 exceeds both the gain band
// (2*g*tail_cut) and a flat guard (tail_cut), so the gain factors are tail-only
// there. Callers pair this cut with a doubling convergence check.
inline std::pair<double, double> truncate_omega_domain(const CrystalParams& params,
                                                       const QuadSpec& spec) {
    validate(params);
    validate(spec);
    const double onesided =
        params.omega0 *
        std::sqrt(std::max(0.0, 2.0 * params.g * spec.tail_cut - params.delta0) + spec.tail_cut);
    return {-onesided, onesided};
}

} // namespace subwave
