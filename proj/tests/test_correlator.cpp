#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include <subwave/correlator.hpp>

namespace {

using subwave::complex;

subwave::SpdcScene kernel_scene(double delta0) {
    subwave::SpdcScene s;
    s.crystal = {1.84, delta0, 20.0, 1.0, 0.0};
    s.slits = {1.0, 5.0};
    s.det = {1.0, 2500.0};
    return s;
}

// Shared across test cases: the moment and aperture memo tables make every
// kernel evaluation after the first one on a scene much cheaper.
const subwave::Correlator& corr_c() {
    static const subwave::Correlator c{kernel_scene(0.0)};
    return c;
}

const subwave::Correlator& corr_d() {
    static const subwave::Correlator c{kernel_scene(0.5)};
    return c;
}

double fringe_pitch(const subwave::SpdcScene& s) {
    return std::numbers::pi * s.det.z / (s.det.k * s.slits.d);
}

void require_close(complex got, complex want, double rel) {
    CAPTURE(got.real(), got.imag(), want.real(), want.imag(), rel);
    REQUIRE(std::abs(got - want) <= rel * std::abs(want));
}

void require_close(double got, double want, double rel) {
    CAPTURE(got, want, rel);
    REQUIRE(std::abs(got - want) <= rel * std::abs(want));
}

} // namespace

TEST_CASE("broadband coefficients reproduce frozen references") {
    const subwave::BroadbandCoefficients& pm = corr_c().coefficients();
    require_close(pm.f1, 8.284712934509503e-4, 5e-7);
    require_close(pm.f2, complex(7.74827831657831e-4, 2.9900916868932735e-4), 5e-7);
    require_close(pm.xi, 0.9950708294614296, 5e-7);

    const subwave::BroadbandCoefficients& pd = corr_d().coefficients();
    require_close(pd.f1, 7.454200184371965e-4, 5e-7);
    require_close(pd.f2, complex(7.600489172548314e-4, -2.009071434430805e-5), 5e-7);
    require_close(pd.xi, 0.9612042150170886, 5e-7);

    const double rc = pm.f1 / std::abs(pm.f2);
    require_close(pm.xi, rc * rc, 1e-12);
}

TEST_CASE("pair kernels reproduce frozen references on the phase-matched scene") {
    const subwave::Correlator& corr = corr_c();
    const double p = fringe_pitch(corr.scene());
    const double x1 = 0.37 * p;
    const double x2 = -0.81 * p;
    const double xd = 0.25 * p;

    const complex m11 = corr.m_kernel(x1, x1);
    REQUIRE(std::abs(m11.imag()) <= 1e-12 * m11.real());
    require_close(m11.real(), 6.60931134678755e-4, 5e-6);

    // the first probe domain is already stable for this scene, so the
    // transverse cut must sit exactly at its deterministic base value
    require_close(corr.q_domain(), 271.29319932501073, 1e-12);

    require_close(corr.m_kernel(x2, x2).real(), 6.609877176418181e-4, 5e-6);
    require_close(corr.m_kernel(x1, x2),
                  complex(-1.802092603638947e-4, -7.1482326508367e-11), 5e-6);
    require_close(corr.n_kernel(x1, x2),
                  complex(4.743670053987321e-4, 1.7619062572266848e-4), 5e-6);

    require_close(corr.m_kernel(0.0, 0.0).real(), 6.609161824609551e-4, 5e-6);
    require_close(corr.n_kernel(0.0, 0.0),
                  complex(6.175568107879293e-4, 2.2938638839483893e-4), 5e-6);

    require_close(corr.m_kernel(xd, xd).real(), 6.609230108804711e-4, 5e-6);
    require_close(corr.n_kernel(xd, xd),
                  complex(4.3489909957393204e-4, 1.6157019288644503e-4), 5e-6);

    require_close(corr.g2_full(x1, x2), 7.254099321541406e-7, 1e-5);
    require_close(corr.g2_full(xd, xd), 1.0888806066621945e-6, 1e-5);
}

TEST_CASE("pair kernels reproduce frozen references on the detuned scene") {
    const subwave::Correlator& corr = corr_d();
    const double p = fringe_pitch(corr.scene());
    const double x1 = 0.37 * p;
    const double x2 = -0.81 * p;
    const double xd = 0.25 * p;

    const complex m11 = corr.m_kernel(x1, x1);
    require_close(m11.real(), 5.975298791157061e-4, 5e-6);
    require_close(corr.q_domain(), 271.6615541441225, 1e-12);

    require_close(corr.m_kernel(x2, x2).real(), 5.975968851807073e-4, 5e-6);
    require_close(corr.m_kernel(x1, x2),
                  complex(-1.6288845902011795e-4, -8.480513242912055e-11), 5e-6);

    // detuning rotates the pair kernel phase clockwise: negative imaginary part
    require_close(corr.n_kernel(x1, x2),
                  complex(4.644500288651318e-4, -1.943678404887285e-5), 5e-6);
    require_close(corr.m_kernel(0.0, 0.0).real(), 5.975122369890568e-4, 5e-6);
    require_close(corr.n_kernel(0.0, 0.0),
                  complex(6.046523259152183e-4, -2.530096075702701e-5), 5e-6);
    require_close(corr.m_kernel(xd, xd).real(), 5.975202897544901e-4, 5e-6);
    require_close(corr.n_kernel(xd, xd),
                  complex(4.258115923860125e-4, -1.778230340757575e-5), 5e-6);

    require_close(corr.g2_full(x1, x2), 5.997062625308906e-7, 1e-5);
    require_close(corr.g2_full(xd, xd), 8.956927158613702e-7, 1e-5);
}

TEST_CASE("kernel symmetries and correlation composition") {
    const subwave::Correlator& corr = corr_c();
    const double p = fringe_pitch(corr.scene());
    const double x1 = 0.37 * p;
    const double x2 = -0.81 * p;

    const complex m12 = corr.m_kernel(x1, x2);
    const complex m21 = corr.m_kernel(x2, x1);
    REQUIRE(std::abs(m21 - std::conj(m12)) <= 1e-6 * std::abs(m12));

    const complex n12 = corr.n_kernel(x1, x2);
    const complex n21 = corr.n_kernel(x2, x1);
    REQUIRE(std::abs(n21 - n12) <= 1e-5 * std::abs(n12));

    const double m11 = corr.m_kernel(x1, x1).real();
    const double m22 = corr.m_kernel(x2, x2).real();
    REQUIRE(m11 > 0.0);
    REQUIRE(m22 > 0.0);
    const double composed = m11 * m22 + std::norm(m12) + std::norm(n12);
    require_close(corr.g2_full(x1, x2), composed, 1e-9);
}

TEST_CASE("broadband path equals its closed form and tracks the full path far out") {
    const subwave::Correlator& corr = corr_c();
    const subwave::SpdcScene& s = corr.scene();
    const double p = fringe_pitch(s);
    const double x1 = 0.37 * p;
    const double x2 = -0.81 * p;
    const double xd = 0.25 * p;

    const subwave::BroadbandCoefficients& c = corr.coefficients();
    const double sc = s.det.k / s.det.z;
    const double d0 = subwave::slit_spectrum(0.0, s.slits);
    const double dm = subwave::slit_spectrum(sc * (x1 - x2), s.slits);
    const double dp = subwave::slit_spectrum(sc * (x1 + x2), s.slits);
    const double expected = std::norm(c.f2) * (c.xi * d0 * d0 + c.xi * dm * dm + dp * dp);
    require_close(corr.g2_broadband(x1, x2), expected, 1e-12);

    // wide gain band (q0 d = 100) at z = 100 k d^2: the two paths agree to ~1%
    require_close(corr.g2_full(xd, xd), corr.g2_broadband(xd, xd), 2e-2);
}

TEST_CASE("degenerate gain and invalid inputs are rejected") {
    subwave::SpdcScene off = kernel_scene(0.0);
    off.crystal.g = 0.0;
    REQUIRE_THROWS_AS(subwave::f_integrals(off), subwave::DegenerateGain);
    REQUIRE_THROWS_AS(subwave::Correlator(off).g2_broadband(0.0, 0.0), subwave::DegenerateGain);

    // with zero gain both kernels vanish identically and the full path gives 0
    REQUIRE(subwave::Correlator(off).g2_full(0.0, 0.0) == 0.0);

    subwave::SpdcScene bad = kernel_scene(0.0);
    bad.slits.b = 6.0;
    REQUIRE_THROWS_AS(subwave::Correlator{bad}, subwave::ConfigError);

    subwave::QuadSpec q;
    q.rel_tol = 0.0;
    REQUIRE_THROWS_AS(subwave::Correlator(kernel_scene(0.0), q), subwave::ConfigError);
}
