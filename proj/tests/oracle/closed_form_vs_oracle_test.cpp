#include <catch_amalgamated.hpp>

#include <chrono>
#include <cmath>

#include "pathamp/pathamp.hpp"
#include "../property/support.hpp"

using namespace pathamp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("half-period zone by quadrature", "[oracle][wave]")
{
    const double k = 1e7, x1 = 0.3;
    // shift to u = r1 - x1 so the phase stays small, then restore the common factor
    auto q = oracle::integrate([&](double u) { return std::exp(cplx(0, k * u)); }, 0.0, constants::pi / k, 0.0, 1e-13);
    const cplx full = q.value * std::polar(1.0, std::fmod(k * x1, 2 * constants::pi));
    CHECK(std::abs(full - half_period_zone_integral(k, x1)) < 1e-9 * (2 / k));
}

TEST_CASE("damped radial integral against the half-zone rule", "[oracle][wave]")
{
    const double k = 1.0661e7, x1 = 0.5;
    auto d = damped_r1_integral(k, x1, 1e-7 * k);
    const cplx h = huygens_r1_integral(k, x1);
    CHECK(std::abs(d.value - h) / std::abs(h) < 0.02);
    // closed value of the damped integral for reference
    const cplx exact = -1.0 / cplx(-1e-7 * k, k) * std::polar(1.0, std::fmod(k * x1, 2 * constants::pi));
    CHECK(std::abs(d.value - exact) < 1e-6 * std::abs(exact));
}

TEST_CASE("azimuthal upper-limit integral cancels at rapid phase variation", "[oracle][refraction]")
{
    // kappa (r1max - x1) ~ 1e4 on the boundary
    const double k = 1e7, x1 = 1.0;
    boundary_spec rect = rectangular_boundary{0.09, 0.12, 0.004, -0.007};
    auto r = upper_limit_integral(rect, x1, k);
    const double excursion = k * (r1_max_boundary(rect, x1, 0.0) - x1);
    CHECK(excursion > 5e3);
    CHECK(std::abs(r.value) / (2 * constants::pi) < 0.05);
    boundary_spec circ = circular_boundary{0.045, 0.01};
    auto c = upper_limit_integral(circ, x1, k);
    CHECK(std::abs(c.value) / (2 * constants::pi) < 0.05);
    // on-axis circle: no cancellation, phase constant
    boundary_spec centred = circular_boundary{0.045, 0.0};
    CHECK_THAT(std::abs(upper_limit_integral(centred, x1, k).value), WithinRel(2 * constants::pi, 1e-10));
}

TEST_CASE("per-order kernels match nested quadrature", "[oracle][refraction]")
{
    const double k = 4.0;
    const std::vector<std::vector<double>> xs{{0.7}, {0.7, 0.5}, {0.7, 0.5, 0.2}, {0.7, 0.5, 0.2, 0.1}};
    for (int n = 1; n <= 4; ++n)
        for (double dphi : {0.5, 2.0, 7.0, 20.0}) {
            if (n == 4 && dphi > 7.0) continue;  // four nested levels at large budget exceed the test time
            const double ds = dphi / k;
            auto q = oracle::quad_nested(n, k, ds, xs[n - 1], 1e-9);
            const cplx scale = std::exp(cplx(0, k * xs[n - 1][0])) * std::pow(cplx(0, 1 / k), n);
            const cplx b = f_ref_bracket(n, dphi);
            INFO("n=" << n << " dPhi=" << dphi);
            CHECK(std::abs(q.value / scale - b) <= 1e-6 * std::abs(b));
        }
}

TEST_CASE("f_ref from the series equals the Bessel-kernel integral", "[oracle][refraction]")
{
    for (double bl : {0.5, 5.0, 30.0})
        for (double dp : {0.3, 3.0, 20.0}) {
            const cplx a = f_ref(dp, bl).kernel_form;
            const cplx b = f_ref_integral(dp, bl);
            INFO("betaL=" << bl << " dPhi=" << dp);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
        }
}

TEST_CASE("thin sheet phase against the exact argument", "[oracle][refraction]")
{
    const double k = 2 * constants::pi / 589.3e-9;
    for (double N : {1e20, 1e22, 1e24, 1e25, 3e25}) {
        medium_spec m;
        m.N = N;
        m.A_scat = scattering_amplitude_for_index(1.0003, 2.5e25, 589.3e-9);
        m.thickness = 1e-4;
        const auto r = thin_sheet_phase_shift(m, k);
        const double exact = std::arg(cplx(1.0, r.value));
        INFO("dphi=" << r.value);
        if (r.approximation_ok) CHECK(std::abs(r.value - exact) / exact < 5e-3);
        else CHECK(std::abs(r.value - exact) / exact >= 3e-3);
    }
}

TEST_CASE("reflected amplitude from the depth integral", "[oracle][reflection]")
{
    for (double n : {1.2, 1.5, 2.4}) {
        auto r = reflection_amplitude_oracle(n, 589.3e-9, 1.0);
        INFO("n=" << n);
        CHECK_THAT(r.value.real(), WithinRel(reflection_amplitude_fp(1, n), 1e-3));
        CHECK_THAT(std::norm(r.value), WithinRel(reflection_coeff_fp(1, n), 2e-2));
    }
}

TEST_CASE("thermal source motion: average against closed form", "[oracle][michelson]")
{
    const double k = 2 * constants::pi / constants::lambda_NaD, M = constants::m_Na_u * constants::u_kg;
    for (double d : {0.01, 0.1, 1.0}) {
        auto q = source_motion_oracle(k, d, M, constants::T_NTP);
        auto c = source_motion_correction(k, d, M, constants::T_NTP);
        const cplx closed = std::polar(c.exact_modulus, c.exact_phase);
        CHECK(std::abs(q.value - closed) <= 1e-6 * std::abs(closed));
        // relative phase shift per unit 2 kappa d
        CHECK_THAT(-std::arg(q.value) / (2 * k * d), WithinRel(c.relative_shift, 1e-5));
        const double b2 = 2 * thermal_beta2(constants::T_NTP, M);
        CHECK(std::abs(std::abs(q.value) - 1.0) <= std::pow(k * d * b2, 2));
    }
    // no motion: factor one
    auto z = source_motion_oracle(k, 0.1, M, 0.0);
    CHECK(std::abs(z.value - 1.0) < 1e-14);
}

TEST_CASE("gaussian interference: completed square against direct integral", "[oracle][flavour]")
{
    sampler s(7);
    for (int i = 0; i < 60; ++i) {
        const double sigma = s.log_uniform(1e-6, 1e-2), p = s.uniform(0.1, 10);
        const double dr = s.uniform(0, 3) * constants::hbar_c_MeVm / sigma;
        const double dp = s.uniform(-2, 2) * sigma;
        const cplx closed = gaussian_interference_integral(sigma, p, dr, dp);
        const auto q = gaussian_interference_oracle(sigma, p, dr, dp);
        INFO("sigma=" << sigma << " dr=" << dr << " dp=" << dp);
        CHECK(std::abs(q.value - closed) <= 1e-8 * std::abs(closed));
    }
}

TEST_CASE("energy propagator is the transform of the damped exponential", "[oracle][propagators]")
{
    // int_0^inf exp[(i/hbar)(E - E0) t - Gamma t/(2 hbar)] dt in units where hbar = 1
    const double G = 1.0;
    for (double x = -5.0; x <= 5.0; x += 0.5) {
        auto q = oracle::quad_oscillatory([&](double t) { return std::exp(cplx(-G * t / 2, x * t)); }, 0.0, INFINITY,
                                          std::max(std::abs(x), 0.5), 1e-8, G / 2);
        const cplx closed = -energy_propagator(x * constants::hbar_eVs, 0.0, G * constants::hbar_eVs);
        INFO("E-E0=" << x);
        CHECK(std::abs(q.value - closed) <= 1e-4 * std::abs(closed));
    }
}

TEST_CASE("energy propagator width read off a scan", "[oracle][propagators]")
{
    const double G = 3e-7, E0 = 2.1;
    const double peak = std::norm(energy_propagator(E0, E0, G));
    // bisection for the upper half-maximum point
    double lo = E0, hi = E0 + 5 * G;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (std::norm(energy_propagator(m, E0, G)) > peak / 2 ? lo : hi) = m;
    }
    CHECK_THAT(2 * (0.5 * (lo + hi) - E0), WithinRel(G, 1e-6));
}

TEST_CASE("smeared production time: closed form against convolution", "[oracle][propagators]")
{
    const double tau = 16e-9, sig = 2e-9, r = 3.0, t0 = 0.0;
    for (double tD : {40e-9, 60e-9, 100e-9}) {
        // production time Gaussian over the whole line, exponential after emission at t_P + r/c
        auto q = oracle::integrate(
            [&](double tp) {
                const double lag = tD - tp - r / constants::c;
                const double g = std::exp(-0.5 * std::pow((tp - t0) / sig, 2)) / (std::sqrt(2 * constants::pi) * sig);
                return cplx(g * std::exp(-lag / tau), 0.0);
            },
            t0 - 12 * sig, t0 + 12 * sig, 0.0, 1e-13);
        CHECK_THAT(q.value.real(), WithinRel(free_decay_detection_probability(tD, t0, sig, r, tau), 1e-8));
    }
}

TEST_CASE("propagator phase recomputed independently", "[oracle][propagators]")
{
    const on_shell_particle p{1.0, 0.0, 0.6};
    const double r = 1.0, dt = r / (0.6 * constants::c);
    const long double gamma = 1.25L, E = gamma * 1.0L, pc = gamma * 0.6L;
    const long double ph = -(E * dt - pc * r / constants::c) / constants::hbar_MeVs;
    CHECK_THAT(covariant_propagator(p, r, dt).phase_unwrapped, WithinRel(double(ph), 1e-12));
}
