#pragma once

#include <cmath>
#include <optional>

#include "core.hpp"
#include "oracle.hpp"
#include "propagators.hpp"

namespace pathamp {

struct diffraction_geometry {
    double r = 0.0;   // source -> hole, m
    double r1 = 0.0;  // hole -> detector, m
    double alpha = 0.0;
    double alpha1 = 0.0;
    double dS = 0.0;  // hole area, m^2
};

inline void check_geometry(const diffraction_geometry& g)
{
    require(g.r > 0 && g.r1 > 0 && g.dS > 0, errc::domain, "diffraction geometry: r, r1, dS must be positive");
    const double h = constants::pi / 2;
    require(g.alpha >= 0 && g.alpha < h && g.alpha1 >= 0 && g.alpha1 < h, errc::domain,
            "diffraction geometry: angles must lie in [0, pi/2)");
}

inline cplx spherical_wave(double kappa, double r1)
{
    require(kappa > 0, errc::domain, "spherical wave: kappa must be positive");
    require(r1 > 0, errc::domain, "spherical wave: r1 must be positive");
    return std::polar(1.0 / r1, std::fmod(kappa * r1, 2.0 * constants::pi));
}

// |lap U + kappa^2 U| / |kappa^2 U| with the radial Laplacian (1/r) d^2(rU)/dr^2
// done by a 3-point stencil. `field(r0, dr)` returns U(r0 + dr); passing the
// offset separately lets the field keep phase accuracy at large kappa*r.
template <typename Field>
double helmholtz_residual(double kappa, double r1, double step, Field&& field)
{
    require(kappa > 0 && r1 > 0, errc::domain, "helmholtz residual: kappa and r1 must be positive");
    require(step > 0, errc::domain, "helmholtz residual: step must be positive");
    require(step < 0.1 / kappa && step < 0.1 * r1, errc::precondition,
            "helmholtz residual: step must be well below 1/kappa and r1",
            {{"step", step}, {"limit", std::min(0.1 / kappa, 0.1 * r1)}});
    const cplx up = (r1 + step) * field(r1, step);
    const cplx mid = r1 * field(r1, 0.0);
    const cplx dn = (r1 - step) * field(r1, -step);
    // second difference of rU, relative to the centre value to keep the cancellation visible
    const cplx lap = ((up - mid) + (dn - mid)) / (step * step * r1);
    const cplx u = field(r1, 0.0);
    return std::abs(lap + kappa * kappa * u) / std::abs(kappa * kappa * u);
}

inline double helmholtz_residual(double kappa, double r1, double step)
{
    const double base = std::fmod(kappa * r1, 2.0 * constants::pi);
    return helmholtz_residual(kappa, r1, step, [&](double r0, double dr) {
        return std::polar(1.0 / (r0 + dr), base + kappa * dr);
    });
}

inline cplx diffraction_amplitude(double kappa, double alpha, double alpha1)
{
    require(kappa > 0, errc::domain, "diffraction amplitude: kappa must be positive");
    return cplx(0.0, -kappa / (4.0 * constants::pi) * (std::cos(alpha) + std::cos(alpha1)));
}

// int_{x1}^{x1 + pi/kappa} e^{i kappa r1} dr1 = (2i/kappa) e^{i kappa x1}
inline cplx half_period_zone_integral(double kappa, double x1)
{
    require(kappa > 0, errc::domain, "half-period zone: kappa must be positive");
    const long double ph = std::fmod(static_cast<long double>(kappa) * x1, 2.0L * constants::pi);
    return std::polar(2.0 / kappa, double(ph) + constants::pi / 2);
}

// The Huygens-Fresnel rule: the whole r1 integral is half the first zone.
inline cplx huygens_r1_integral(double kappa, double x1) { return 0.5 * half_period_zone_integral(kappa, x1); }

// Damped r1 integral int_{x1}^inf e^{i kappa r1 - rho (r1 - x1)} dr1 by the oracle,
// in the shifted variable u = r1 - x1 so the phase stays small.
inline oracle::result<cplx> damped_r1_integral(double kappa, double x1, double rho, double tol = 1e-10)
{
    require(kappa > 0 && rho > 0, errc::domain, "damped r1 integral: kappa and rho must be positive");
    auto r = oracle::quad_oscillatory([&](double u) { return std::exp(cplx(-rho * u, kappa * u)); }, 0.0,
                                      INFINITY, kappa, tol, rho, 2'000'000);
    const long double ph = std::fmod(static_cast<long double>(kappa) * x1, 2.0L * constants::pi);
    r.value *= std::polar(1.0, double(ph));
    return r;
}

// Diffraction through one small hole. Zero before light could have arrived.
inline cplx hole_path_amplitude(const emitter_spec& e, const diffraction_geometry& g, double tD,
                                cplx A_tilde = 1.0)
{
    check_emitter(e);
    check_geometry(g);
    const double lag = constants::c * (tD - e.t0) - g.r - g.r1;  // c (t_gamma - t0)
    if (lag < 0) return {0.0, 0.0};
    const long double ph = std::fmod(-static_cast<long double>(e.kappa()) * lag, 2.0L * constants::pi);
    const cplx time_factor = std::polar(std::exp(-e.rho() * lag), double(ph));
    return A_tilde / (g.r * g.r1) * diffraction_amplitude(e.kappa(), g.alpha, g.alpha1) * g.dS * time_factor;
}

// Same amplitude rebuilt from the separate process amplitudes: atom propagator
// over t_gamma - t0, two photon propagators, diffraction and hole weight.
inline cplx hole_path_amplitude_product(const emitter_spec& e, const diffraction_geometry& g, double tD,
                                        cplx A_tilde = 1.0)
{
    check_geometry(g);
    const double t_gamma = tD - (g.r + g.r1) / constants::c;
    if (t_gamma < e.t0) return {0.0, 0.0};
    const on_shell_particle photon{0.0, 0.0, 1.0};
    const cplx atom = temporal_propagator(e, t_gamma - e.t0).amplitude;
    const cplx before = covariant_propagator(photon, g.r, g.r / constants::c).amplitude;
    const cplx after = covariant_propagator(photon, g.r1, g.r1 / constants::c).amplitude;
    return A_tilde * after * diffraction_amplitude(e.kappa(), g.alpha, g.alpha1) * g.dS * before * atom;
}

// Source straight to detector, no screen.
inline cplx direct_amplitude(const emitter_spec& e, double x_SD, double tD, cplx A_tilde = 1.0)
{
    check_emitter(e);
    require(x_SD > 0, errc::domain, "direct amplitude: distance must be positive");
    const double lag = constants::c * (tD - e.t0) - x_SD;
    if (lag < 0) return {0.0, 0.0};
    const long double ph = std::fmod(-static_cast<long double>(e.kappa()) * lag, 2.0L * constants::pi);
    return A_tilde / x_SD * std::polar(std::exp(-e.rho() * lag), double(ph));
}

// Hole amplitudes summed over an infinite plane at distance x1 from the
// detector, the r1 integral taken by the Huygens rule; r ~ x_SD in the
// denominator and r + x1 ~ x_SD in the phase.
inline cplx plane_sum_amplitude(const emitter_spec& e, double x_SD, double x1, double tD,
                                std::optional<cplx> A_diff = std::nullopt, cplx A_tilde = 1.0)
{
    check_emitter(e);
    require(x_SD > x1 && x1 > 0, errc::domain, "plane sum: need 0 < x1 < x_SD");
    const double kappa = e.kappa();
    const cplx ad = A_diff.value_or(diffraction_amplitude(kappa, 0.0, 0.0));
    const double lag = constants::c * (tD - e.t0) - x_SD;
    if (lag < 0) return {0.0, 0.0};
    // exp[-i kappa (c(tD - t0) - r)] with r = x_SD - x1, kept in long double
    const long double outer = -static_cast<long double>(kappa) * (static_cast<long double>(lag) + x1);
    const cplx zone = huygens_r1_integral(kappa, x1);
    const cplx pre = std::polar(std::exp(-e.rho() * lag), double(std::fmod(outer, 2.0L * constants::pi)));
    return A_tilde / x_SD * pre * 2.0 * constants::pi * ad * zone;
}

}  // namespace pathamp
