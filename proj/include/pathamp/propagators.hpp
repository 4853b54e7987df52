#pragma once

#include <cmath>

#include "core.hpp"

namespace pathamp {

// Masses and widths in MeV (c = 1 for energies), velocities as beta.
struct on_shell_particle {
    double mass = 0.0;   // MeV/c^2
    double width = 0.0;  // MeV
    double beta = 1.0;
};

// Atomic source: level energies and width in eV, production time in s.
struct emitter_spec {
    double E_i0 = 0.0;
    double E_f0 = 0.0;
    double width = 0.0;
    double t0 = 0.0;

    double transition_energy() const { return E_i0 - E_f0; }
    double kappa() const { return transition_energy() / constants::hbar_c_eVm; }  // 1/m
    double rho() const { return width / (2.0 * constants::hbar_c_eVm); }          // 1/m
    double lifetime() const { return width > 0 ? constants::hbar_eVs / width : INFINITY; }
    double wavelength() const { return 2.0 * constants::pi / kappa(); }
};

inline emitter_spec emitter_from_line(double lambda, double tau_S, double t0 = 0.0)
{
    require(lambda > 0 && tau_S > 0, errc::domain, "emitter: wavelength and lifetime must be positive");
    return {constants::h_eVs * constants::c / lambda, 0.0, constants::hbar_eVs / tau_S, t0};
}

inline void check_emitter(const emitter_spec& e)
{
    require(e.E_i0 > e.E_f0, errc::domain, "emitter: upper level must lie above the lower one");
    require(e.width >= 0, errc::domain, "emitter: negative width");
}

struct propagator_value {
    cplx amplitude;
    double phase_unwrapped;  // rad, before reduction mod 2 pi
    double proper_time;      // s
};

// (beta/r) exp[-(i/hbar)(m c^2 - i Gamma/2) dtau], dtau = dt sqrt(1 - beta^2)
inline propagator_value covariant_propagator(const on_shell_particle& p, double r, double dt)
{
    require(r > 0, errc::domain, "covariant propagator: r must be positive");
    require(dt > 0, errc::domain, "covariant propagator: dt must be positive");
    require(p.mass >= 0 && p.width >= 0, errc::domain, "covariant propagator: negative mass or width");
    require(p.beta > 0, errc::precondition,
            "covariant propagator undefined at rest; use the temporal propagator");
    require(p.beta <= 1, errc::domain, "covariant propagator: beta > 1");
    require(!(p.beta >= 1 && p.mass > 0), errc::domain, "massive particle cannot have beta = 1");
    require(!(p.mass == 0 && p.beta < 1), errc::domain, "massless particle must have beta = 1");
    const double beta_path = r / (constants::c * dt);
    require(std::abs(beta_path - p.beta) <= 1e-9 * std::max(1.0, p.beta), errc::precondition,
            "beta inconsistent with r/(c dt)", {{"beta", p.beta}, {"r_over_c_dt", beta_path}});
    if (p.mass == 0) return {cplx(1.0 / r, 0.0), 0.0, 0.0};
    const double dtau = dt * std::sqrt(1.0 - p.beta * p.beta);
    const double ph = -p.mass * dtau / constants::hbar_MeVs;
    const double damp = std::exp(-p.width * dtau / (2.0 * constants::hbar_MeVs));
    return {std::polar(p.beta / r * damp, ph), ph, dtau};
}

// Same phase written with lab quantities, -(E dt - p r)/hbar.
inline double lab_frame_phase(const on_shell_particle& p, double r, double dt)
{
    const double gamma = 1.0 / std::sqrt(1.0 - p.beta * p.beta);
    const double E = gamma * p.mass;                         // MeV
    const double pc = gamma * p.beta * p.mass;               // MeV
    return -(E * dt - pc * r / constants::c) / constants::hbar_MeVs;
}

// Excited state at rest: exp[-(i/hbar)(E_i0 - E_f0 - i Gamma/2) dtau]
inline propagator_value temporal_propagator(const emitter_spec& e, double dtau)
{
    check_emitter(e);
    require(dtau >= 0, errc::domain, "temporal propagator defined for forward proper time only");
    const double ph = -e.transition_energy() * dtau / constants::hbar_eVs;
    const double damp = std::exp(-e.width * dtau / (2.0 * constants::hbar_eVs));
    return {std::polar(damp, ph), ph, dtau};
}

// hbar / (i(E - E0) - Gamma/2), energies in eV; result in s
inline cplx energy_propagator(double E, double E0, double width)
{
    require(width > 0, errc::domain, "energy propagator needs a positive width");
    return constants::hbar_eVs / cplx(-width / 2.0, E - E0);
}

// Detection-time density of a photon from a decay whose production time is
// Gaussian (mean t0, standard deviation sigma_t) in front of the detector at r.
// With sigma_t = 0 the density vanishes before the light-travel onset; with
// sigma_t > 0 the production-time integral runs over the whole real line, which
// gives the closed form below.
inline double free_decay_detection_probability(double tD, double t0, double sigma_t, double r,
                                               double tau_S, double norm = 1.0)
{
    require(sigma_t >= 0, errc::domain, "sigma_t must be non-negative");
    require(tau_S > 0, errc::domain, "tau_S must be positive");
    require(r > 0, errc::domain, "r must be positive");
    const double lag = tD - t0 - r / constants::c;
    if (sigma_t == 0.0) return lag < 0 ? 0.0 : norm * std::exp(-lag / tau_S);
    return norm * std::exp(-(lag - sigma_t * sigma_t / (2.0 * tau_S)) / tau_S);
}

// Variant that keeps causality inside the production-time integral (the decay
// cannot precede production): closed form times a Gaussian cdf.
inline double free_decay_detection_probability_causal(double tD, double t0, double sigma_t, double r,
                                                      double tau_S, double norm = 1.0)
{
    if (sigma_t == 0.0) return free_decay_detection_probability(tD, t0, 0.0, r, tau_S, norm);
    const double lag = tD - t0 - r / constants::c;
    const double z = (lag - sigma_t * sigma_t / tau_S) / (std::sqrt(2.0) * sigma_t);
    return free_decay_detection_probability(tD, t0, sigma_t, r, tau_S, norm) * 0.5 * std::erfc(-z);
}

}  // namespace pathamp
