#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "core.hpp"
#include "oracle.hpp"

namespace pathamp {

// SO = OM2 = OD = L, OM1 = L + d. Source produced at t = 0.
struct interferometer_spec {
    double L = 0.5;
    double d = 0.125;
    double tau_S = 10e-9;
    double kappa = 2.0 * constants::pi / constants::lambda_NaD;
    double phi12 = 0.0;
    double K = 1.0;
    // unequal arm amplitudes |A1|/L1, |A2|/L2; when unset both equal K
    std::optional<double> K1, K2;

    double L1() const { return 4.0 * L + 2.0 * d; }
    double L2() const { return 4.0 * L; }
};

inline void check_spec(const interferometer_spec& s)
{
    require(s.L > 0 && s.d > 0 && s.tau_S > 0, errc::domain, "interferometer: L, d, tau_S must be positive");
    require(s.kappa > 0, errc::domain, "interferometer: kappa must be positive");
}

// Probability of detection before t_max, three regimes: nothing yet, only the
// short arm, both arms interfering.
inline double detection_probability(const interferometer_spec& s, double t_max)
{
    check_spec(s);
    require(t_max >= 0, errc::domain, "detection probability: t_max must be >= 0");
    const double c = constants::c, tau = s.tau_S;
    const double k1 = s.K1.value_or(s.K), k2 = s.K2.value_or(s.K);
    const double t2 = s.L2() / c, t1 = s.L1() / c;
    if (t_max <= t2) return 0.0;
    const double short_arm = tau * k2 * k2 * -std::expm1(-(t_max - t2) / tau);
    if (t_max <= t1) return short_arm;
    const double w = -std::expm1(-(t_max - t1) / tau);
    const double cross = 2.0 * k1 * k2 * std::exp(-(s.L1() - s.L2()) / (2.0 * c * tau)) *
                         std::cos(s.kappa * (s.L1() - s.L2()) + s.phi12);
    return short_arm + tau * w * (k1 * k1 + cross);
}

// Closed form for equal arm amplitudes K.
inline double detection_probability_compensated(const interferometer_spec& s, double t_max)
{
    check_spec(s);
    require(t_max > s.L1() / constants::c, errc::domain, "compensated form needs both arms open");
    const double x = s.d / (constants::c * s.tau_S);
    const double f = std::exp(-(t_max - 4.0 * s.L / constants::c) / s.tau_S);
    return s.tau_S * s.K * s.K *
           (2.0 - f * (1.0 + std::exp(2.0 * x)) +
            2.0 * (std::exp(-x) - f * std::exp(x)) * std::cos(2.0 * s.kappa * s.d + s.phi12));
}

inline double visibility(const interferometer_spec& s, double t_max)
{
    check_spec(s);
    require(t_max > s.L1() / constants::c, errc::domain, "visibility: no interference before t_max = L1/c",
            {{"t_max", t_max}, {"L1_over_c", s.L1() / constants::c}});
    const double x = s.d / (constants::c * s.tau_S);
    const double f = std::exp(-(t_max - 4.0 * s.L / constants::c) / s.tau_S);
    return 2.0 * (std::exp(-x) - f * std::exp(x)) / (2.0 - f * (1.0 + std::exp(2.0 * x)));
}

inline double visibility_asymptote(double d, double tau_S) { return std::exp(-d / (constants::c * tau_S)); }

inline double pressure_broadening(double tau_nat, double tau_P)
{
    require(tau_nat > 0 && tau_P > 0, errc::domain, "pressure broadening: lifetimes must be positive");
    if (std::isinf(tau_P)) return tau_nat;
    return 1.0 / (1.0 / tau_nat + 1.0 / tau_P);
}

struct linewidth_row {
    double tau_S;
    double tau_P;  // +inf when nothing beyond the natural width is resolvable
    bool resolvable;
    std::string note;
};

// Path difference at 50% visibility -> lifetimes.
inline linewidth_row linewidth_analysis(double delta_exp, double tau_nat)
{
    require(delta_exp > 0 && tau_nat > 0, errc::domain, "linewidth analysis: inputs must be positive");
    linewidth_row r;
    r.tau_S = delta_exp / (2.0 * constants::c * std::log(2.0));
    const double inv = 1.0 / r.tau_S - 1.0 / tau_nat;
    // within rounding of the natural width: no broadening left to resolve
    if (inv <= 1e-12 / r.tau_S) {
        r.tau_P = std::numeric_limits<double>::infinity();
        r.resolvable = false;
        r.note = "no pressure broadening resolvable";
    } else {
        r.tau_P = 1.0 / inv;
        r.resolvable = true;
    }
    return r;
}

// Path difference 2d giving V = 1/2 for a pure natural width.
inline double delta_natural(double tau_nat) { return 2.0 * constants::c * tau_nat * std::log(2.0); }

// (v/c)^2 with v the r.m.s. velocity sqrt(kT/M)
inline double thermal_beta2(double T, double M_kg)
{
    return constants::k_B * T / (M_kg * constants::c * constants::c);
}

inline double rms_velocity(double T, double M_kg) { return std::sqrt(constants::k_B * T / M_kg); }

inline double rayleigh_doppler_visibility(double d, double lambda, double T, double M_kg)
{
    require(d >= 0 && lambda > 0 && T >= 0 && M_kg > 0, errc::domain, "rayleigh: bad inputs");
    const double a = 2.0 * constants::pi * d / lambda;
    return std::exp(-constants::pi * a * a * thermal_beta2(T, M_kg));
}

// Path difference 2d at which the Rayleigh visibility falls to 1/2.
inline double delta_doppler(double lambda, double T, double M_kg)
{
    const double a = std::sqrt(std::log(2.0) / (constants::pi * thermal_beta2(T, M_kg)));
    return 2.0 * a * lambda / (2.0 * constants::pi);
}

struct motion_correction {
    double phase_factor;      // multiplies 2 kappa d
    double relative_shift;    // (3/4)(pbar/Mc)^2
    double damping;           // 1 at this order
    double exact_modulus;     // |(1 + i a)^{-3/2}|
    double exact_phase;       // -(3/2) atan(a)
    bool valid;
};

// Maxwellian source motion; pbar^2 = 2 M k T so (pbar/Mc)^2 = 2kT/(Mc^2).
inline motion_correction source_motion_correction(double kappa, double d, double M_kg, double T)
{
    require(kappa > 0 && d >= 0 && M_kg > 0 && T >= 0, errc::domain, "source motion: bad inputs");
    const double b2 = 2.0 * thermal_beta2(T, M_kg);
    motion_correction m;
    m.relative_shift = 0.75 * b2;
    m.phase_factor = 1.0 - m.relative_shift;
    m.damping = 1.0;
    const double a = kappa * b2 * d;
    m.exact_modulus = std::pow(1.0 + a * a, -0.75);
    m.exact_phase = -1.5 * std::atan(a);
    m.valid = std::sqrt(b2) <= 0.01;
    return m;
}

// Oracle: average of exp(-i kappa p^2 d/M^2) over p^2 exp(-p^2/pbar^2), p in units of pbar.
inline oracle::result<cplx> source_motion_oracle(double kappa, double d, double M_kg, double T)
{
    const double a = kappa * 2.0 * thermal_beta2(T, M_kg) * d;
    auto w = [](double u) { return u * u * std::exp(-u * u); };
    auto ph = [&](double u) { return -a * u * u; };
    return oracle::gaussian_ratio_integral(w, ph, 0.0, 12.0, 1e-13);
}

}  // namespace pathamp
