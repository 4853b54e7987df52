#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "core.hpp"
#include "oracle.hpp"

// Energies, masses and momenta in MeV (c = 1 for those), lengths in m, times in s.
// Phases use hbar*c in MeV m.
namespace pathamp {

struct two_amplitude_terms {
    double total;
    double a2;
    double b2;
    double interference;  // 2|A||B| cos(phi_B - phi_A)
};

inline two_amplitude_terms combine_two_amplitudes(cplx A, cplx B)
{
    two_amplitude_terms t;
    t.a2 = std::norm(A);
    t.b2 = std::norm(B);
    t.interference = 2.0 * std::abs(A) * std::abs(B) * std::cos(std::arg(B) - std::arg(A));
    t.total = std::norm(A + B);
    return t;
}

// ---- Young double slit ----

// Slit half-separation d, slit height h, distance l from the slits to the
// detector plane, r_prime from the source to the slits.
struct ydse_geometry {
    double l = 0.1;
    double r_prime = 1.0;
    double d = 0.9e-3;
    double h = 0.2e-3;
    double w = 1e-3;

    double arm() const { return d + h / 2; }
    double delta_r(double y) const { return 2.0 * arm() * y / l; }
};

inline void check_geometry(const ydse_geometry& g)
{
    require(g.l > 0 && g.r_prime > 0 && g.d > 0 && g.h > 0 && g.w > 0, errc::domain,
            "ydse: lengths must be positive");
}

struct ydse_photon_result {
    double probability;   // in units of |A0|^2 (s)
    double damping;       // exp[-(d + h/2) y/(c tau l)]
    double fringe_spacing;
};

inline double ydse_fringe_spacing(const ydse_geometry& g, double lambda)
{
    check_geometry(g);
    require(lambda > 0, errc::domain, "ydse: wavelength must be positive");
    return lambda * g.l / (2.0 * g.arm());
}

inline ydse_photon_result ydse_photon(const ydse_geometry& g, double kappa, double tau_S, double y)
{
    check_geometry(g);
    require(kappa > 0 && tau_S > 0, errc::domain, "ydse photon: kappa and tau must be positive");
    ydse_photon_result r;
    r.damping = std::exp(-g.arm() * y / (constants::c * tau_S * g.l));
    r.probability = 2.0 * tau_S * (1.0 + r.damping * std::cos(kappa * g.delta_r(y)));
    r.fringe_spacing = ydse_fringe_spacing(g, 2.0 * constants::pi / kappa);
    return r;
}

// Damping exponent of the photon fringe term at the n-th fringe.
inline double ydse_photon_damping_per_fringe(double lambda, double tau_S)
{
    return lambda / (2.0 * constants::c * tau_S);
}

struct electron_beam {
    double p = 229.0;  // mean momentum
    double sigma_p = 229.0 * 6e-7;
    double m = constants::m_e;

    double energy() const { return std::hypot(p, m); }
    double gamma() const { return energy() / m; }
    double de_broglie() const { return constants::h_MeVs * constants::c / p; }
};

inline void check_beam(const electron_beam& b)
{
    require(b.p > 0 && b.m > 0, errc::domain, "electron beam: p and m must be positive");
    require(b.sigma_p > 0, errc::domain, "electron beam: interference needs a non-zero momentum spread");
}

enum class electron_mode { equal_times, equal_velocities };

// First-order phase difference phi_B - phi_A for paths r' + r_A and r' + r_B.
inline double electron_phase_difference(const electron_beam& b, double r_prime, double r_A, double r_B,
                                        electron_mode mode)
{
    require(b.p > 0 && b.m > 0 && r_prime > 0 && r_A > 0 && r_B > 0, errc::domain,
            "electron phase: inputs must be positive");
    const double dr = r_B - r_A;
    if (mode == electron_mode::equal_times) return b.p * dr / constants::hbar_c_MeVm;
    return -b.m * b.m * dr / (b.p * constants::hbar_c_MeVm);
}

struct electron_exact {
    double phase;   // rad
    double t;       // common time of flight, s
    double p_A, p_B;
};

// No expansion in dr: both paths take the same time t; t is fixed so that the
// mean of the two momenta is the beam momentum. Phase of a path is
// -(m c)^2 r/(p hbar) = -m c^2 t/(gamma hbar), so the difference only needs
// 1/gamma_A - 1/gamma_B, written to avoid cancellation.
inline electron_exact electron_phase_exact(const electron_beam& b, double r_prime, double r_A, double r_B)
{
    require(b.p > 0 && b.m > 0 && r_prime > 0 && r_A > 0 && r_B > 0, errc::domain,
            "electron exact phase: inputs must be positive");
    using LD = long double;
    const LD c = constants::c;
    const LD sA = LD(r_prime) + r_A, sB = LD(r_prime) + r_B;
    auto mom = [&](LD s, LD t) {
        const LD be = s / (c * t);
        return LD(b.m) * be / std::sqrt((1 - be) * (1 + be));
    };
    LD lo = std::max(sA, sB) / c * (1 + 1e-15L), hi = lo;
    while ((mom(sA, hi) + mom(sB, hi)) / 2 > b.p) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        const LD mid = (lo + hi) / 2;
        if ((mom(sA, mid) + mom(sB, mid)) / 2 > b.p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-19L * hi) break;
    }
    const LD t = (lo + hi) / 2;
    const LD bA = sA / (c * t), bB = sB / (c * t);
    const LD iA = std::sqrt((1 - bA) * (1 + bA)), iB = std::sqrt((1 - bB) * (1 + bB));
    const LD diff = (bB - bA) * (bB + bA) / (iA + iB);  // 1/gamma_A - 1/gamma_B
    const LD phase = LD(b.m) * c * t * diff / LD(constants::hbar_c_MeVm);
    return {double(phase), double(t), double(mom(sA, t)), double(mom(sB, t))};
}

// Momentum difference needed for equal production times, first order in dr.
inline double electron_delta_p(const electron_beam& b, double dr, double path_mean)
{
    const double g = b.gamma();
    return b.p * g * g * dr / path_mean;
}

// Completed-square value of the interference integral (|A0|^2 = 1):
// (1/(sqrt(pi) s)) exp[-(dp/2s)^2] exp[-(s dr/2hbar)^2] exp[-i p dr/hbar]
inline cplx gaussian_interference_integral(double sigma_p, double p_mean, double dr, double dp)
{
    require(sigma_p > 0, errc::domain, "gaussian interference: sigma_p must be positive");
    const double hc = constants::hbar_c_MeVm;
    const double a = dp / (2.0 * sigma_p), b = sigma_p * dr / (2.0 * hc);
    return std::polar(std::exp(-a * a - b * b) / (std::sqrt(constants::pi) * sigma_p),
                      std::fmod(-p_mean * dr / hc, 2.0 * constants::pi));
}

// Same quantity by direct quadrature over p_A, the delta function already used.
inline oracle::result<cplx> gaussian_interference_oracle(double sigma_p, double p_mean, double dr, double dp)
{
    const double hc = constants::hbar_c_MeVm;
    const double base = std::fmod(-p_mean * dr / hc, 2.0 * constants::pi);
    auto f = [&](double pA) {
        const double u = pA - p_mean;
        const double e = -(u * u + (u + dp) * (u + dp)) / (2.0 * sigma_p * sigma_p);
        // phase relative to -p_mean dr/hbar so the integrand stays well scaled
        return std::polar(std::exp(e) / (constants::pi * sigma_p * sigma_p), base - (u + dp / 2) * dr / hc);
    };
    const double c0 = p_mean - dp / 2;
    return oracle::integrate(f, c0 - 10 * sigma_p, c0 + 10 * sigma_p, 0.0, 1e-12);
}

struct ydse_electron_result {
    double probability;     // units of |A0|^2
    double damping_dp;      // dp/(2 sigma_p)
    double damping_width;   // sigma_p dr/(2 hbar)
    double fringe_spacing;
};

inline ydse_electron_result ydse_electron(const ydse_geometry& g, const electron_beam& b, double y)
{
    check_geometry(g);
    check_beam(b);
    const double dr = g.delta_r(y);
    ydse_electron_result r;
    r.damping_dp = electron_delta_p(b, dr, g.r_prime + g.l) / (2.0 * b.sigma_p);
    r.damping_width = b.sigma_p * dr / (2.0 * constants::hbar_c_MeVm);
    const double damp = std::exp(-(r.damping_dp * r.damping_dp + r.damping_width * r.damping_width));
    r.probability = (1.0 + damp * std::cos(b.p * dr / constants::hbar_c_MeVm)) /
                    (std::sqrt(constants::pi) * b.sigma_p);
    r.fringe_spacing = ydse_fringe_spacing(g, b.de_broglie());
    return r;
}

// Damping arguments per fringe (dr = n lambda_DB), for a total path length path.
struct electron_fringe_damping {
    double dp_over_2sigma;        // gamma^2 h/(2 sigma (r' + r))
    double dp_over_2sigma_nohalf; // the same without the 1/2, as some write it
    double width_term;            // pi sigma/p
};

inline electron_fringe_damping electron_damping_per_fringe(const electron_beam& b, double path)
{
    check_beam(b);
    require(path > 0, errc::domain, "electron damping: path must be positive");
    const double g2 = b.gamma() * b.gamma();
    const double hc = constants::h_MeVs * constants::c;
    const double full = g2 * hc / (b.sigma_p * path);
    return {full / 2.0, full, constants::pi * b.sigma_p / b.p};
}

// Four equivalent forms of the propagator phase magnitude for mass m, speed beta.
struct phase_forms {
    double proper_time;  // m c^2 tau/hbar
    double lab_time;     // m c^2 t/(gamma hbar)
    double energy_velocity;  // (m c^2)^2 r/(E v hbar)
    double momentum;     // (m c)^2 r/(p hbar)
};

inline phase_forms propagator_phase_forms(double m, double beta, double r)
{
    require(m > 0 && beta > 0 && beta < 1 && r > 0, errc::domain, "phase forms: need m > 0, 0 < beta < 1, r > 0");
    const double g = 1.0 / std::sqrt((1 - beta) * (1 + beta));
    const double t = r / (beta * constants::c);
    const double tau = t / g;
    const double E = g * m, p = g * m * beta, v = beta * constants::c;
    const double hb = constants::hbar_MeVs;
    return {m * tau / hb, m * t / (g * hb), m * m * r / (E * v * hb), m * m * r / (p * constants::hbar_c_MeVm)};
}

// ---- neutral kaons ----

struct kaon_system {
    // mean mass and splitting kept apart: m_L - m_S would lose most of its digits
    double m = constants::m_K0;
    double delta_m = constants::dm_LS;
    double Gamma_S = constants::hbar_MeVs / constants::tau_KS;
    double Gamma_L = constants::hbar_MeVs / constants::tau_KL;
    double p = 194.0;

    double m_bar() const { return m; }
    double dm() const { return delta_m; }
};

inline void check_kaon(const kaon_system& k)
{
    require(k.delta_m > 0 && k.m > k.delta_m, errc::domain, "kaon: need m > delta_m > 0");
    require(k.Gamma_S > k.Gamma_L && k.Gamma_L > 0, errc::domain, "kaon: need Gamma_S > Gamma_L > 0");
}

enum class lepton_charge { positive, negative };

// Proper-time form, |A|^2 = 1.
inline double kaon_detection_probability(const kaon_system& k, lepton_charge q, double tau)
{
    check_kaon(k);
    require(tau >= 0, errc::domain, "kaon: proper time must be >= 0");
    const double hb = constants::hbar_MeVs;
    const double s = q == lepton_charge::positive ? 1.0 : -1.0;
    return std::exp(-k.Gamma_S * tau / hb) + std::exp(-k.Gamma_L * tau / hb) +
           s * 2.0 * std::exp(-(k.Gamma_S + k.Gamma_L) * tau / (2.0 * hb)) * std::cos(k.dm() * tau / hb);
}

inline double kaon_proper_time(const kaon_system& k, double L)
{
    require(L >= 0 && k.p > 0, errc::domain, "kaon: need L >= 0 and p > 0");
    return k.m_bar() * L / (k.p * constants::c);
}

inline double kaon_detection_probability_at(const kaon_system& k, lepton_charge q, double L)
{
    return kaon_detection_probability(k, q, kaon_proper_time(k, L));
}

inline double kaon_oscillation_period(const kaon_system& k) { return constants::h_MeVs / k.dm(); }

// Interference phase in lab variables, m_bar dm L/(hbar p).
inline double kaon_lab_phase(const kaon_system& k, double L)
{
    return k.m_bar() * k.dm() * L / (k.p * constants::hbar_c_MeVm);
}

inline constexpr double kaon_radiative_smearing = 4.2e-2;  // reference experiment value

struct kaon_velocity_report {
    double dp_over_p;
    double dp_rad_over_p;
    double dt_SL;  // s
    double E_bar;
};

inline double kaon_dt_SL(const kaon_system& k, double p, double tau_S = constants::tau_KS)
{
    const double E = std::hypot(k.m_bar(), p);
    return k.dm() * tau_S / E;
}

inline kaon_velocity_report kaon_equal_velocity_report(const kaon_system& k)
{
    check_kaon(k);
    require(k.p > 0, errc::domain, "kaon report: p must be positive");
    return {k.dm() / k.p, kaon_radiative_smearing, kaon_dt_SL(k, k.p), std::hypot(k.m_bar(), k.p)};
}

// ---- neutrinos ----

enum class neutrino_mode { two_body, beta_decay };

struct neutrino_experiment {
    double m_S = constants::m_pi;
    double Gamma_S = constants::hbar_MeVs / constants::tau_pi;
    double m_R = constants::m_mu;
    double dm2 = 2e-3;  // eV^2
    double theta = constants::pi / 4;
    double L = 1000.0;
    neutrino_mode mode = neutrino_mode::two_body;
    double E_beta = 0.0;  // beta-decay mode only
    double p_nu = 0.0;

    double R() const { return m_R / m_S; }
    double p0() const { return (m_S * m_S - m_R * m_R) / (2.0 * m_S); }
    double dm2_MeV2() const { return dm2 * 1e-12; }
};

inline void check_neutrino(const neutrino_experiment& e)
{
    require(e.m_S > 0 && e.Gamma_S > 0, errc::domain, "neutrino: source mass and width must be positive");
    require(e.m_R >= 0 && e.m_R < e.m_S, errc::domain, "neutrino: kinematically forbidden decay (R_m >= 1)",
            {{"R_m", e.m_S > 0 ? e.m_R / e.m_S : INFINITY}});
    require(e.dm2 > 0, errc::domain, "neutrino: dm2 must be positive");
    require(e.L >= 0, errc::domain, "neutrino: L must be >= 0");
    if (e.mode == neutrino_mode::beta_decay)
        require(e.p_nu > 0 && e.E_beta > 0, errc::domain, "neutrino: beta mode needs E_beta and p_nu");
}

struct neutrino_result {
    double p0;
    double phi_path;      // from the propagator chain
    double phi_compact;   // compact generalised form, half of phi_path
    double phi_standard;
    double damping;       // exp[-Gamma c dm2 L/(4 hbar p0^2)]
    double P_emu;         // sin^2 cos^2 {1 - damping cos phi_path}, reduced units
    double L_osc_path;    // 2 pi L / phi_compact
    double L_osc_chain;   // 2 pi L / phi_path
    double L_osc_standard;
    double dt_21;         // s
};

inline double neutrino_phase_path(const neutrino_experiment& e)
{
    const double hc = constants::hbar_c_MeVm;
    if (e.mode == neutrino_mode::beta_decay)
        return e.dm2_MeV2() / e.p_nu * (e.E_beta / (2.0 * e.p_nu) - 1.0) * e.L / hc;
    const double p0 = e.p0();
    return e.dm2_MeV2() / p0 * (e.m_S / (2.0 * p0) - 1.0) * e.L / hc;
}

inline neutrino_result neutrino_oscillation(const neutrino_experiment& e)
{
    check_neutrino(e);
    const double hc = constants::hbar_c_MeVm;
    const double dm2 = e.dm2_MeV2();
    neutrino_result r;
    r.p0 = e.p0();
    const double R = e.R();
    r.phi_path = neutrino_phase_path(e);
    r.phi_compact = dm2 / e.m_S * std::pow(R / (1.0 - R * R), 2) * e.L / hc;
    r.phi_standard = dm2 * e.L / (2.0 * r.p0 * hc);
    r.damping = std::exp(-e.Gamma_S * dm2 * e.L / (4.0 * hc * r.p0 * r.p0));
    const double sc = std::sin(e.theta) * std::cos(e.theta);
    r.P_emu = sc * sc * (1.0 - r.damping * std::cos(r.phi_path));
    const double h = 2.0 * constants::pi * hc;
    r.L_osc_path = e.m_S * h / dm2 * std::pow((1.0 - R * R) / R, 2);
    r.L_osc_chain = r.L_osc_path / 2.0;
    r.L_osc_standard = 2.0 * r.p0 * h / dm2;
    r.dt_21 = e.L / constants::c * dm2 / (2.0 * r.p0 * r.p0);
    return r;
}

// Distance where the path phase reaches pi, and its dm2-independent product.
inline double neutrino_L_pi(const neutrino_experiment& e)
{
    check_neutrino(e);
    neutrino_experiment unit = e;
    unit.L = 1.0;
    return constants::pi / neutrino_phase_path(unit);
}

// Damping exponent when dm2 L/(p0 hbar) is set to one: Gamma/(4 p0).
inline double neutrino_unit_phase_damping(const neutrino_experiment& e)
{
    check_neutrino(e);
    return e.Gamma_S / (4.0 * e.p0());
}

// Production-time difference written through the source mass, h/(4(m_S/2 - p0)).
inline double neutrino_dt21_mass_form(const neutrino_experiment& e)
{
    check_neutrino(e);
    return constants::h_MeVs / (4.0 * (e.m_S / 2.0 - e.p0()));
}

inline double neutrino_dt21_closed(const neutrino_experiment& e)
{
    const double R = e.R();
    return constants::h_MeVs / (2.0 * e.m_S * R * R);
}

// Same-neutrino-momentum comparison of path-amplitude oscillation lengths.
inline double oscillation_length_ratio(const neutrino_experiment& a, const neutrino_experiment& b)
{
    check_neutrino(a);
    check_neutrino(b);
    auto k = [](const neutrino_experiment& e) {
        const double R = e.R();
        return e.m_S * std::pow((1.0 - R * R) / R, 2) / e.p0();
    };
    return k(a) / k(b);
}

inline double neutrino_equal_velocity_smearing(double dm2_eV2, double m_bar_eV)
{
    require(m_bar_eV > 0, errc::domain, "mean neutrino mass must be positive");
    return dm2_eV2 / (2.0 * m_bar_eV * m_bar_eV);
}

inline constexpr double pion_radiative_smearing = 3.5e-4;

// ---- classification ----

enum class experiment_kind { photon_ydse, electron_ydse, kaon, neutrino };

struct comparison_row {
    std::string_view name;
    // answers to "is the difference zero?" for path length, time of flight,
    // velocity, source phase, particle phase
    bool dr_zero, dt_zero, dv_zero, dphi_source_zero, dphi_particle_zero;
    std::string_view phase_formula;
    std::string_view lambda_ratio_formula;
};

inline const comparison_row& classify_experiment(experiment_kind k)
{
    static const std::array<comparison_row, 4> rows{{
        {"photon-ydse", false, false, true, false, true, "-pbar*dr", "1"},
        {"electron-ydse", false, true, false, true, false, "-pbar*dr", "1"},
        {"kaon", true, true, true, true, false, "-dm2_LS*c^2*L/(2*pbar)", "2*(pbar/(m_S*c))^2"},
        {"neutrino", true, false, false, false, false, "-dm2_12*c/m_S*(R_m/(1-R_m^2))^2*L",
         "(pbar/(m_S*c))*((1-R_m^2)/R_m)^2"},
    }};
    return rows[static_cast<std::size_t>(k)];
}

// lambda_eff/lambda_DB evaluated; pbar and m_S in MeV, R_m dimensionless
inline double lambda_ratio(experiment_kind k, double pbar = 0.0, double m_S = 1.0, double R_m = 0.5)
{
    switch (k) {
    case experiment_kind::photon_ydse:
    case experiment_kind::electron_ydse: return 1.0;
    case experiment_kind::kaon: return 2.0 * (pbar / m_S) * (pbar / m_S);
    case experiment_kind::neutrino: return pbar / m_S * std::pow((1.0 - R_m * R_m) / R_m, 2);
    }
    return NAN;
}

}  // namespace pathamp
