#include <catch_amalgamated.hpp>

#include <cmath>

#include "pathamp/flavour.hpp"

using namespace pathamp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("two amplitudes: constructive and destructive", "[flavour]")
{
    const cplx A(0.3, -0.4);
    CHECK_THAT(combine_two_amplitudes(A, A).total, WithinRel(4 * std::norm(A), 1e-15));
    CHECK_THAT(combine_two_amplitudes(A, -A).total, WithinAbs(0.0, 1e-16));
    auto t = combine_two_amplitudes(A, cplx(0.1, 0.7));
    CHECK_THAT(t.a2 + t.b2 + t.interference, WithinRel(t.total, 1e-14));
}

TEST_CASE("photon double slit: spacing, central maximum, damping", "[flavour]")
{
    ydse_geometry g;
    g.l = 0.10;
    g.d = 0.9e-3;
    g.h = 0.2e-3;
    CHECK_THAT(ydse_fringe_spacing(g, 5893e-10), WithinAbs(29e-6, 0.5e-6));
    const double k = 2 * constants::pi / 5893e-10;
    auto p0 = ydse_photon(g, k, 16e-9, 0.0);
    CHECK_THAT(p0.probability, WithinRel(4 * 16e-9, 1e-15));
    CHECK(p0.damping == 1.0);
    auto half = ydse_photon(g, k, 16e-9, p0.fringe_spacing / 2);
    CHECK(half.probability < 1e-6 * p0.probability);
    CHECK_THAT(ydse_photon_damping_per_fringe(5893e-10, 5.4e-9), WithinRel(1.82e-7, 1e-2));
}

TEST_CASE("electron phase difference: de Broglie and equal velocities", "[flavour]")
{
    electron_beam b;
    b.p = 0.05;
    b.sigma_p = 1e-8;
    const double lam = b.de_broglie();
    CHECK_THAT(electron_phase_difference(b, 1.0, lam, 2 * lam, electron_mode::equal_times),
               WithinRel(2 * constants::pi, 1e-9));
    // non-relativistic: equal-velocity phase is larger by (m/p)^2 and of opposite sign
    const double ev = electron_phase_difference(b, 1.0, lam, 2 * lam, electron_mode::equal_velocities);
    CHECK_THAT(ev / (2 * constants::pi), WithinRel(-std::pow(b.m / b.p, 2), 1e-9));
    electron_beam ur;
    ur.p = 5e3;
    const double lam2 = ur.de_broglie();
    CHECK(std::abs(electron_phase_difference(ur, 1.0, 0.1, 0.1 + lam2, electron_mode::equal_velocities)) <
          1e-7 * 2 * constants::pi);
}

TEST_CASE("electron double slit: damping arguments from the beam inputs", "[flavour]")
{
    electron_beam b;  // 229 MeV/c, sigma/p = 6e-7
    auto d = electron_damping_per_fringe(b, 2.0);
    CHECK_THAT(d.width_term, WithinRel(1.885e-6, 1e-3));
    CHECK_THAT(d.dp_over_2sigma, WithinRel(4.53e-4, 1e-2));
    CHECK_THAT(d.dp_over_2sigma_nohalf, WithinRel(2 * d.dp_over_2sigma, 1e-15));
}

TEST_CASE("electron double slit needs a momentum spread", "[flavour]")
{
    electron_beam b;
    b.sigma_p = 0.0;
    CHECK_THROWS_AS(ydse_electron(ydse_geometry{}, b, 1e-6), error);
    b.sigma_p = 1e-30;
    ydse_geometry g;
    auto r = ydse_electron(g, b, 1e-4);
    CHECK(r.damping_dp > 1e10);
}

TEST_CASE("gaussian interference integral: normalisation and first damping", "[flavour]")
{
    const double s = 0.01;
    auto z = gaussian_interference_integral(s, 1.0, 0.0, 0.0);
    CHECK_THAT(z.real(), WithinRel(1 / (std::sqrt(constants::pi) * s), 1e-15));
    CHECK(z.imag() == 0.0);
    auto w = gaussian_interference_integral(s, 1.0, 0.0, 2 * s);
    CHECK_THAT(std::abs(w) / std::abs(z), WithinRel(std::exp(-1.0), 1e-14));
}

TEST_CASE("kaon: production values and oscillation period", "[flavour]")
{
    kaon_system k;
    CHECK_THAT(kaon_detection_probability(k, lepton_charge::positive, 0.0), WithinRel(4.0, 1e-15));
    CHECK(kaon_detection_probability(k, lepton_charge::negative, 0.0) == 0.0);
    CHECK_THAT(kaon_oscillation_period(k), WithinRel(1.19e-9, 5e-3));
    const double L = 3.0;
    CHECK_THAT(kaon_lab_phase(k, L), WithinRel(k.dm() * kaon_proper_time(k, L) / constants::hbar_MeVs, 1e-14));
    const double dm2 = 2 * k.m_bar() * k.dm();
    CHECK_THAT(kaon_lab_phase(k, L), WithinRel(dm2 * L / (2 * k.p * constants::hbar_c_MeVm), 1e-14));
}

TEST_CASE("kaon equal-velocity report", "[flavour]")
{
    kaon_system k;
    auto r = kaon_equal_velocity_report(k);
    CHECK_THAT(r.dp_over_p, WithinRel(1.8e-14, 1e-2));
    CHECK(r.dp_rad_over_p == 4.2e-2);
    CHECK_THAT(kaon_dt_SL(k, 10.0) / kaon_dt_SL(k, 1000.0), WithinRel(2.24, 1e-2));
    CHECK_THAT(kaon_dt_SL(k, 10.0), WithinRel(6.27e-25, 1e-2));
}

TEST_CASE("neutrinos from pion decay at rest", "[flavour]")
{
    neutrino_experiment e;
    auto r = neutrino_oscillation(e);
    CHECK_THAT(r.p0, WithinRel(29.79, 1e-3));
    CHECK_THAT(r.phi_path / r.phi_standard, WithinRel(constants::m_pi / r.p0 - 2, 1e-12));
    CHECK_THAT(r.phi_path / r.phi_standard, WithinRel(2.685, 1e-3));
    CHECK_THAT(r.phi_path, WithinRel(2 * r.phi_compact, 1e-12));
    CHECK_THAT(neutrino_L_pi(e) * e.dm2, WithinRel(13.8, 1e-2));
    CHECK_THAT(r.L_osc_standard, WithinRel(2 * constants::pi * e.L / r.phi_standard, 1e-12));
    CHECK_THAT(r.L_osc_path, WithinRel(2 * constants::pi * e.L / r.phi_compact, 1e-12));
}

TEST_CASE("neutrino production-time difference", "[flavour]")
{
    neutrino_experiment e;
    e.L = neutrino_L_pi(e);
    auto r = neutrino_oscillation(e);
    CHECK_THAT(r.dt_21, WithinRel(2.59e-23, 2e-3));
    CHECK_THAT(r.dt_21, WithinRel(neutrino_dt21_closed(e), 1e-12));
    CHECK_THAT(neutrino_dt21_mass_form(e), WithinRel(r.dt_21, 1e-12));
}

TEST_CASE("neutrino: forbidden decay and beta mode", "[flavour]")
{
    neutrino_experiment e;
    e.m_R = e.m_S;
    try {
        neutrino_oscillation(e);
        FAIL("expected forbidden-decay error");
    } catch (const error& x) {
        CHECK(x.code() == errc::domain);
    }
    neutrino_experiment b;
    b.mode = neutrino_mode::beta_decay;
    b.E_beta = 3.0;
    b.p_nu = 1.0;
    auto r = neutrino_oscillation(b);
    CHECK_THAT(r.phi_path, WithinRel(b.dm2 * 1e-12 / 1.0 * 0.5 * b.L / constants::hbar_c_MeVm, 1e-12));
}

TEST_CASE("oscillation length ratios", "[flavour]")
{
    neutrino_experiment pi, k;
    k.m_S = constants::m_K;
    CHECK_THAT(k.p0(), WithinRel(235.5, 1e-3));
    CHECK_THAT(oscillation_length_ratio(k, pi), WithinAbs(28.0, 0.1));
    CHECK(oscillation_length_ratio(pi, pi) == 1.0);
}

TEST_CASE("classification table", "[flavour]")
{
    const auto& ph = classify_experiment(experiment_kind::photon_ydse);
    CHECK_FALSE(ph.dr_zero);
    CHECK_FALSE(ph.dt_zero);
    CHECK(ph.dv_zero);
    CHECK_FALSE(ph.dphi_source_zero);
    CHECK(ph.dphi_particle_zero);
    CHECK(lambda_ratio(experiment_kind::photon_ydse) == 1.0);
    const auto& nu = classify_experiment(experiment_kind::neutrino);
    CHECK(nu.dr_zero);
    CHECK_FALSE(nu.dt_zero);
    CHECK_FALSE(nu.dv_zero);
    CHECK_FALSE(nu.dphi_source_zero);
    CHECK_FALSE(nu.dphi_particle_zero);
    CHECK_THAT(lambda_ratio(experiment_kind::kaon, 100.0, 500.0), WithinRel(0.08, 1e-14));
    CHECK(classify_experiment(experiment_kind::kaon).lambda_ratio_formula == "2*(pbar/(m_S*c))^2");
}
