#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "oracle.hpp"

namespace pathamp {

struct medium_spec {
    double N = 0.0;       // atoms / m^3
    double A_scat = 0.0;  // m
    double thickness = 0.0;
};

inline double refractive_index(double N, double A_scat, double lambda)
{
    require(N >= 0 && A_scat >= 0 && lambda > 0, errc::domain, "refractive_index: inputs must be non-negative");
    return 1.0 + lambda * lambda * N * A_scat / (2.0 * constants::pi);
}

// inverse of refractive_index for A_scat
inline double scattering_amplitude_for_index(double n, double N, double lambda)
{
    require(N > 0 && lambda > 0 && n >= 1, errc::domain, "scattering amplitude: need N > 0, n >= 1");
    return 2.0 * constants::pi * (n - 1.0) / (lambda * lambda * N);
}

struct phase_shift_result {
    double value;         // rad
    bool approximation_ok;  // false once 1 + i dphi ~ exp(i dphi) is no longer good
};

inline phase_shift_result thin_sheet_phase_shift(const medium_spec& m, double kappa)
{
    require(kappa > 0, errc::domain, "thin sheet: kappa must be positive");
    require(m.thickness > 0 && m.N >= 0 && m.A_scat >= 0, errc::domain, "thin sheet: bad medium");
    const double dphi = 2.0 * constants::pi * m.N * m.A_scat * m.thickness / kappa;
    return {dphi, dphi < 0.1};
}

struct velocity_forms {
    double thin_sheet;   // (1-f) + f/n, units of c
    double thick_block;  // 1/(1+(n-1)f)
    double relative_difference;
    std::string regime;
};

inline velocity_forms effective_velocity(double f, double n)
{
    require(f >= 0 && f <= 1, errc::domain, "effective_velocity: f must lie in [0,1]");
    require(n >= 1, errc::domain, "effective_velocity: n must be >= 1");
    velocity_forms v;
    v.thin_sheet = (1.0 - f) + f / n;
    v.thick_block = 1.0 / (1.0 + (n - 1.0) * f);
    v.relative_difference = std::abs(v.thin_sheet - v.thick_block) / v.thick_block;
    // the two agree to first order in (n-1)f; past that only the block form is the series result
    v.regime = (n - 1.0) * f < 1e-2 ? "thin-sheet" : "thick-block";
    return v;
}

// L^n / n!, via lgamma beyond n = 20
inline double nested_volume_integral(int n, double L)
{
    require(n >= 1, errc::domain, "nested volume: order must be >= 1");
    require(L > 0, errc::domain, "nested volume: L must be positive");
    if (n <= 20) {
        double v = 1.0;
        for (int k = 1; k <= n; ++k) v *= L / k;
        return v;
    }
    return std::exp(n * std::log(L) - std::lgamma(n + 1.0));
}

struct series_result {
    cplx value;
    int terms_used;
    int terms_for_1e12;  // first order at which the partial sum is within 1e-12 of exp(i beta L)
};

inline series_result unconstrained_block_amplitude(double betaL, int n_max)
{
    require(n_max >= 1, errc::domain, "block amplitude: n_max must be >= 1");
    require(std::isfinite(betaL) && betaL >= 0, errc::domain, "block amplitude: beta L must be >= 0");
    const cplx target = std::exp(cplx(0, betaL));
    compensated_sum<std::complex<long double>> s;
    std::complex<long double> term = 1.0L;
    int needed = -1;
    for (int k = 0; k <= n_max; ++k) {
        s.add(term);
        if (needed < 0) {
            auto v = s.value();
            if (std::abs(cplx(double(v.real()), double(v.imag())) - target) < 1e-12) needed = k;
        }
        term *= std::complex<long double>(0, betaL) / static_cast<long double>(k + 1);
    }
    auto v = s.value();
    return {cplx(double(v.real()), double(v.imag())), n_max, needed};
}

// sum_{k>=n} z^k/k!; only used with n > |z| where the terms fall monotonically
inline std::complex<long double> exp_tail_ld(int n, std::complex<long double> z)
{
    using C = std::complex<long double>;
    C term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= z / static_cast<long double>(k);
    compensated_sum<C> s;
    for (int k = n; k < n + 4000; ++k) {
        s.add(term);
        if (std::abs(term) < 1e-22L * std::abs(s.value())) break;
        term *= z / static_cast<long double>(k + 1);
    }
    return s.value();
}

// cos x - C_j and sin x - S_m from the same tail (even / odd powers of ix)
inline long double cos_tail_ld(int j, long double x) { return exp_tail_ld(2 * j + 2, {0.0L, x}).real(); }
inline long double sin_tail_ld(int m, long double x) { return exp_tail_ld(2 * m + 1, {0.0L, x}).imag(); }

// Order-n bracket 1 - e^{i dPhi} e_{n-1}(-i dPhi), e_m the truncated exponential.
// The n-fold nested r-integral equals e^{i kappa x_1} (i/kappa)^n times this.
// For n > dPhi it is rewritten as e^{i dPhi} * (tail of e^{-i dPhi}) to dodge the
// cancellation (the bracket is ~ dPhi^n/n! there).
inline std::complex<long double> f_ref_bracket_ld(int n, long double dphi)
{
    require(n >= 1, errc::domain, "f_ref bracket: order must be >= 1");
    using C = std::complex<long double>;
    if (n > dphi) return std::exp(C(0, dphi)) * exp_tail_ld(n, C(0, -dphi));
    compensated_sum<C> e;
    C term = 1.0L;
    const C z(0, -dphi);
    for (int k = 0; k < n; ++k) {
        e.add(term);
        term *= z / static_cast<long double>(k + 1);
    }
    return C(1.0L) - std::exp(C(0, dphi)) * e.value();
}

inline cplx f_ref_bracket(int n, double dphi)
{
    auto b = f_ref_bracket_ld(n, dphi);
    return {double(b.real()), double(b.imag())};
}

struct f_ref_result {
    cplx kernel_form;
    cplx d_form;
    int terms;
    double relative_agreement;
};

inline constexpr double f_ref_max_betaL = 50.0;

// Curly-bracket factor multiplying the vacuum amplitude, summed two ways:
// (a) per-order kernels (i beta L)^n/n! * bracket_n, (b) the real/imaginary split
// with truncated sines and cosines.
inline f_ref_result f_ref(double dphi, double betaL, int n_max = 600)
{
    require(std::isfinite(dphi) && dphi >= 0, errc::domain, "f_ref: dPhi must be >= 0");
    require(std::isfinite(betaL) && betaL >= 0, errc::domain, "f_ref: beta L must be >= 0");
    require(betaL <= f_ref_max_betaL, errc::precondition,
            "f_ref: beta L above 50 cannot be summed in floating point; asymptotic regime "
            "(beta L >> dPhi: phase suppressed, see f_ref_integral)",
            {{"betaL", betaL}, {"limit", f_ref_max_betaL}});
    using LD = long double;
    using C = std::complex<LD>;
    const LD x = dphi, bl = betaL;
    const LD S = std::sin(x), Cs = std::cos(x);

    compensated_sum<C> ka, da;
    ka.add(C(1));
    da.add(C(1));
    C prev_k(1), prev_prev_k(1);
    LD coef = 1;  // (beta L)^n / n!
    C ipow(1);    // i^n
    int used = 0;
    bool converged = false;
    for (int n = 1; n <= n_max; ++n) {
        coef *= bl / n;
        ipow *= C(0, 1);
        const C kt = ipow * coef * f_ref_bracket_ld(n, x);
        ka.add(kt);

        // split form: n = 2m or 2m+1. Past the turning point the combinations
        // 1 - C C_j - S S_m are rebuilt from the tails (C ct + S st) to avoid cancellation.
        const int m = n / 2;
        const LD sign = (m % 2 == 0) ? 1 : -1;
        const bool tails = n > x;
        C dt;
        if (n % 2 == 0) {
            LD re, im;
            if (tails) {
                const LD ct = cos_tail_ld(m - 1, x), st = sin_tail_ld(m, x);
                re = Cs * ct + S * st;
                im = S * ct - Cs * st;
            } else {
                const LD cm1 = trunc_cos<LD>(m - 1, x), sm = trunc_sin<LD>(m, x);
                re = 1 - Cs * cm1 - S * sm;
                im = Cs * sm - S * cm1;
            }
            dt = C(sign * coef * re, sign * coef * im);
        } else {
            LD re, im;
            if (tails) {
                const LD ct = cos_tail_ld(m, x), st = sin_tail_ld(m, x);
                re = Cs * st - S * ct;
                im = Cs * ct + S * st;
            } else {
                const LD cm = trunc_cos<LD>(m, x), sm = trunc_sin<LD>(m, x);
                re = S * cm - Cs * sm;
                im = 1 - Cs * cm - S * sm;
            }
            dt = C(sign * coef * re, sign * coef * im);
        }
        da.add(dt);
        used = n;
        const C partial = ka.value();
        prev_prev_k = prev_k;
        prev_k = partial;
        // terms shrink once n >> beta L; require two quiet orders in a row
        if (n > bl + x && std::abs(kt) < 1e-14L * std::max<LD>(std::abs(partial), 1e-300L) &&
            std::abs(dt) < 1e-14L * std::max<LD>(std::abs(da.value()), 1e-300L)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw error(errc::convergence, "f_ref: series did not converge within n_max",
                    {{"last_re", double(prev_k.real())},
                     {"last_im", double(prev_k.imag())},
                     {"previous_re", double(prev_prev_k.real())},
                     {"previous_im", double(prev_prev_k.imag())}});
    const C a = ka.value(), b = da.value();
    const cplx ac(double(a.real()), double(a.imag())), bc(double(b.real()), double(b.imag()));
    const double agree = std::abs(ac - bc) / std::max(std::abs(ac), 1e-300);
    return {ac, bc, used, agree};
}

// Same factor from the Bessel-kernel integral
//   F = 1 + int_0^dPhi e^{iu} sqrt(bL/u) I_1(2 sqrt(bL u)) du,
// which follows from writing each bracket as a regularised incomplete gamma and
// summing under the integral. Valid for any beta L but the kernel grows like
// exp(2 sqrt(bL dPhi)); limited to bL*dPhi <= 1.2e5 to stay in double range.
inline cplx f_ref_integral(double dphi, double betaL, double rel_tol = 1e-12)
{
    require(dphi >= 0 && betaL >= 0, errc::domain, "f_ref_integral: negative argument");
    require(betaL * dphi <= 1.2e5, errc::precondition, "f_ref_integral: kernel exceeds double range",
            {{"betaL_dPhi", betaL * dphi}});
    if (dphi == 0 || betaL == 0) return {1.0, 0.0};
    auto kernel = [&](double u) -> cplx {
        if (u <= 0) return cplx(betaL, 0.0);
        const double z = 2.0 * std::sqrt(betaL * u);
        return std::exp(cplx(0, u)) * (std::sqrt(betaL / u) * std::cyl_bessel_i(1.0, z));
    };
    const double pieces = std::max(1.0, std::ceil(dphi / 0.5));
    compensated_sum<cplx> s;
    for (int k = 0; k < int(pieces); ++k) {
        const double a = dphi * k / pieces, b = dphi * (k + 1) / pieces;
        s.add(oracle::integrate(kernel, a, b, 0.0, rel_tol).value);
    }
    return cplx(1.0, 0.0) + s.value();
}

// Phase of F followed continuously from dPhi = 0 (where F = 1).
inline double f_ref_unwrapped_phase(double dphi, double betaL, double step = 0.05)
{
    require(dphi >= 0 && step > 0, errc::domain, "f_ref phase: bad arguments");
    const int n = std::max(1, int(std::ceil(dphi / step)));
    double unwrapped = 0.0, last = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double ph = phase(f_ref_integral(dphi * k / n, betaL));
        unwrapped += wrap_phase(ph - last);
        last = ph;
    }
    return unwrapped;
}

// F = exp(i beta L) + upper-limit part; the upper-limit part is what a
// geometric boundary averages away.
inline cplx f_ref_upper_limit_part(double dphi, double betaL)
{
    return f_ref(dphi, betaL).kernel_form - std::exp(cplx(0, betaL));
}

struct annulment_report {
    double ds_max;          // m
    double dphi_max;        // rad
    double periods;
    double betaL;
    double prompt_time;     // s
    double prompt_fraction;
    double prompt_fraction_linear;
    std::string regime;
};

inline annulment_report annulment_analysis(double R, double l, double lambda, double L, double n, double tau_S)
{
    require(R > 0 && l > 0 && lambda > 0 && L > 0 && tau_S > 0, errc::domain, "annulment: inputs must be positive");
    require(n >= 1, errc::domain, "annulment: n must be >= 1");
    require(R < 0.5 * l, errc::precondition, "annulment: geometry needs R << l");
    annulment_report a;
    a.ds_max = R * R / (2.0 * l);
    a.dphi_max = 2.0 * constants::pi * a.ds_max / lambda;
    a.periods = a.ds_max / lambda;
    a.betaL = 2.0 * constants::pi * (n - 1.0) * L / lambda;
    a.prompt_time = a.ds_max / constants::c;
    a.prompt_fraction = -std::expm1(-a.prompt_time / tau_S);
    a.prompt_fraction_linear = a.prompt_time / tau_S;
    if (a.betaL > 10.0 * a.dphi_max && a.dphi_max > 1.0)
        a.regime = "annulment (beta L >> dPhi_max >> 1)";
    else if (a.dphi_max > 10.0 * a.betaL)
        a.regime = "boundary-limited";
    else
        a.regime = "intermediate";
    return a;
}

// ---- transverse boundaries ----

struct rectangular_boundary {
    double LY, LZ, Y, Z;
};
struct circular_boundary {
    double RB, Y;
};
struct infinite_boundary {};
using boundary_spec = std::variant<rectangular_boundary, circular_boundary, infinite_boundary>;

struct corner_angles {
    double Phi1, Phi2, Phi3, Phi4;  // anticlockwise from OZ, in [0, 2 pi)
};

inline corner_angles rectangle_corners(const rectangular_boundary& b)
{
    auto ang = [](double y, double z) {
        double a = std::atan2(y, z);
        return a < 0 ? a + 2.0 * constants::pi : a;
    };
    return {ang(b.LY / 2 - b.Y, b.LZ / 2 - b.Z), ang(b.LY / 2 - b.Y, -(b.LZ / 2 + b.Z)),
            ang(-(b.LY / 2 + b.Y), -(b.LZ / 2 + b.Z)), ang(-(b.LY / 2 + b.Y), b.LZ / 2 - b.Z)};
}

// Upper limit of r_1 for a boundary point at azimuth phi1 (small-angle form).
inline double r1_max_boundary(const boundary_spec& boundary, double x1, double phi1)
{
    require(x1 > 0, errc::domain, "r1_max: boundary point behind the x1 plane (x1 <= 0)");
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, infinite_boundary>) {
                return INFINITY;
            } else if constexpr (std::is_same_v<T, circular_boundary>) {
                require(b.RB > 0 && std::abs(b.Y) <= b.RB, errc::domain, "r1_max: need R_B > 0 and |Y| <= R_B");
                if (b.Y == 0) return x1 + b.RB * b.RB / (2.0 * x1);
                const double c = std::cos(phi1), s = std::sin(phi1);
                const double R1 = std::sqrt(b.RB * b.RB - b.Y * b.Y * c * c) - b.Y * s;
                return x1 + R1 * R1 / (2.0 * x1);
            } else {
                require(b.LY > 0 && b.LZ > 0, errc::domain, "r1_max: rectangle sides must be positive");
                require(std::abs(b.Y) < b.LY / 2 && std::abs(b.Z) < b.LZ / 2, errc::domain,
                        "r1_max: axis must cross the plane inside the rectangle");
                const auto k = rectangle_corners(b);
                double p = std::fmod(phi1, 2.0 * constants::pi);
                if (p < 0) p += 2.0 * constants::pi;
                const double c = std::cos(p), s = std::sin(p);
                double side;
                if (p >= k.Phi1 && p < k.Phi2)
                    side = (b.LY / 2 - b.Y) / s;
                else if (p >= k.Phi2 && p < k.Phi3)
                    side = -(b.LZ / 2 + b.Z) / c;
                else if (p >= k.Phi3 && p < k.Phi4)
                    side = -(b.LY / 2 + b.Y) / s;
                else
                    side = (b.LZ / 2 - b.Z) / c;
                return x1 + side * side / (2.0 * x1);
            }
        },
        boundary);
}

// I_U = - int_0^{2pi} exp(i kappa r1_max(phi1)) dphi1, with the constant
// exp(i kappa x1) taken out (only relative phase matters for the cancellation).
inline oracle::result<cplx> upper_limit_integral(const boundary_spec& boundary, double x1, double kappa,
                                                  double rel_tol = 1e-8)
{
    require(!std::holds_alternative<infinite_boundary>(boundary), errc::domain,
            "upper-limit integral needs a finite boundary");
    auto f = [&](double p) { return -std::exp(cplx(0, kappa * (r1_max_boundary(boundary, x1, p) - x1))); };
    // break at the corners so the panels never straddle a kink
    std::vector<double> cuts{0.0, 2.0 * constants::pi};
    if (auto r = std::get_if<rectangular_boundary>(&boundary)) {
        auto k = rectangle_corners(*r);
        cuts.insert(cuts.end(), {k.Phi1, k.Phi2, k.Phi3, k.Phi4});
    }
    std::sort(cuts.begin(), cuts.end());
    oracle::result<cplx> out;
    compensated_sum<cplx> s;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        auto seg = oracle::integrate(f, cuts[i], cuts[i + 1], 1e-12, rel_tol, 40'000'000);
        s.add(seg.value);
        out.error += seg.error;
        out.evaluations += seg.evaluations;
    }
    out.value = s.value();
    return out;
}

}  // namespace pathamp
