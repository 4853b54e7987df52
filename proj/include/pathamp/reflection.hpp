#pragma once

#include <cmath>
#include <optional>

#include "core.hpp"
#include "oracle.hpp"

namespace pathamp {

struct reflection_setup {
    double n1 = 1.0;
    double n2 = 1.5;
    std::optional<double> film_thickness;
    double T_HSM = 1.0;
};

inline void check_indices(double n1, double n2)
{
    require(n1 >= 1 && n2 >= 1, errc::domain, "reflection: indices must be >= 1");
}

// Back-scattered amplitude relative to the incident one: -(n2 - n1)/(2 n1^2 n2)
inline double reflection_amplitude_fp(double n1, double n2)
{
    check_indices(n1, n2);
    return -(n2 - n1) / (2.0 * n1 * n1 * n2);
}

// squared as a ratio of squares so 1/36 and 0.04 come out as the nearest doubles
inline double reflection_coeff_fp(double n1, double n2)
{
    check_indices(n1, n2);
    const double num = n2 - n1, den = 2.0 * n1 * n1 * n2;
    return (num * num) / (den * den);
}

inline double reflection_coeff_fresnel(double n1, double n2)
{
    check_indices(n1, n2);
    const double num = n2 - n1, den = n2 + n1;
    return (num * num) / (den * den);
}

inline double reflection_phase_fp(double n1, double n2)
{
    check_indices(n1, n2);
    require(n1 != n2, errc::domain, "reflection phase undefined: zero amplitude for n1 == n2");
    return n2 > n1 ? constants::pi : 0.0;
}

inline double rate_ratio(const reflection_setup& s)
{
    require(s.T_HSM > 0 && s.T_HSM <= 1, errc::domain, "rate ratio: T_HSM must lie in (0, 1]");
    return reflection_coeff_fp(s.n1, s.n2) / (s.T_HSM * s.T_HSM);
}

// Scattering restricted to a film of the given thickness: the depth integral
// int_0^t e^{2 i kappa n x} dx over the semi-infinite value gives 1 - e^{2 i kappa n t}.
inline double thin_film_coeff(double n, double lambda, double thickness)
{
    require(thickness > 0 && lambda > 0, errc::domain, "thin film: thickness and wavelength must be positive");
    const double kappa = 2.0 * constants::pi / lambda;
    const cplx f = 1.0 - std::exp(cplx(0.0, 2.0 * kappa * n * thickness));
    return reflection_coeff_fp(1.0, n) * std::norm(f);
}

struct fp_fresnel_gap {
    double fresnel_over_fp_minus_1;  // 0.44 at n = 1.5
    double one_minus_fp_over_fresnel;  // 0.31 at n = 1.5
};

inline fp_fresnel_gap compare_fp_fresnel(double n)
{
    const double fp = reflection_coeff_fp(1.0, n), fr = reflection_coeff_fresnel(1.0, n);
    require(fp > 0, errc::domain, "comparison needs n != 1");
    return {fr / fp - 1.0, 1.0 - fp / fr};
}

// Numerical depth integral with a small damping eps, standing in for the
// half-zone rule: A = -(2 pi N A_scat/(i kappa)) int_0^inf (l0 + x)/(l0 - n x) e^{2 i kappa n x - eps x} dx,
// with N A_scat eliminated through the index. Returns the reflected amplitude.
inline oracle::result<cplx> reflection_amplitude_oracle(double n, double lambda, double l0, double eps_rel = 1e-4)
{
    require(n > 1 && lambda > 0 && l0 > 0, errc::domain, "reflection oracle: bad inputs");
    const double kappa = 2.0 * constants::pi / lambda;
    const double NA = (n - 1.0) * kappa * kappa / (2.0 * constants::pi);
    const double eps = eps_rel * 2.0 * kappa * n;
    auto f = [&](double x) { return (l0 + x) / (l0 - n * x) * std::exp(cplx(-eps * x, 2.0 * kappa * n * x)); };
    // the geometric factor only matters for x ~ l0/n; the damping has to kill the integrand long before
    const double xmax = 60.0 / eps;
    require(xmax < 0.1 * l0 / n, errc::precondition, "reflection oracle: l0 too short for the damping length",
            {{"l0", l0}, {"needed", 10.0 * n * xmax}});
    // half periods summed with Wynn acceleration; settles long before the pole at l0/n
    auto r = oracle::quad_oscillatory(f, 0.0, INFINITY, 2.0 * kappa * n, 1e-10, eps, 4'000'000);
    r.value *= -(2.0 * constants::pi * NA) / cplx(0.0, kappa);
    return r;
}

}  // namespace pathamp
