#pragma once

#include <cmath>
#include <functional>

#include "core.hpp"

namespace pathamp {

// Incidence is parametrised by alpha (angle to the interface), theta_I = pi/2 - alpha.
// Detector at polar (r, theta, phi) around O, d = r cos(theta) from the interface.
// The trajectory is displaced in parallel by (R, phi1).
struct interface_geometry {
    double n1 = 1.0, n2 = 1.0;
    double alpha = constants::pi / 2;
    double l = 0.0;  // in-medium segment PO
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double R = 0.0;
    double phi1 = 0.0;

    double d() const { return r * std::cos(theta); }
    double theta_I() const { return constants::pi / 2 - alpha; }
};

inline void check_geometry(const interface_geometry& g)
{
    require(g.n1 >= 1 && g.n2 >= 1, errc::domain, "interface: indices must be >= 1");
    require(g.l > 0 && g.r > 0, errc::domain, "interface: l and r must be positive");
    require(g.theta >= 0 && g.theta < constants::pi / 2, errc::domain, "interface: theta must lie in [0, pi/2)");
    require(g.alpha > 0 && g.alpha <= constants::pi / 2, errc::domain, "interface: alpha must lie in (0, pi/2]");
}

struct displaced_path {
    double r;
    double l;
};

inline displaced_path displaced(const interface_geometry& g)
{
    const double d = g.d();
    const double rho = d * std::tan(g.theta);
    const double ex = rho * std::cos(g.phi) - g.R * std::cos(g.phi1);
    const double ey = rho * std::sin(g.phi) - g.R * std::sin(g.phi1);
    return {std::sqrt(ex * ex + ey * ey + d * d), g.l + g.R * std::cos(g.phi1) * std::cos(g.alpha)};
}

inline double path_phase(const interface_geometry& g, double kappa)
{
    check_geometry(g);
    require(kappa > 0, errc::domain, "path phase: kappa must be positive");
    const auto p = displaced(g);
    return kappa * (g.n2 * p.r + g.n1 * p.l);
}

// Analytic partials of the phase with respect to R and phi1 at the given displacement.
struct phase_gradient {
    double dR;
    double dphi1;
};

inline phase_gradient path_phase_gradient(const interface_geometry& g, double kappa)
{
    check_geometry(g);
    const auto p = displaced(g);
    const double dt = g.d() * std::tan(g.theta);
    const double c_ = std::cos(g.phi) * std::cos(g.phi1) + std::sin(g.phi) * std::sin(g.phi1);
    const double s_ = std::cos(g.phi) * std::sin(g.phi1) - std::sin(g.phi) * std::cos(g.phi1);
    const double drR = -dt / p.r * c_ + g.R / p.r;
    const double drphi = g.R * dt / p.r * s_;
    const double dlR = std::cos(g.phi1) * std::cos(g.alpha);
    const double dlphi = -g.R * std::sin(g.phi1) * std::cos(g.alpha);
    return {kappa * (g.n2 * drR + g.n1 * dlR), kappa * (g.n2 * drphi + g.n1 * dlphi)};
}

inline double critical_angle(double n1, double n2)
{
    require(n1 > n2, errc::domain, "critical angle exists only for n1 > n2");
    return std::asin(n2 / n1);
}

inline double snell_angle(double n1, double n2, double theta_I)
{
    require(n1 >= 1 && n2 >= 1, errc::domain, "snell: indices must be >= 1");
    require(theta_I >= 0 && theta_I < constants::pi / 2, errc::domain, "snell: theta_I must lie in [0, pi/2)");
    const double s = n1 / n2 * std::sin(theta_I);
    if (s > 1.0)
        throw error(errc::total_internal_reflection, "total internal reflection",
                    {{"critical_angle_rad", critical_angle(n1, n2)}, {"theta_I_rad", theta_I}});
    return std::asin(s);
}

// Golden-section minimum of f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-13)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 400 && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

enum class branch { refraction, reflection };

struct stationary_point {
    double theta;
    double phi;
    double residual;  // |dPhi/dR| + |dPhi/dphi1| at the optimum, 1/m
};

// Searches the detector angle that makes the phase stationary against parallel
// displacement at R = phi = 0, phi1 = 0. For reflection the detector sits on the
// incidence side and the outgoing medium is n1 again.
inline stationary_point stationary_phase_search(interface_geometry g, double kappa, branch b = branch::refraction,
                                                double theta_lo = 0.0, double theta_hi = constants::pi / 2 - 1e-9)
{
    if (b == branch::reflection) g.n2 = g.n1;
    g.R = 0.0;
    g.phi = 0.0;
    g.phi1 = 0.0;
    auto resid = [&](double th) {
        interface_geometry h = g;
        h.theta = th;
        auto gr = path_phase_gradient(h, kappa);
        return std::abs(gr.dR) + std::abs(gr.dphi1);
    };
    const double th = golden_min(resid, theta_lo, theta_hi);
    const double res = resid(th);
    // V-shaped residual: a genuine root leaves the minimum near zero
    if (res > 1e-7 * kappa * std::max(g.n1, g.n2))
        throw error(errc::convergence, "no stationary point in the search window",
                    {{"best_theta", th}, {"residual", res}});
    return {th, 0.0, res};
}

// Phase = kappa c T_eff with T_eff = l'/v1 + r'/v2, v_i = c/n_i.
inline double fermat_time(const interface_geometry& g)
{
    check_geometry(g);
    const auto p = displaced(g);
    return p.l / (constants::c / g.n1) + p.r / (constants::c / g.n2);
}

// Independent route: fix the detector at lateral offset X, depth d below the
// interface, and minimise the travel time over the crossing point, written in
// terms of the exit angle th (crossing at X - d tan th). Only the variable part
// of the time is minimised so its curvature is not swamped by the constant.
inline double fermat_exit_angle(double n1, double n2, double theta_I, double d)
{
    require(n1 >= 1 && n2 >= 1 && d > 0, errc::domain, "fermat: bad inputs");
    const double cosa = std::sin(theta_I);
    auto dT = [&](double th) { return (-n1 * d * std::tan(th) * cosa + n2 * d / std::cos(th)) / constants::c; };
    return golden_min(dT, 0.0, constants::pi / 2 - 1e-6, 1e-15);
}

inline double phase_second_derivative(double kappa, double n2, double r, double theta_O)
{
    const double c = std::cos(theta_O);
    return kappa * n2 * c * c / r;
}

struct spread {
    double dtheta;
    double dx;
    double dy;
};

inline spread trajectory_spread(double kappa, double n2, double r, double theta_O)
{
    require(kappa > 0 && n2 > 0 && r > 0, errc::domain, "spread: inputs must be positive");
    require(theta_O >= 0 && theta_O < constants::pi / 2, errc::domain, "spread: theta_O must lie in [0, pi/2)");
    const double lambda = 2.0 * constants::pi / kappa;
    const double dx = std::sqrt(lambda * r / n2);
    return {std::sqrt(lambda / (n2 * r)), dx, dx / std::cos(theta_O)};
}

}  // namespace pathamp
