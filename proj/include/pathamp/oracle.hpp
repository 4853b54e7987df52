#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <thread>
#include <vector>

#include "core.hpp"

// Brute-force numerics used to check closed forms: adaptive Gauss-Kronrod,
// period-segmented oscillatory quadrature with Wynn's epsilon, nested
// quadrature for the ordered r-integrals, Monte-Carlo ordered volumes.
namespace pathamp::oracle {

template <typename T>
struct result {
    T value{};
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] (symmetric), Kronrod and embedded 7-point Gauss weights
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct panel {
    double a, b;
    cplx value;
    double err;
    double mag;  // integral of |f|, sets the round-off floor
    bool operator<(const panel& o) const { return err < o.err; }
};

template <typename F>
panel gk15(F& f, double a, double b)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    cplx fc = f(mid);
    cplx rk = fc * wgk[7];
    cplx rg = fc * wg[3];
    double ra = std::abs(fc) * wgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        cplx f1 = f(mid - dx);
        cplx f2 = f(mid + dx);
        rk += wgk[j] * (f1 + f2);
        ra += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
    }
    rk *= half;
    rg *= half;
    return {a, b, rk, std::abs(rk - rg), ra * std::abs(half)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]. Converged when the summed panel error is
// below max(abs_tol, rel_tol*|I|).
template <typename F>
result<cplx> integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                       std::size_t max_evals = 4'000'000)
{
    require(std::isfinite(a) && std::isfinite(b), errc::domain, "integrate: infinite limit");
    auto fc = [&](double x) -> cplx { return cplx(f(x)); };
    if (a == b) return {};
    std::priority_queue<detail::panel> heap;
    auto p0 = detail::gk15(fc, a, b);
    std::size_t evals = 15;
    heap.push(p0);
    cplx total = p0.value;
    double err = p0.err;
    double mag = p0.mag;
    auto target = [&] { return std::max({abs_tol, rel_tol * std::abs(total), 1e-14 * mag}); };
    while (err > target()) {
        if (evals + 30 > max_evals) {
            throw error(errc::convergence, "adaptive quadrature did not converge",
                        {{"partial_re", total.real()}, {"partial_im", total.imag()}, {"error", err}});
        }
        auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {
            // cannot split further; accept what we have
            heap.push(worst);
            break;
        }
        auto l = detail::gk15(fc, worst.a, m);
        auto r = detail::gk15(fc, m, worst.b);
        evals += 30;
        total += l.value + r.value - worst.value;
        err += l.err + r.err - worst.err;
        mag += l.mag + r.mag - worst.mag;
        heap.push(l);
        heap.push(r);
    }
    // re-add from the panels to shed drift from the running updates
    compensated_sum<cplx> s;
    double e = 0.0;
    while (!heap.empty()) {
        s.add(heap.top().value);
        e += heap.top().err;
        heap.pop();
    }
    return {s.value(), e, evals};
}

// Wynn epsilon on a stream of partial sums.
class wynn_epsilon {
public:
    cplx push(cplx s)
    {
        std::vector<cplx> next;
        next.reserve(diag_.size() + 1);
        next.push_back(s);
        for (std::size_t k = 0; k < diag_.size(); ++k) {
            cplx prev = k == 0 ? cplx{} : diag_[k - 1];
            cplx diff = next[k] - diag_[k];
            if (std::abs(diff) <= 1e-300) break;
            next.push_back(prev + 1.0 / diff);
        }
        diag_ = std::move(next);
        std::size_t best = (diag_.size() - 1) & ~std::size_t(1);
        return diag_[best];
    }

private:
    std::vector<cplx> diag_;
};

// Oscillatory integral with dominant wavenumber kappa (phase ~ kappa*x).
// The interval is cut into half periods pi/kappa. An infinite upper limit needs
// a declared damping rate: |f(x)| <= C exp(-rate (x-a)).
template <typename F>
result<cplx> quad_oscillatory(F&& f, double a, double b, double kappa, double tol,
                              std::optional<double> damping_rate = std::nullopt,
                              std::size_t max_segments = 200000)
{
    require(kappa > 0, errc::domain, "quad_oscillatory: kappa must be positive");
    require(tol > 0, errc::domain, "quad_oscillatory: tol must be positive");
    const double h = constants::pi / kappa;
    result<cplx> out;
    if (std::isinf(b)) {
        require(damping_rate.has_value() && *damping_rate > 0, errc::precondition,
                "quad_oscillatory: infinite upper limit needs a positive damping envelope");
        wynn_epsilon eps;
        compensated_sum<cplx> partial;
        cplx last{};
        int settled = 0;
        for (std::size_t k = 0; k < max_segments; ++k) {
            const double x0 = a + k * h;
            auto seg = integrate(f, x0, x0 + h, 0.0, tol * 1e-3);
            out.evaluations += seg.evaluations;
            partial.add(seg.value);
            cplx est = eps.push(partial.value());
            const double delta = std::abs(est - last);
            last = est;
            if (k >= 6 && delta <= tol * std::abs(est)) {
                if (++settled >= 3) {
                    out.value = est;
                    out.error = std::max(delta, seg.error);
                    return out;
                }
            } else {
                settled = 0;
            }
            // plain convergence if the envelope has already died
            if (std::exp(-*damping_rate * (x0 + h - a)) < 1e-3 * tol) {
                out.value = partial.value();
                out.error = seg.error;
                return out;
            }
        }
        throw error(errc::convergence, "oscillatory tail did not settle",
                    {{"partial_re", last.real()}, {"partial_im", last.imag()}});
    }
    require(b >= a, errc::domain, "quad_oscillatory: b < a");
    const double nseg_d = std::ceil((b - a) / h);
    require(nseg_d <= double(max_segments), errc::convergence,
            "quad_oscillatory: too many half periods in the interval");
    const auto nseg = std::max<std::size_t>(1, static_cast<std::size_t>(nseg_d));
    const double step = (b - a) / nseg;
    compensated_sum<cplx> sum;
    for (std::size_t k = 0; k < nseg; ++k) {
        const double x0 = a + k * step;
        const double x1 = (k + 1 == nseg) ? b : x0 + step;
        auto seg = integrate(f, x0, x1, 0.0, tol * 1e-2);
        sum.add(seg.value);
        out.error += seg.error;
        out.evaluations += seg.evaluations;
    }
    out.value = sum.value();
    return out;
}

// Nested r-integrals of the n-fold ordered scattering chain, n <= 4:
//   r_n     in [x_n, ds + x_n]
//   r_k     in [x_k - x_{k+1}, ds - sum_{j>k} r_j + x_k]
// with integrand exp(i kappa sum r). xs must be non-increasing.
inline result<cplx> quad_nested(int n, double kappa, double ds, const std::vector<double>& xs,
                                double rel_tol = 1e-10, std::size_t max_evals = 200'000'000)
{
    require(n >= 1 && n <= 4, errc::domain, "quad_nested: order must be 1..4");
    require(static_cast<int>(xs.size()) == n, errc::domain, "quad_nested: need n x positions");
    require(kappa * ds <= 50.0, errc::precondition, "quad_nested: kappa*ds above 50");
    require(ds >= 0, errc::domain, "quad_nested: negative time budget");
    for (int k = 0; k + 1 < n; ++k)
        require(xs[k] >= xs[k + 1], errc::domain, "quad_nested: positions must be ordered");

    std::size_t evals = 0;
    // level k integrates r_k given the sum of r_j for j > k
    std::function<cplx(int, double)> level = [&](int k, double tail) -> cplx {
        const double xnext = (k + 1 < n) ? xs[k + 1] : 0.0;
        const double lo = xs[k] - xnext;
        const double hi = ds - tail + xs[k];
        if (hi <= lo) return {};
        if (k == 0) {
            auto r = integrate([&](double r) { return std::exp(cplx(0, kappa * (r + tail))); }, lo, hi,
                               0.0, rel_tol);
            evals += r.evaluations;
            return r.value;
        }
        auto r = integrate([&](double r) { return level(k - 1, tail + r); }, lo, hi, 0.0, rel_tol);
        evals += r.evaluations;
        if (evals > max_evals)
            throw error(errc::convergence, "quad_nested: evaluation budget exceeded",
                        {{"evaluations", double(evals)}});
        return r.value;
    };
    const double xn = xs[n - 1];
    if (n == 1) {
        auto r = integrate([&](double r) { return std::exp(cplx(0, kappa * r)); }, xn, ds + xn, 0.0,
                           rel_tol);
        return {r.value, r.error, r.evaluations};
    }
    // outermost variable is r_n (index n-1), innermost r_1 (index 0)
    auto outer = integrate([&](double r) { return level(n - 2, r); }, xn, ds + xn, 0.0, rel_tol);
    return {outer.value, outer.error + rel_tol * std::abs(outer.value), evals + outer.evaluations};
}

// Counter-based generator: the k-th draw depends only on (seed, k).
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter)
{
    std::uint64_t z = splitmix64(seed ^ splitmix64(counter));
    return (z >> 11) * 0x1.0p-53;
}

// Volume of {x_1 >= x_2 >= ... >= x_n} inside [0,L]^n by hit-or-miss. Sample s
// always uses counters s*n .. s*n+n-1, so splitting the samples over workers
// leaves the hit count, and hence the result, unchanged.
inline result<double> mc_ordered_volume(int n, double L, std::uint64_t samples, std::uint64_t seed,
                                        unsigned workers = 1)
{
    require(n >= 1 && n <= 8, errc::domain, "mc_ordered_volume: n must be 1..8");
    require(L > 0, errc::domain, "mc_ordered_volume: L must be positive");
    if (n == 1) return {L, 0.0, 0};
    require(samples > 0, errc::domain, "mc_ordered_volume: need samples");
    workers = std::max(1u, std::min<unsigned>(workers, 64));
    auto count = [&](std::uint64_t first, std::uint64_t last) {
        std::uint64_t hits = 0;
        for (std::uint64_t s = first; s < last; ++s) {
            std::uint64_t counter = s * std::uint64_t(n);
            double prev = uniform01(seed, counter++);
            bool ordered = true;
            for (int k = 1; k < n; ++k) {
                const double x = uniform01(seed, counter++);
                if (x > prev) ordered = false;
                prev = x;
            }
            hits += ordered;
        }
        return hits;
    };
    std::vector<std::uint64_t> part(workers, 0);
    if (workers == 1) {
        part[0] = count(0, samples);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] { part[w] = count(samples * w / workers, samples * (w + 1) / workers); });
        for (auto& t : pool) t.join();
    }
    std::uint64_t hits = 0;
    for (auto h : part) hits += h;
    const double p = double(hits) / double(samples);
    const double cube = std::pow(L, n);
    return {cube * p, cube * std::sqrt(std::max(p * (1 - p), 1.0 / double(samples)) / double(samples)),
            samples * std::uint64_t(n)};
}

// <e^{i phi}> under a positive weight on [lo,hi]: the ratio of the two integrals.
template <typename W, typename Phi>
result<cplx> gaussian_ratio_integral(W&& weight, Phi&& phi, double lo, double hi, double rel_tol = 1e-12)
{
    auto num = integrate([&](double p) { return weight(p) * std::exp(cplx(0, phi(p))); }, lo, hi, 0.0,
                         rel_tol);
    auto den = integrate([&](double p) { return cplx(weight(p)); }, lo, hi, 0.0, rel_tol);
    require(std::abs(den.value) > 0, errc::domain, "gaussian_ratio_integral: weight integrates to zero");
    cplx r = num.value / den.value;
    double err = std::abs(r) * (num.error / std::max(std::abs(num.value), 1e-300) +
                                den.error / std::abs(den.value));
    return {r, err, num.evaluations + den.evaluations};
}

// mean +- 8 sigma, clipped below
inline std::pair<double, double> gaussian_window(double mean, double sigma,
                                                 double lower = -std::numeric_limits<double>::infinity())
{
    return {std::max(lower, mean - 8.0 * sigma), mean + 8.0 * sigma};
}

}  // namespace pathamp::oracle
