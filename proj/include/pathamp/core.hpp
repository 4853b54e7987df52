#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pathamp {

using cplx = std::complex<double>;

enum class errc {
    domain,
    precondition,
    total_internal_reflection,
    convergence,
    unit,
    parse,
};

inline const char* to_string(errc c)
{
    switch (c) {
    case errc::domain: return "domain_error";
    case errc::precondition: return "precondition_violated";
    case errc::total_internal_reflection: return "total_internal_reflection";
    case errc::convergence: return "convergence_failure";
    case errc::unit: return "unit_error";
    case errc::parse: return "parse_error";
    }
    return "unknown";
}

// Carries a category plus named numbers (critical angle, last partial sums, ...)
// so that callers can report more than a message.
class error : public std::runtime_error {
public:
    using detail_list = std::vector<std::pair<std::string, double>>;

    error(errc code, const std::string& msg, detail_list detail = {})
        : std::runtime_error(msg), code_(code), detail_(std::move(detail)) {}

    errc code() const noexcept { return code_; }
    const detail_list& detail() const noexcept { return detail_; }

private:
    errc code_;
    detail_list detail_;
};

inline void require(bool ok, errc code, const std::string& msg, error::detail_list d = {})
{
    if (!ok) throw error(code, msg, std::move(d));
}

inline double modulus(cplx z) { return std::abs(z); }

// arg() in (-pi, pi]; std::arg can hand back -pi for a negative real with -0 imaginary part
inline double phase(cplx z)
{
    double a = std::arg(z);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

// wrap to (-pi, pi]
inline double wrap_phase(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

inline cplx polar_amp(double mod, double ph) { return std::polar(mod, ph); }

// Neumaier variant of Kahan summation.
template <typename T>
struct compensated_sum {
    T sum{};
    T carry{};

    void add(T x)
    {
        T t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    T value() const { return sum + carry; }
};

template <typename T>
struct compensated_sum<std::complex<T>> {
    compensated_sum<T> re, im;
    void add(std::complex<T> z)
    {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<T> value() const { return {re.value(), im.value()}; }
};

// Frozen physical inputs. Values are the ones the reference tables were computed
// with, not the latest world averages, so that those tables come out again.
namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 2.99792458e8;               // m/s
inline constexpr double hbar_MeVs = 6.582119569e-22;    // MeV s
inline constexpr double hbar_eVs = 6.582119569e-16;     // eV s
inline constexpr double h_eVs = 2.0 * pi * hbar_eVs;    // eV s
inline constexpr double h_MeVs = 2.0 * pi * hbar_MeVs;  // MeV s
inline constexpr double hbar_c_MeVm = hbar_MeVs * c;    // MeV m
inline constexpr double hbar_c_eVm = hbar_eVs * c;      // eV m
inline constexpr double hbar_Js = 1.054571817e-34;      // J s
inline constexpr double k_B = 1.380649e-23;             // J/K
inline constexpr double k_B_eV = 8.617333262e-5;        // eV/K
inline constexpr double eV_J = 1.602176634e-19;         // J per eV
inline constexpr double u_kg = 1.66053906660e-27;       // kg
inline constexpr double u_MeV = 931.49410242;           // MeV/c^2
inline constexpr double m_e = 0.51099895;               // MeV/c^2
inline constexpr double m_pi = 139.57;                  // charged pion, MeV/c^2
inline constexpr double m_mu = 105.66;                  // MeV/c^2
inline constexpr double m_K = 493.68;                   // charged kaon, MeV/c^2
inline constexpr double m_K0 = 497.7;                   // mean of K_S, K_L, MeV/c^2
inline constexpr double dm_LS = 3.49e-12;               // m_L - m_S, MeV/c^2
inline constexpr double tau_KS = 0.8954e-10;            // s
inline constexpr double tau_KL = 5.18e-8;               // s
inline constexpr double tau_pi = 2.6e-8;                // s
inline constexpr double lambda_NaD = 589.3e-9;          // m
inline constexpr double tau_NaD = 5.4e-9;               // s, natural
inline constexpr double m_H_u = 1.00794;                // u
inline constexpr double m_Na_u = 22.99;                 // u
inline constexpr double T_NTP = 273.15;                 // K

struct entry {
    std::string_view name;
    double value;
    std::string_view unit;
    std::string_view note;
};

inline constexpr std::array<entry, 22> table{{
    {"c", c, "m/s", "exact SI"},
    {"hbar", hbar_MeVs, "MeV s", "CODATA 2018"},
    {"h", h_eVs, "eV s", "2 pi hbar"},
    {"k_B", k_B, "J/K", "exact SI"},
    {"u", u_MeV, "MeV/c^2", "CODATA 2018"},
    {"m_e", m_e, "MeV/c^2", "CODATA 2018"},
    {"m_pi", m_pi, "MeV/c^2", "rounded, gives p0 = 29.79 MeV/c"},
    {"m_mu", m_mu, "MeV/c^2", "rounded"},
    {"m_K", m_K, "MeV/c^2", "charged kaon"},
    {"m_K0", m_K0, "MeV/c^2", "neutral kaon mean mass"},
    {"dm_LS", dm_LS, "MeV/c^2", "K_L - K_S mass difference"},
    {"tau_KS", tau_KS, "s", "K_S mean life"},
    {"tau_KL", tau_KL, "s", "K_L mean life"},
    {"tau_pi", tau_pi, "s", "charged pion mean life"},
    {"lambda_NaD", lambda_NaD, "m", "sodium D doublet"},
    {"tau_NaD", tau_NaD, "s", "sodium D natural mean life"},
    {"m_H", m_H_u, "u", "hydrogen atom"},
    {"m_Na", m_Na_u, "u", "sodium atom"},
    {"T_NTP", T_NTP, "K", "0 C"},
    {"hbar_J", hbar_Js, "J s", "CODATA 2018"},
    {"eV", eV_J, "J", "exact SI"},
    {"k_B_eV", k_B_eV, "eV/K", "CODATA 2018"},
}};

}  // namespace constants

// Truncated sine: sum_{k<j} (-1)^k x^(2k+1)/(2k+1)!.  S_0 = 0.
template <typename T = double>
T trunc_sin(int j, T x)
{
    require(std::isfinite(static_cast<double>(x)), errc::domain, "trunc_sin: non-finite argument");
    require(j >= 0, errc::domain, "trunc_sin: negative order");
    compensated_sum<T> s;
    T term = x;
    const T x2 = x * x;
    for (int k = 0; k < j; ++k) {
        s.add(term);
        term *= -x2 / (T(2 * k + 2) * T(2 * k + 3));
    }
    return s.value();
}

// Truncated cosine: sum_{k<=j} (-1)^k x^(2k)/(2k)!.  C_0 = 1.
template <typename T = double>
T trunc_cos(int j, T x)
{
    require(std::isfinite(static_cast<double>(x)), errc::domain, "trunc_cos: non-finite argument");
    require(j >= 0, errc::domain, "trunc_cos: negative order");
    compensated_sum<T> s;
    T term = 1;
    const T x2 = x * x;
    for (int k = 0; k <= j; ++k) {
        s.add(term);
        term *= -x2 / (T(2 * k + 1) * T(2 * k + 2));
    }
    return s.value();
}

}  // namespace pathamp
