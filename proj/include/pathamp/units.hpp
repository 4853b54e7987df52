#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "core.hpp"

// Quantity strings like "50cm", "10 ns", "2e-3eV2", "229MeV/c".
// Canonical units: m, s, MeV (energy, momentum in MeV/c, mass in MeV/c^2),
// eV^2 for squared mass differences, rad, K, 1/m, 1/m^3.
namespace pathamp::units {

enum class dim {
    length,
    time,
    energy,
    momentum,
    mass,
    mass_squared,
    angle,
    temperature,
    wavenumber,
    number_density,
    dimensionless,
};

inline const char* to_string(dim d)
{
    switch (d) {
    case dim::length: return "length";
    case dim::time: return "time";
    case dim::energy: return "energy";
    case dim::momentum: return "momentum";
    case dim::mass: return "mass";
    case dim::mass_squared: return "mass_squared";
    case dim::angle: return "angle";
    case dim::temperature: return "temperature";
    case dim::wavenumber: return "wavenumber";
    case dim::number_density: return "number_density";
    case dim::dimensionless: return "dimensionless";
    }
    return "?";
}

inline const char* canonical_unit(dim d)
{
    switch (d) {
    case dim::length: return "m";
    case dim::time: return "s";
    case dim::energy: return "MeV";
    case dim::momentum: return "MeV/c";
    case dim::mass: return "MeV/c2";
    case dim::mass_squared: return "eV2";
    case dim::angle: return "rad";
    case dim::temperature: return "K";
    case dim::wavenumber: return "1/m";
    case dim::number_density: return "1/m3";
    case dim::dimensionless: return "";
    }
    return "";
}

struct unit_def {
    std::string_view suffix;
    dim d;
    double factor;  // multiply to reach the canonical unit
};

inline constexpr double kg_to_MeV = constants::c * constants::c / (constants::eV_J * 1e6);

inline constexpr unit_def unit_table[] = {
    {"km", dim::length, 1e3},
    {"m", dim::length, 1.0},
    {"cm", dim::length, 1e-2},
    {"mm", dim::length, 1e-3},
    {"um", dim::length, 1e-6},
    {"\xC2\xB5m", dim::length, 1e-6},  // µm
    {"\xCE\xBCm", dim::length, 1e-6},  // μm
    {"nm", dim::length, 1e-9},
    {"pm", dim::length, 1e-12},
    {"A", dim::length, 1e-10},
    {"\xC3\x85", dim::length, 1e-10},  // Å
    {"s", dim::time, 1.0},
    {"ms", dim::time, 1e-3},
    {"us", dim::time, 1e-6},
    {"\xC2\xB5s", dim::time, 1e-6},
    {"\xCE\xBCs", dim::time, 1e-6},
    {"ns", dim::time, 1e-9},
    {"ps", dim::time, 1e-12},
    {"fs", dim::time, 1e-15},
    {"eV", dim::energy, 1e-6},
    {"keV", dim::energy, 1e-3},
    {"MeV", dim::energy, 1.0},
    {"GeV", dim::energy, 1e3},
    {"eV/c", dim::momentum, 1e-6},
    {"keV/c", dim::momentum, 1e-3},
    {"MeV/c", dim::momentum, 1.0},
    {"GeV/c", dim::momentum, 1e3},
    {"eV/c2", dim::mass, 1e-6},
    {"keV/c2", dim::mass, 1e-3},
    {"MeV/c2", dim::mass, 1.0},
    {"GeV/c2", dim::mass, 1e3},
    {"u", dim::mass, constants::u_MeV},
    {"kg", dim::mass, kg_to_MeV},
    {"eV2", dim::mass_squared, 1.0},
    {"meV2", dim::mass_squared, 1e-6},
    {"MeV2", dim::mass_squared, 1e12},
    {"rad", dim::angle, 1.0},
    {"mrad", dim::angle, 1e-3},
    {"deg", dim::angle, constants::pi / 180.0},
    {"K", dim::temperature, 1.0},
    {"1/m", dim::wavenumber, 1.0},
    {"/m", dim::wavenumber, 1.0},
    {"1/cm", dim::wavenumber, 1e2},
    {"/cm", dim::wavenumber, 1e2},
    {"1/m3", dim::number_density, 1.0},
    {"/m3", dim::number_density, 1.0},
    {"1/cm3", dim::number_density, 1e6},
    {"/cm3", dim::number_density, 1e6},
};

struct quantity {
    double value = 0.0;  // canonical
    dim d = dim::dimensionless;
};

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline quantity parse_any(std::string_view text)
{
    auto s = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc())
        throw error(errc::parse, "not a number: '" + std::string(text) + "'");
    if (!std::isfinite(v))
        throw error(errc::parse, "non-finite value: '" + std::string(text) + "'");
    auto suffix = trim(std::string_view(ptr, s.data() + s.size() - ptr));
    if (suffix.empty()) return {v, dim::dimensionless};
    for (const auto& u : unit_table)
        if (u.suffix == suffix) return {v * u.factor, u.d};
    throw error(errc::unit, "unknown unit '" + std::string(suffix) + "' in '" + std::string(text) + "'");
}

// Parses and converts; a dimensional quantity without a suffix is rejected.
inline double parse(std::string_view text, dim expected)
{
    quantity q = parse_any(text);
    if (q.d == expected) return q.value;
    if (expected == dim::mass && q.d == dim::energy) return q.value;  // "139.57MeV" as a rest energy
    if (q.d == dim::dimensionless)
        throw error(errc::unit, "missing unit in '" + std::string(text) + "' (expected " +
                                    to_string(expected) + ", e.g. " + canonical_unit(expected) + ")");
    if (expected == dim::dimensionless)
        throw error(errc::unit, "'" + std::string(text) + "' carries a unit but a plain number is expected");
    throw error(errc::unit, "unit mismatch in '" + std::string(text) + "': got " + to_string(q.d) +
                                ", expected " + to_string(expected));
}

}  // namespace pathamp::units
