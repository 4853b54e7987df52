// pathamp command-line front end: one subcommand per experiment, JSON summary on stdout.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathamp/pathamp.hpp"

using json = nlohmann::ordered_json;
using namespace pathamp;
namespace u = pathamp::units;

namespace {

constexpr const char* schema_id = "pathamp-summary/1";
constexpr double tau_K_charged = 1.238e-8;  // s

enum class kind { quantity, optional_quantity, choice, integer };

struct param {
    std::string name;
    kind k;
    u::dim d = u::dim::dimensionless;
    std::string def;
    std::string help;
    std::vector<std::string> choices;
};

param q(std::string n, u::dim d, std::string def, std::string help)
{
    return {std::move(n), kind::quantity, d, std::move(def), std::move(help), {}};
}
param opt(std::string n, u::dim d, std::string help)
{
    return {std::move(n), kind::optional_quantity, d, "", std::move(help), {}};
}
param pick(std::string n, std::vector<std::string> c, std::string help)
{
    std::string def = c.front();
    return {std::move(n), kind::choice, u::dim::dimensionless, std::move(def), std::move(help), std::move(c)};
}
param integer(std::string n, std::string def, std::string help)
{
    return {std::move(n), kind::integer, u::dim::dimensionless, std::move(def), std::move(help), {}};
}

std::string default_seed()
{
    if (const char* s = std::getenv("PATHAMP_SEED"); s && *s) return s;
    return "12345";
}

// unknown config key / bad flag usage; kept apart from the library's error codes
struct usage_error : std::runtime_error {
    std::string code;
    usage_error(std::string c, const std::string& m) : std::runtime_error(m), code(std::move(c)) {}
};

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class inputs {
public:
    inputs(const std::vector<param>& ps, const std::map<std::string, std::string>& raw) : ps_(ps)
    {
        for (const auto& p : ps) {
            const std::string& t = raw.at(p.name);
            switch (p.k) {
            case kind::quantity:
            case kind::optional_quantity:
                if (t.empty()) {
                    if (p.k == kind::quantity) throw usage_error("missing_parameter", "parameter --" + p.name + " is required");
                    break;
                }
                try {
                    vals_[p.name] = u::parse(t, p.d);
                } catch (const error& e) {
                    throw error(e.code(), "--" + p.name + ": " + e.what(), e.detail());
                }
                echo_[p.name] = fmt17(vals_[p.name]) + u::canonical_unit(p.d);
                break;
            case kind::choice: {
                bool ok = false;
                for (const auto& c : p.choices) ok = ok || c == t;
                if (!ok) {
                    std::string all;
                    for (const auto& c : p.choices) all += (all.empty() ? "" : ", ") + c;
                    throw usage_error("bad_choice", "--" + p.name + " must be one of: " + all + " (got '" + t + "')");
                }
                text_[p.name] = t;
                echo_[p.name] = t;
                break;
            }
            case kind::integer: {
                std::uint64_t v = 0;
                auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
                if (ec != std::errc() || ptr != t.data() + t.size())
                    throw error(errc::parse, "--" + p.name + ": not a non-negative integer: '" + t + "'");
                ints_[p.name] = v;
                echo_[p.name] = std::to_string(v);
                break;
            }
            }
        }
    }

    double operator[](const std::string& n) const { return vals_.at(n); }
    bool has(const std::string& n) const { return vals_.count(n) > 0; }
    const std::string& text(const std::string& n) const { return text_.at(n); }
    std::uint64_t count(const std::string& n) const { return ints_.at(n); }

    json echo() const
    {
        json j = json::object();
        for (const auto& p : ps_)
            if (echo_.count(p.name)) j[p.name] = echo_.at(p.name);
        return j;
    }

private:
    const std::vector<param>& ps_;
    std::map<std::string, double> vals_;
    std::map<std::string, std::string> text_;
    std::map<std::string, std::uint64_t> ints_;
    std::map<std::string, std::string> echo_;
};

struct curve {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string csv() const
    {
        std::string s;
        for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
        s += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + fmt17(r[i]);
            s += "\n";
        }
        return s;
    }
};

struct report {
    json outputs = json::object();
    json provenance = json::object();
    json discrepancies = json::array();
    curve table;

    void put(const std::string& k, const json& v, const char* tag)
    {
        outputs[k] = v;
        provenance[k] = tag;
    }
    void flag(const std::string& what, double computed, double reference, const std::string& note)
    {
        discrepancies.push_back({{"quantity", what},
                                 {"computed", computed},
                                 {"reference", reference},
                                 {"ratio", computed / reference},
                                 {"note", note}});
    }
};

constexpr const char* CF = "closed-form";
constexpr const char* OR = "oracle";
constexpr const char* REF = "reference-value";
constexpr const char* MD = "model-derived";

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}, {"arg", std::arg(z)}}; }

struct flags {
    bool oracle = false;
};

struct command {
    std::string name;
    std::string help;
    std::vector<param> params;
    std::function<void(const inputs&, const flags&, report&)> run;
};

// ---------------- subcommands ----------------

void run_propagator(const inputs& in, const flags&, report& r)
{
    const on_shell_particle p{in["mass"], in["width"], in["beta"]};
    const double dt = in["r"] / (p.beta * constants::c);
    const auto v = covariant_propagator(p, in["r"], dt);
    r.put("dt", dt, CF);
    r.put("proper_time", v.proper_time, CF);
    r.put("phase_unwrapped", v.phase_unwrapped, CF);
    r.put("phase_lab_frame", p.mass > 0 ? lab_frame_phase(p, in["r"], dt) : 0.0, CF);
    r.put("amplitude", cjson(v.amplitude), CF);
    r.table.header = {"r_m", "phase_rad", "modulus"};
    for (int i = 1; i <= 50; ++i) {
        const double ri = in["r"] * i / 50.0;
        const auto w = covariant_propagator(p, ri, ri / (p.beta * constants::c));
        r.table.rows.push_back({ri, w.phase_unwrapped, std::abs(w.amplitude)});
    }
}

void run_diffraction(const inputs& in, const flags& f, report& r)
{
    const emitter_spec e = emitter_from_line(in["lambda"], in["tau"]);
    const double tD = (in["x_SD"] + in["lag"]) / constants::c;
    const double k = e.kappa();
    const cplx direct = direct_amplitude(e, in["x_SD"], tD);
    const cplx plane = plane_sum_amplitude(e, in["x_SD"], in["x1"], tD, cplx(0.0, -1.0 / in["lambda"]));
    r.put("kappa", k, CF);
    r.put("direct", cjson(direct), CF);
    r.put("plane_sum", cjson(plane), CF);
    r.put("plane_vs_direct", std::abs(plane - direct) / std::abs(direct), CF);
    r.put("diffraction_amplitude_forward", cjson(diffraction_amplitude(k, 0.0, 0.0)), CF);
    r.put("half_zone_integral", cjson(half_period_zone_integral(k, in["x1"])), CF);
    if (f.oracle) {
        const auto d = damped_r1_integral(k, in["x1"], 1e-7 * k);
        const cplx h = huygens_r1_integral(k, in["x1"]);
        r.put("damped_r1_integral", cjson(d.value), OR);
        r.put("damped_vs_half_zone", std::abs(d.value - h) / std::abs(h), OR);
        r.put("oracle_evaluations", d.evaluations, OR);
    }
}

void run_refract_index(const inputs& in, const flags&, report& r)
{
    const double A = scattering_amplitude_for_index(in["n"], in["N"], in["lambda"]);
    medium_spec m{in["N"], A, in["thickness"]};
    const auto ph = thin_sheet_phase_shift(m, 2.0 * constants::pi / in["lambda"]);
    const auto v = effective_velocity(in["f"], in["n"]);
    r.put("A_scat", A, CF);
    r.put("index_check", refractive_index(in["N"], A, in["lambda"]), CF);
    r.put("thin_sheet_phase", ph.value, CF);
    r.put("thin_sheet_phase_exact", std::arg(cplx(1.0, ph.value)), CF);
    r.put("thin_sheet_approximation_ok", ph.approximation_ok, MD);
    r.put("velocity_thin_sheet", v.thin_sheet, CF);
    r.put("velocity_thick_block", v.thick_block, CF);
    r.put("velocity_relative_difference", v.relative_difference, CF);
    r.put("velocity_regime", v.regime, MD);
}

void run_refract_series(const inputs& in, const flags& f, report& r)
{
    const double dp = in["dphi"], bl = in["betaL"];
    const auto s = f_ref(dp, bl, int(in.count("n_max")));
    r.put("f_ref_kernel", cjson(s.kernel_form), CF);
    r.put("f_ref_d_form", cjson(s.d_form), CF);
    r.put("relative_agreement", s.relative_agreement, CF);
    r.put("terms", s.terms, CF);
    r.put("upper_limit_part", cjson(f_ref_upper_limit_part(dp, bl)), CF);
    if (f.oracle) {
        const cplx b = f_ref_integral(dp, bl);
        r.put("f_ref_integral", cjson(b), OR);
        r.put("series_vs_integral", std::abs(b - s.kernel_form) / std::max(1.0, std::abs(b)), OR);
    }
    r.table.header = {"dphi", "abs", "arg"};
    for (int i = 0; i <= 100; ++i) {
        const double x = dp * i / 100.0;
        const cplx v = f_ref(x, bl).kernel_form;
        r.table.rows.push_back({x, std::abs(v), std::arg(v)});
    }
}

void run_annulment(const inputs& in, const flags&, report& r)
{
    const auto a = annulment_analysis(in["R"], in["l"], in["lambda"], in["L"], in["n"], in["tau"]);
    r.put("ds_max", a.ds_max, CF);
    r.put("dphi_max", a.dphi_max, CF);
    r.put("periods", a.periods, CF);
    r.put("betaL", a.betaL, CF);
    r.put("prompt_time", a.prompt_time, CF);
    r.put("prompt_fraction", a.prompt_fraction, CF);
    r.put("prompt_fraction_linear", a.prompt_fraction_linear, CF);
    r.put("regime", a.regime, MD);
    if (std::abs(a.prompt_fraction / 4e-4 - 1.0) > 0.2)
        r.flag("prompt_fraction", a.prompt_fraction, 4e-4,
               "published fraction is about ten times the value from ds_max/(c tau)");
}

void run_snell(const inputs& in, const flags&, report& r)
{
    const double n1 = in["n1"], n2 = in["n2"], th = in["theta_I"];
    const double k = 2.0 * constants::pi / in["lambda"];
    const double ts = snell_angle(n1, n2, th);
    interface_geometry g;
    g.n1 = n1;
    g.n2 = n2;
    g.alpha = constants::pi / 2 - th;
    g.l = in["l"];
    g.r = in["r"];
    const auto st = stationary_phase_search(g, k);
    const auto rf = stationary_phase_search(g, k, branch::reflection);
    const double fe = fermat_exit_angle(n1, n2, th, g.r);
    r.put("theta_snell", ts, CF);
    r.put("theta_stationary", st.theta, MD);
    r.put("theta_fermat", fe, MD);
    r.put("theta_reflection", rf.theta, MD);
    r.put("stationary_minus_snell", st.theta - ts, MD);
    r.put("fermat_minus_snell", fe - ts, MD);
    r.put("reflection_minus_incidence", rf.theta - th, MD);
    const auto sp = trajectory_spread(k, n2, g.r, ts);
    r.put("spread_dtheta", sp.dtheta, CF);
    r.put("spread_dx", sp.dx, CF);
}

void run_reflect(const inputs& in, const flags& f, report& r)
{
    const double n1 = in["n1"], n2 = in["n2"];
    r.put("rho_fp", reflection_coeff_fp(n1, n2), CF);
    r.put("rho_fresnel", reflection_coeff_fresnel(n1, n2), CF);
    r.put("amplitude_fp", reflection_amplitude_fp(n1, n2), CF);
    r.put("phase", n1 == n2 ? "none" : (n2 > n1 ? "pi" : "0"), CF);
    reflection_setup s{n1, n2, std::nullopt, in["T_HSM"]};
    r.put("rate_ratio", rate_ratio(s), CF);
    if (n1 == 1.0 && n2 > 1.0) {
        const auto g = compare_fp_fresnel(n2);
        r.put("fresnel_over_fp_minus_1", g.fresnel_over_fp_minus_1, CF);
        r.put("one_minus_fp_over_fresnel", g.one_minus_fp_over_fresnel, CF);
    }
    if (in.has("thickness")) {
        require(n1 == 1.0, errc::domain, "thin film coefficient assumes the film sits in vacuum (n1 = 1)");
        r.put("thin_film_coeff", thin_film_coeff(n2, in["lambda"], in["thickness"]), CF);
    }
    if (f.oracle) {
        require(n1 == 1.0 && n2 > 1.0, errc::domain, "reflection oracle needs n1 = 1 < n2");
        const auto o = reflection_amplitude_oracle(n2, in["lambda"], 1.0);
        r.put("amplitude_oracle", cjson(o.value), OR);
        r.put("oracle_vs_closed_form", std::abs(o.value.real() / reflection_amplitude_fp(1.0, n2) - 1.0), OR);
    }
}

void run_michelson(const inputs& in, const flags&, report& r)
{
    interferometer_spec s;
    s.L = in["L"];
    s.d = in["d"];
    s.tau_S = in["tau"];
    s.kappa = 2.0 * constants::pi / in["lambda"];
    check_spec(s);
    const double t1 = s.L1() / constants::c;
    r.put("t_long_arm_open", t1, CF);
    r.put("visibility_asymptote", visibility_asymptote(s.d, s.tau_S), CF);
    r.put("probability_asymptote", detection_probability(s, t1 + 60.0 * s.tau_S), CF);
    if (in.has("t_max")) {
        r.put("visibility", visibility(s, in["t_max"]), CF);
        r.put("probability", detection_probability(s, in["t_max"]), CF);
    }
    r.table.header = {"t_s", "probability", "visibility"};
    for (int i = 1; i <= 200; ++i) {
        const double t = t1 + 10.0 * s.tau_S * i / 200.0;
        r.table.rows.push_back({t, detection_probability(s, t), visibility(s, t)});
    }
}

void run_ydse(const inputs& in, const flags&, report& r)
{
    ydse_geometry g;
    g.l = in["l"];
    g.r_prime = in["r_prime"];
    g.d = in["d"];
    g.h = in["slit_width"];
    const double y = in["y"];
    if (in.text("particle") == "photon") {
        const double lam = in["lambda"];
        const auto p = ydse_photon(g, 2.0 * constants::pi / lam, in["tau"], y);
        const double dpf = ydse_photon_damping_per_fringe(lam, in["tau"]);
        r.put("fringe_spacing", p.fringe_spacing, CF);
        r.put("probability", p.probability, CF);
        r.put("damping", p.damping, CF);
        r.put("damping_per_fringe", dpf, CF);
        if (std::abs(lam - 5893e-10) < 1e-12 && std::abs(in["tau"] - 16e-9) < 1e-15)
            r.flag("damping_per_fringe", dpf, 1.8e-11, "published photon value is thousands of times below lambda/(2 c tau)");
        r.table.header = {"y_m", "probability"};
        for (int i = 0; i <= 200; ++i) {
            const double yy = 4.0 * p.fringe_spacing * i / 200.0;
            r.table.rows.push_back({yy, ydse_photon(g, 2.0 * constants::pi / lam, in["tau"], yy).probability});
        }
    } else {
        electron_beam b;
        b.p = in["p"];
        b.sigma_p = in["sigma_rel"] * in["p"];
        const auto e = ydse_electron(g, b, y);
        const auto d = electron_damping_per_fringe(b, g.r_prime + g.l);
        r.put("de_broglie", b.de_broglie(), CF);
        r.put("fringe_spacing", e.fringe_spacing, CF);
        r.put("probability", e.probability, CF);
        r.put("damping_dp_per_fringe", d.dp_over_2sigma, CF);
        r.put("damping_dp_per_fringe_without_half", d.dp_over_2sigma_nohalf, CF);
        r.put("damping_width_per_fringe", d.width_term, CF);
        r.flag("damping_dp_per_fringe", d.dp_over_2sigma, 1.7e-9,
               "published momentum-mismatch term does not follow from gamma^2 h/(2 sigma path)");
        r.flag("damping_width_per_fringe", d.width_term, 1.9e-6, "pi sigma/p; within rounding of the published value");
    }
}

void run_kaon(const inputs& in, const flags&, report& r)
{
    kaon_system k;
    k.p = in["p"];
    check_kaon(k);
    const double L = in["L"];
    const double pp = kaon_detection_probability_at(k, lepton_charge::positive, L);
    const double pm = kaon_detection_probability_at(k, lepton_charge::negative, L);
    const double tau = kaon_proper_time(k, L);
    const double hb = constants::hbar_MeVs;
    const double plain = 2.0 * (std::exp(-k.Gamma_S * tau / hb) + std::exp(-k.Gamma_L * tau / hb));
    const auto v = kaon_equal_velocity_report(k);
    r.put("proper_time", tau, CF);
    r.put("P_positive", pp, CF);
    r.put("P_negative", pm, CF);
    r.put("interference_residual", (pp + pm) - plain, CF);
    r.put("oscillation_period", kaon_oscillation_period(k), CF);
    r.put("lab_phase", kaon_lab_phase(k, L), CF);
    r.put("E_bar", v.E_bar, CF);
    r.put("dt_SL", v.dt_SL, CF);
    r.put("dp_over_p", v.dp_over_p, CF);
    r.put("dp_radiative_over_p", v.dp_rad_over_p, REF);
    const double ps[] = {10.0, 100.0, 1000.0, 10000.0, 100000.0};
    const double tab[] = {6.27e-22, 6.14e-22, 2.8e-22, 3.1e-23, 3.1e-24};
    for (int i = 0; i < 5; ++i)
        if (std::abs(k.p / ps[i] - 1.0) < 1e-9)
            r.flag("dt_SL", v.dt_SL, tab[i], "published times exceed dm tau_S/E by about 1e3; ratios agree");
    r.table.header = {"tau_over_tauS", "P_positive", "P_negative"};
    for (int i = 0; i <= 200; ++i) {
        const double t = 20.0 * constants::tau_KS * i / 200.0;
        r.table.rows.push_back({t / constants::tau_KS, kaon_detection_probability(k, lepton_charge::positive, t),
                                kaon_detection_probability(k, lepton_charge::negative, t)});
    }
}

neutrino_experiment neutrino_source(const std::string& src)
{
    neutrino_experiment e;
    if (src == "kaon") {
        e.m_S = constants::m_K;
        e.Gamma_S = constants::hbar_MeVs / tau_K_charged;
    }
    return e;
}

void run_neutrino(const inputs& in, const flags&, report& r)
{
    neutrino_experiment e = neutrino_source(in.text("source"));
    e.dm2 = in["dm2"];
    e.L = in["L"];
    e.theta = in["theta"];
    const auto n = neutrino_oscillation(e);
    const double Lpi = neutrino_L_pi(e);
    r.put("p0", n.p0, CF);
    r.put("cos_argument", n.phi_path, CF);
    r.put("phi_compact", n.phi_compact, CF);
    r.put("phi_standard", n.phi_standard, CF);
    r.put("phase_ratio_path_over_standard", n.phi_path / n.phi_standard, CF);
    r.put("damping", n.damping, CF);
    r.put("P_emu", n.P_emu, CF);
    r.put("L_pi", Lpi, CF);
    r.put("L_pi_times_dm2", Lpi * e.dm2, CF);
    r.put("L_osc_path", n.L_osc_path, CF);
    r.put("L_osc_standard", n.L_osc_standard, CF);
    r.put("dt_21", n.dt_21, CF);
    r.put("dt_21_mass_form", neutrino_dt21_mass_form(e), CF);
    r.put("unit_phase_damping", neutrino_unit_phase_damping(e), CF);
    if (in.text("source") == "pion") {
        r.flag("dt_21_mass_form", neutrino_dt21_mass_form(e), 8.22e-24, "published value is smaller by a factor pi");
        r.flag("unit_phase_damping", neutrino_unit_phase_damping(e), 4.0e-16,
               "Gamma_pi/(4 p0) with the quoted pion lifetime gives about half the published exponent");
    }
    r.table.header = {"L_m", "P_emu"};
    for (int i = 0; i <= 200; ++i) {
        neutrino_experiment x = e;
        x.L = 4.0 * Lpi * i / 200.0;
        r.table.rows.push_back({x.L, neutrino_oscillation(x).P_emu});
    }
}

json comparison_json(experiment_kind k)
{
    const auto& t = classify_experiment(k);
    return {{"name", std::string(t.name)},
            {"dr_zero", t.dr_zero},
            {"dt_zero", t.dt_zero},
            {"dv_zero", t.dv_zero},
            {"dphi_source_zero", t.dphi_source_zero},
            {"dphi_particle_zero", t.dphi_particle_zero},
            {"phase", std::string(t.phase_formula)},
            {"lambda_ratio", std::string(t.lambda_ratio_formula)}};
}

void run_classify(const inputs& in, const flags&, report& r)
{
    const std::string s = in.text("kind");
    json rows = json::array();
    const experiment_kind all[] = {experiment_kind::photon_ydse, experiment_kind::electron_ydse, experiment_kind::kaon,
                                   experiment_kind::neutrino};
    for (auto k : all)
        if (s == "all" || s == classify_experiment(k).name) rows.push_back(comparison_json(k));
    r.put("rows", rows, MD);
    // lambda ratios at the reference momenta
    neutrino_experiment nu;
    kaon_system ks;
    json lr = json::object();
    lr["photon-ydse"] = lambda_ratio(experiment_kind::photon_ydse);
    lr["electron-ydse"] = lambda_ratio(experiment_kind::electron_ydse);
    lr["kaon"] = lambda_ratio(experiment_kind::kaon, ks.p, ks.m);
    lr["neutrino"] = lambda_ratio(experiment_kind::neutrino, nu.p0(), nu.m_S, nu.R());
    r.put("lambda_ratio_at_reference", lr, CF);
}

void run_oracle(const inputs& in, const flags&, report& r)
{
    const std::string t = in.text("task");
    const int n = int(in.count("n"));
    if (t == "mc-volume") {
        const auto m = oracle::mc_ordered_volume(n, in["L"], in.count("samples"), in.count("seed"),
                                                 unsigned(std::max<std::uint64_t>(1, in.count("workers"))));
        const double exact = nested_volume_integral(n, in["L"]);
        r.put("value", m.value, OR);
        r.put("error", m.error, OR);
        r.put("evaluations", m.evaluations, OR);
        r.put("closed_form", exact, CF);
        r.put("sigma_distance", m.error > 0 ? std::abs(m.value - exact) / m.error : 0.0, OR);
    } else if (t == "nested") {
        const double k = 4.0, ds = in["dphi"] / k;
        std::vector<double> xs;
        for (int i = 0; i < n; ++i) xs.push_back(0.7 - 0.15 * i);
        const auto o = oracle::quad_nested(n, k, ds, xs, 1e-9);
        const cplx scale = std::exp(cplx(0, k * xs[0])) * std::pow(cplx(0, 1 / k), n);
        const cplx b = f_ref_bracket(n, in["dphi"]);
        r.put("value", cjson(o.value / scale), OR);
        r.put("evaluations", o.evaluations, OR);
        r.put("closed_form", cjson(b), CF);
        r.put("relative_deviation", std::abs(o.value / scale - b) / std::abs(b), OR);
    } else if (t == "reflection") {
        const auto o = reflection_amplitude_oracle(in["n2"], in["lambda"], 1.0);
        r.put("value", cjson(o.value), OR);
        r.put("evaluations", o.evaluations, OR);
        r.put("closed_form", reflection_amplitude_fp(1.0, in["n2"]), CF);
    } else if (t == "source-motion") {
        const double k = 2.0 * constants::pi / in["lambda"], M = constants::m_Na_u * constants::u_kg;
        const auto o = source_motion_oracle(k, in["L"], M, constants::T_NTP);
        const auto c = source_motion_correction(k, in["L"], M, constants::T_NTP);
        r.put("value", cjson(o.value), OR);
        r.put("closed_form", cjson(std::polar(c.exact_modulus, c.exact_phase)), CF);
        r.put("relative_shift", c.relative_shift, CF);
    } else {
        const double k = 2.0 * constants::pi / in["lambda"];
        const auto d = damped_r1_integral(k, in["L"], 1e-7 * k);
        const cplx h = huygens_r1_integral(k, in["L"]);
        r.put("value", cjson(d.value), OR);
        r.put("closed_form", cjson(h), CF);
        r.put("relative_deviation", std::abs(d.value - h) / std::abs(h), OR);
    }
}

// ---- reproduction recipes ----

void recipe_fig9(report& r)
{
    const double ds[] = {0.125, 0.25, 0.5};
    json a = json::array();
    r.table.header = {"t_ns", "V_d12.5cm", "V_d25cm", "V_d50cm"};
    for (double d : ds) a.push_back({{"d", d}, {"asymptote", visibility_asymptote(d, 10e-9)}});
    r.put("asymptotes", a, CF);
    for (int i = 0; i <= 300; ++i) {
        const double t = 3e-9 + 57e-9 * i / 300.0;
        std::vector<double> row{t * 1e9};
        for (double d : ds) {
            interferometer_spec s;
            s.L = 0.5;
            s.d = d;
            s.tau_S = 10e-9;
            row.push_back(t > s.L1() / constants::c ? visibility(s, t) : 0.0);
        }
        r.table.rows.push_back(row);
    }
}

void recipe_table1(report& r)
{
    struct row {
        const char* name;
        double lambda, delta, tau_nat, tau_S_pub, tau_P_pub, dDE_pub, mass_u;
    };
    const row rows[] = {{"H_r 3p-2s", 6563e-10, 0.190, 5.4e-9, 0.46e-9, 0.50e-9, 0.143, constants::m_H_u},
                        {"H_b 4p-2s", 4861e-10, 0.085, 12.4e-9, 0.204e-9, 0.207e-9, 0.106, constants::m_H_u},
                        {"Na D 3p-3s", 5893e-10, 0.800, 12.4e-9, 1.92e-9, 2.98e-9, 0.650, constants::m_Na_u}};
    json out = json::array();
    for (const auto& x : rows) {
        const auto t = linewidth_analysis(x.delta, x.tau_nat);
        const double dde = x.mass_u == constants::m_H_u ? delta_doppler(x.lambda, 485.0, x.mass_u * constants::u_kg) : NAN;
        json j = {{"transition", x.name},
                  {"tau_S", t.tau_S},
                  {"tau_P", t.resolvable ? json(t.tau_P) : json(nullptr)},
                  {"delta_natural", delta_natural(x.tau_nat)}};
        if (std::isfinite(dde)) j["delta_doppler"] = dde;
        out.push_back(j);
        if (std::abs(t.tau_S / x.tau_S_pub - 1.0) > 0.02)
            r.flag(std::string("tau_S ") + x.name, t.tau_S, x.tau_S_pub, "half-visibility lifetime off the table");
        if (t.resolvable && std::abs(t.tau_P / x.tau_P_pub - 1.0) > 0.02)
            r.flag(std::string("tau_P ") + x.name, t.tau_P, x.tau_P_pub,
                   "tabulated tau_P matches a natural lifetime of 5.4 ns rather than the tabulated 12.4 ns");
        if (std::isfinite(dde) && std::abs(dde / x.dDE_pub - 1.0) > 0.3)
            r.flag(std::string("delta_doppler ") + x.name, dde, x.dDE_pub,
                   "Rayleigh half-visibility path at 485 K with sqrt(kT/M) differs from the tabulated value");
    }
    r.put("rows", out, CF);
}

void recipe_table2(report& r)
{
    kaon_system k;
    const double ps[] = {10.0, 100.0, 1000.0, 10000.0, 100000.0};
    const double tab[] = {6.27e-22, 6.14e-22, 2.8e-22, 3.1e-23, 3.1e-24};
    json out = json::array();
    for (int i = 0; i < 5; ++i) {
        const double dt = kaon_dt_SL(k, ps[i]);
        const double ratio = kaon_dt_SL(k, ps[0]) / dt;
        out.push_back({{"p", ps[i]},
                       {"E_bar", std::hypot(k.m, ps[i])},
                       {"dt_SL", dt},
                       {"ratio_to_lowest", ratio},
                       {"published_ratio", tab[0] / tab[i]}});
        r.flag("dt_SL p=" + fmt17(ps[i]) + "MeV/c", dt, tab[i], "absolute scale about 1e3 below the table");
    }
    r.put("columns", out, CF);
}

void recipe_table3(report& r)
{
    json rows = json::array();
    for (int i = 0; i < 4; ++i) rows.push_back(comparison_json(experiment_kind(i)));
    r.put("rows", rows, MD);
}

void recipe_reflection(report& r)
{
    r.put("rho_fp", reflection_coeff_fp(1.0, 1.5), CF);
    r.put("rho_fresnel", reflection_coeff_fresnel(1.0, 1.5), CF);
    const auto g = compare_fp_fresnel(1.5);
    r.put("fresnel_over_fp_minus_1", g.fresnel_over_fp_minus_1, CF);
    r.put("one_minus_fp_over_fresnel", g.one_minus_fp_over_fresnel, CF);
    const double lam = 589.3e-9;
    r.put("thin_film_quarter_over_bulk", thin_film_coeff(1.5, lam, lam / 6.0) / reflection_coeff_fp(1, 1.5), CF);
    r.put("thin_film_half_over_bulk", thin_film_coeff(1.5, lam, lam / 3.0) / reflection_coeff_fp(1, 1.5), CF);
}

void recipe_neutrino(report& r)
{
    neutrino_experiment pi;
    neutrino_experiment K = neutrino_source("kaon");
    const auto n = neutrino_oscillation(pi);
    const double Lpi_dm2 = neutrino_L_pi(pi) * pi.dm2;
    r.put("p0", n.p0, CF);
    r.put("L_pi_times_dm2", Lpi_dm2, CF);
    r.put("phase_ratio_path_over_standard", n.phi_path / n.phi_standard, CF);
    r.put("kaon_over_pion_length", oscillation_length_ratio(K, pi), CF);
    r.put("dt_21", neutrino_dt21_closed(pi), CF);
    r.put("unit_phase_damping", neutrino_unit_phase_damping(pi), CF);
    r.flag("dt_21", neutrino_dt21_mass_form(pi), 8.22e-24, "published value is smaller by a factor pi");
    r.flag("unit_phase_damping", neutrino_unit_phase_damping(pi), 4.0e-16,
           "Gamma_pi/(4 p0) with the quoted pion lifetime gives about half the published exponent");
}

void run_reproduce(const inputs& in, const flags&, report& r)
{
    const std::string s = in.text("recipe");
    if (s == "fig9") recipe_fig9(r);
    else if (s == "table1") recipe_table1(r);
    else if (s == "table2-ratios") recipe_table2(r);
    else if (s == "table3") recipe_table3(r);
    else if (s == "eq7.8") recipe_reflection(r);
    else recipe_neutrino(r);
}

std::vector<command> commands()
{
    using D = u::dim;
    return {
        {"propagator", "covariant propagator of a free particle",
         {q("mass", D::mass, "139.57MeV/c2", "rest mass"), q("width", D::energy, "0MeV", "decay width"),
          q("beta", D::dimensionless, "0.9", "speed / c"), q("r", D::length, "1m", "path length")},
         run_propagator},
        {"diffraction", "direct vs plane-summed amplitude, half-zone integrals",
         {q("lambda", D::length, "5893A", "wavelength"), q("tau", D::time, "16ns", "source lifetime"),
          q("x_SD", D::length, "1m", "source-detector distance"), q("x1", D::length, "0.5m", "plane-detector distance"),
          q("lag", D::length, "1m", "c (t_D - t_0) - x_SD")},
         run_diffraction},
        {"refract-index", "index from scattering amplitude, thin sheet phase, effective velocity",
         {q("n", D::dimensionless, "1.000293", "refractive index"),
          q("N", D::number_density, "2.5e25/m3", "scatterer density"), q("lambda", D::length, "5893A", "wavelength"),
          q("thickness", D::length, "1mm", "sheet thickness"),
          q("f", D::dimensionless, "0.5", "fraction of path inside the medium")},
         run_refract_index},
        {"refract-series", "curly-bracket factor of the refraction series",
         {q("dphi", D::dimensionless, "3", "kappa * ds"), q("betaL", D::dimensionless, "5", "beta * L"),
          integer("n_max", "600", "series cut-off")},
         run_refract_series},
        {"annulment", "annulment prism report",
         {q("R", D::length, "5cm", "aperture radius"), q("l", D::length, "2m", "aperture-detector distance"),
          q("lambda", D::length, "5900A", "wavelength"), q("L", D::length, "40cm", "block length"),
          q("n", D::dimensionless, "1.5", "block index"), q("tau", D::time, "54ns", "source lifetime")},
         run_annulment},
        {"snell", "stationary-phase and Fermat refraction angles",
         {q("n1", D::dimensionless, "1.5", "incident medium index"), q("n2", D::dimensionless, "1", "exit index"),
          q("theta_I", D::angle, "30deg", "incidence angle"), q("lambda", D::length, "5893A", "wavelength"),
          q("l", D::length, "0.7m", "in-medium segment"), q("r", D::length, "1m", "detector distance")},
         run_snell},
        {"reflect", "reflection coefficients",
         {q("n1", D::dimensionless, "1", "incident index"), q("n2", D::dimensionless, "1.5", "reflecting index"),
          q("lambda", D::length, "5893A", "wavelength"), opt("thickness", D::length, "film thickness"),
          q("T_HSM", D::dimensionless, "1", "half-silvered mirror transmission")},
         run_reflect},
        {"michelson", "time-gated Michelson visibility",
         {q("L", D::length, "50cm", "arm length"), q("d", D::length, "25cm", "arm offset"),
          q("tau", D::time, "10ns", "source lifetime"), q("lambda", D::length, "5893A", "wavelength"),
          opt("t_max", D::time, "gate time")},
         run_michelson},
        {"ydse", "double slit: fringe spacing and damping",
         {pick("particle", {"photon", "electron"}, "photon or electron"),
          q("l", D::length, "10cm", "slits-detector distance"), q("r_prime", D::length, "1m", "source-slits distance"),
          q("d", D::length, "0.9mm", "slit half-separation to inner edge"), q("slit_width", D::length, "0.2mm", "slit width"),
          q("lambda", D::length, "5893A", "photon wavelength"), q("tau", D::time, "16ns", "photon source lifetime"),
          q("p", D::momentum, "229MeV/c", "electron momentum"),
          q("sigma_rel", D::dimensionless, "6e-7", "electron momentum spread / p"),
          q("y", D::length, "0m", "detector offset")},
         run_ydse},
        {"kaon", "neutral kaon semileptonic rates",
         {q("p", D::momentum, "194MeV/c", "kaon momentum"), q("L", D::length, "10cm", "decay distance")},
         run_kaon},
        {"neutrino", "two-flavour oscillation from two-body decays",
         {pick("source", {"pion", "kaon"}, "decaying source"), q("dm2", D::mass_squared, "2e-3eV2", "mass splitting"),
          q("L", D::length, "1000m", "baseline"), q("theta", D::angle, "45deg", "mixing angle")},
         run_neutrino},
        {"classify", "comparison of the four two-amplitude experiments",
         {pick("kind", {"all", "photon-ydse", "electron-ydse", "kaon", "neutrino"}, "row to print")},
         run_classify},
        {"oracle", "brute-force numerical checks",
         {pick("task", {"mc-volume", "nested", "reflection", "source-motion", "half-zone"}, "which check"),
          integer("n", "3", "order / dimension"), q("L", D::dimensionless, "1", "edge (mc-volume), d in m (source-motion), x1 in m (half-zone)"),
          q("dphi", D::dimensionless, "5", "kappa ds for nested"), q("n2", D::dimensionless, "1.5", "index for reflection"),
          q("lambda", D::length, "5893A", "wavelength"), integer("samples", "1000000", "Monte Carlo samples"),
          integer("seed", default_seed(), "Monte Carlo seed (env PATHAMP_SEED)"),
          integer("workers", "1", "Monte Carlo threads")},
         run_oracle},
        {"reproduce", "named reproduction recipes",
         {pick("recipe", {"fig9", "table1", "table2-ratios", "table3", "eq7.8", "eq9.65"}, "recipe name")},
         run_reproduce},
    };
}

// key = value lines, '#' comments; or a JSON summary ("inputs" object)
std::map<std::string, std::string> read_config(const std::string& path, const std::string& cmd)
{
    std::ifstream f(path);
    if (!f) throw usage_error("config", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    std::map<std::string, std::string> out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw error(errc::parse, std::string("config JSON: ") + e.what());
        }
        if (j.contains("command") && j["command"] != cmd)
            throw usage_error("config", "config was written for '" + j["command"].get<std::string>() + "', not '" + cmd + "'");
        const json& in = j.contains("inputs") ? j["inputs"] : j;
        for (auto it = in.begin(); it != in.end(); ++it)
            out[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
        return out;
    }
    std::istringstream ls(text);
    std::string line;
    int no = 0;
    while (std::getline(ls, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto t = std::string(u::trim(line));
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw error(errc::parse, "config line " + std::to_string(no) + ": expected key = value");
        const std::string key(u::trim(std::string_view(t).substr(0, eq)));
        const std::string val(u::trim(std::string_view(t).substr(eq + 1)));
        if (key == "command") {
            if (val != cmd) throw usage_error("config", "config was written for '" + val + "', not '" + cmd + "'");
            continue;
        }
        out[key] = val;
    }
    return out;
}

int exit_code(errc c)
{
    switch (c) {
    case errc::parse:
    case errc::unit: return 2;
    case errc::convergence: return 4;
    default: return 3;
    }
}

int emit_error(const std::string& cmd, const std::string& code, const std::string& msg, const json& details, int status)
{
    json j;
    j["schema"] = schema_id;
    j["command"] = cmd;
    j["error"] = {{"code", code}, {"message", msg}, {"details", details}};
    std::cout << j.dump(2) << "\n";
    return status;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pathamp: path-amplitude calculations for optics and flavour oscillations"};
    app.require_subcommand(1);
    auto cmds = commands();

    struct state {
        std::map<std::string, std::string> cli;
        std::string config, csv, json_out;
        bool curve = false, oracle = false;
    };
    std::vector<state> st(cmds.size());

    for (std::size_t i = 0; i < cmds.size(); ++i) {
        auto* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
        for (const auto& p : cmds[i].params) {
            std::string h = p.help;
            if (p.k == kind::quantity || p.k == kind::optional_quantity)
                h += std::string(" [") + u::to_string(p.d) + (p.def.empty() ? "" : ", default " + p.def) + "]";
            else
                h += " [default " + p.def + "]";
            sub->add_option("--" + p.name, st[i].cli[p.name], h);
        }
        sub->add_option("--config", st[i].config, "key = value file or a previous JSON summary");
        sub->add_option("--csv", st[i].csv, "write the curve/table as CSV to this file");
        sub->add_option("--json", st[i].json_out, "write the summary to this file as well");
        sub->add_flag("--curve", st[i].curve, "print the CSV curve on stdout instead of the summary");
        sub->add_flag("--oracle", st[i].oracle, "also run the brute-force numerical check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        const std::string code = dynamic_cast<const CLI::ExtrasError*>(&e) ? "unknown_parameter" : "usage";
        std::string which;
        for (const auto& c : cmds)
            if (argc > 1 && c.name == argv[1]) which = c.name;
        return emit_error(which, code, e.what(), json::object(), 2);
    }

    std::size_t idx = 0;
    for (; idx < cmds.size(); ++idx)
        if (app.got_subcommand(cmds[idx].name)) break;
    const command& c = cmds[idx];
    state& s = st[idx];
    auto* sub = app.get_subcommand(c.name);

    try {
        std::map<std::string, std::string> raw;
        for (const auto& p : c.params) raw[p.name] = p.def;
        if (!s.config.empty())
            for (auto& [k, v] : read_config(s.config, c.name)) {
                if (!raw.count(k)) throw usage_error("unknown_parameter", "unknown parameter '" + k + "' in config for " + c.name);
                raw[k] = v;
            }
        for (const auto& p : c.params)
            if (sub->get_option("--" + p.name)->count() > 0) raw[p.name] = s.cli[p.name];

        const inputs in(c.params, raw);
        report r;
        c.run(in, flags{s.oracle}, r);

        json j;
        j["schema"] = schema_id;
        j["command"] = c.name;
        j["inputs"] = in.echo();
        j["outputs"] = r.outputs;
        j["provenance"] = r.provenance;
        j["discrepancies"] = r.discrepancies;
        const std::string text = j.dump(2) + "\n";
        if (!s.csv.empty()) {
            if (r.table.header.empty()) throw usage_error("no_curve", c.name + " has no curve to write");
            std::ofstream f(s.csv);
            if (!f) throw usage_error("io", "cannot write '" + s.csv + "'");
            f << r.table.csv();
        }
        if (!s.json_out.empty()) {
            std::ofstream f(s.json_out);
            if (!f) throw usage_error("io", "cannot write '" + s.json_out + "'");
            f << text;
        }
        if (s.curve) {
            if (r.table.header.empty()) throw usage_error("no_curve", c.name + " has no curve to print");
            std::cout << r.table.csv();
        } else {
            std::cout << text;
        }
        return 0;
    } catch (const usage_error& e) {
        return emit_error(c.name, e.code, e.what(), json::object(), 2);
    } catch (const error& e) {
        json d = json::object();
        for (const auto& [k, v] : e.detail()) d[k] = v;
        return emit_error(c.name, to_string(e.code()), e.what(), d, exit_code(e.code()));
    } catch (const std::exception& e) {
        return emit_error(c.name, "internal", e.what(), json::object(), 1);
    }
}
