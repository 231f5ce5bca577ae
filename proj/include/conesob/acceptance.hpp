#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conesob/blowdown.hpp"
#include "conesob/catalog.hpp"
#include "conesob/rearrange.hpp"
#include "conesob/spaces.hpp"
#include "conesob/specfun.hpp"

namespace conesob {

struct Criterion {
    std::string id;
    std::string section;
    std::string title;
    double measured = nan;
    double tolerance = nan;
    std::string comparison;  // how measured is compared with tolerance
    bool pass = false;
    std::vector<std::pair<std::string, double>> details;
    std::string note;
};

struct SuiteOptions {
    std::uint64_t seed = 7;
    std::set<std::string> only;  // empty: every section
};

[[nodiscard]] inline const std::vector<std::string>& suite_sections()
{
    static const std::vector<std::string> s = {"constants",  "nash",   "bessel",          "log_sobolev",
                                               "faber_krahn", "polya_szego", "blowdown", "moser_trudinger",
                                               "change_of_variables", "ckn", "spaces", "sweeps"};
    return s;
}

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline Criterion make_criterion(std::string id, std::string section, std::string title, double tol,
                                std::string comparison)
{
    Criterion c;
    c.id = std::move(id);
    c.section = std::move(section);
    c.title = std::move(title);
    c.tolerance = tol;
    c.comparison = std::move(comparison);
    return c;
}

inline void add(Criterion& c, const std::string& key, double v) { c.details.emplace_back(key, v); }

// -------------------------------------------------------------- criteria

inline Criterion gns1_constants()
{
    Criterion c = make_criterion("1", "constants", "GNS-I constant reproduction", 1e-8, "max_rel_err <=");
    double worst = 0.0;
    const double rows[][3] = {{2, 3, 2}, {2, 4, 1.5}, {3, 5, 1.2}, {2, 3, 3}};
    for (const auto& r : rows) {
        const InequalitySpec s = make_spec(Family::gns1, {.N = r[1], .p = r[0], .alpha = r[2]});
        const double closed = optimal_constant(s).value;
        const double quad = quotient(s, extremizer(s));
        const double e = rel_err(quad, closed);
        char key[64];
        std::snprintf(key, sizeof key, "p=%g,N=%g,alpha=%g", r[0], r[1], r[2]);
        add(c, std::string(key) + " G", closed);
        add(c, std::string(key) + " rel_err", e);
        worst = std::max(worst, e);
    }
    c.measured = worst;
    c.pass = worst <= c.tolerance;
    return c;
}

inline Criterion nash_constants()
{
    Criterion c = make_criterion("2", "nash", "Nash constant at the Bessel extremizer", 1e-6, "max_rel_err <=");
    double worst = 0.0;
    bool zeros_ok = true;
    for (double N : {2.0, 3.0, 4.0, 5.5}) {
        const InequalitySpec s = make_spec(Family::nash, {.N = N});
        const double cl = optimal_constant(s).value;
        const double e = rel_err(quotient(s, extremizer(s)), cl);
        const double nu1 = 0.5 * N;
        const double j = bessel_zero(nu1, 1);
        // The zero is bracketed to 1e-10.
        const bool bracket = bessel_j(nu1, j - 1e-10) * bessel_j(nu1, j + 1e-10) <= 0.0;
        zeros_ok = zeros_ok && bracket;
        char key[32];
        std::snprintf(key, sizeof key, "N=%g", N);
        add(c, std::string(key) + " CL", cl);
        add(c, std::string(key) + " rel_err", e);
        add(c, std::string(key) + " zero_bracketed", bracket ? 1.0 : 0.0);
        worst = std::max(worst, e);
    }
    c.measured = worst;
    c.pass = worst <= c.tolerance && zeros_ok;
    if (!zeros_ok) c.note = "a Bessel zero is not bracketed to 1e-10";
    return c;
}

inline Criterion bessel_inequality()
{
    Criterion c = make_criterion("3", "bessel", "Bessel inequality and zero interlacing", -1e-12, "min_margin >=");
    double worst = infinity;
    bool interlace = true;
    for (double nu : {0.0, 0.5, 1.0, 2.5, 5.0}) {
        const BesselInequalityReport r = bessel_inequality_check(nu, 10000);
        const double a = bessel_zero(nu, 1), b = bessel_zero(nu + 1.0, 1), d = bessel_zero(nu, 2);
        const bool ok = a < b && b < d;
        interlace = interlace && ok;
        char key[32];
        std::snprintf(key, sizeof key, "nu=%g", nu);
        add(c, std::string(key) + " min_margin", r.worst_margin);
        add(c, std::string(key) + " interlaced", ok ? 1.0 : 0.0);
        worst = std::min(worst, r.worst_margin);
    }
    c.measured = worst;
    c.pass = worst >= c.tolerance && interlace;
    if (!interlace) c.note = "interlacing fails";
    return c;
}

inline Criterion log_sobolev_equality()
{
    Criterion c = make_criterion("4", "log_sobolev", "Log-Sobolev equality at the Gaussian", 1e-6, "max|defect| <=");
    double worst_eq = 0.0;
    double worst_pert = infinity;
    for (auto [p, N] : std::vector<std::pair<double, double>>{{2, 3}, {2, 4}, {3, 3}}) {
        const InequalitySpec s = make_spec(Family::log_sobolev, {.N = N, .p = p});
        const ExtremalProfile u = extremizer(s);
        const double d0 = quotient(s, u);
        worst_eq = std::max(worst_eq, std::abs(d0));
        char key[32];
        std::snprintf(key, sizeof key, "p=%g,N=%g", p, N);
        add(c, std::string(key) + " defect", d0);
        double case_min = infinity;
        for (double center : {0.5, 1.0, 1.5})
            for (double eps : {0.1, -0.1}) case_min = std::min(case_min, quotient(s, perturbed(u, center, 0.5, eps)));
        add(c, std::string(key) + " min_perturbed_defect", case_min);
        worst_pert = std::min(worst_pert, case_min);
    }
    c.measured = worst_eq;
    add(c, "min_perturbed_defect", worst_pert);
    c.pass = worst_eq <= c.tolerance && worst_pert >= 1e-4;
    if (worst_pert < 1e-4) c.note = "a perturbation has defect below 1e-4";
    return c;
}

inline Criterion faber_krahn_2()
{
    Criterion c = make_criterion("5", "faber_krahn", "Faber-Krahn II shooting", 1e-6, "max_rel_err <=");
    double worst = 0.0;
    for (double N : {2.0, 3.0, 4.0}) {
        const FaberKrahnResult fk = faber_krahn_shooting(2.0, N);
        const double closed = 1.0 / (bessel_zero(0.5 * N - 1.0, 1) * std::pow(unit_ball_volume(N), 1.0 / N));
        const double e = rel_err(fk.constant, closed);
        char key[32];
        std::snprintf(key, sizeof key, "p=2,N=%g", N);
        add(c, std::string(key) + " rel_err", e);
        worst = std::max(worst, e);
    }
    const double coarse = faber_krahn_shooting(3.0, 5.0, 1e-13, 2000).eigenvalue;
    const double fine = faber_krahn_shooting(3.0, 5.0, 1e-13, 4000).eigenvalue;
    const double change = rel_err(coarse, fine);
    add(c, "p=3,N=5 eigenvalue", fine);
    add(c, "p=3,N=5 halving_change", change);
    c.measured = std::max(worst, change);
    c.pass = c.measured <= c.tolerance;
    return c;
}

// Random non-increasing radial profile with an analytic derivative.
inline ExtremalProfile random_monotone_profile(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ExtremalProfile g;
    switch (kind(rng)) {
    case 0: {
        const double a = 0.5 + 1.5 * U(rng), b = 1.2 + 1.8 * U(rng);
        g.value = [=](double t) { return std::exp(-a * std::pow(t, b)); };
        g.derivative = [=](double t) { return -a * b * std::pow(t, b - 1.0) * std::exp(-a * std::pow(t, b)); };
        g.decay = DecayClass::gaussian;
        break;
    }
    case 1: {
        const double a = 0.5 + 1.5 * U(rng), m = 2.0 + 2.0 * U(rng);
        g.value = [=](double t) { return std::pow(1.0 + a * t * t, -m); };
        g.derivative = [=](double t) { return -2.0 * a * m * t * std::pow(1.0 + a * t * t, -m - 1.0); };
        g.decay = DecayClass::power;
        break;
    }
    default: {
        const double L = 0.5 + 2.5 * U(rng), b = 1.5 + 1.5 * U(rng), m = 1.5 + 1.5 * U(rng);
        g.value = [=](double t) { return std::pow(1.0 - std::pow(t / L, b), m); };
        g.derivative = [=](double t) {
            return -m * b / L * std::pow(t / L, b - 1.0) * std::pow(1.0 - std::pow(t / L, b), m - 1.0);
        };
        g.support = L;
        break;
    }
    }
    return g;
}

inline Criterion polya_szego_suite(std::uint64_t seed)
{
    Criterion c = make_criterion("6", "polya_szego", "Polya-Szego suite", -1e-5, "min_margin >=");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pdist(1.5, 3.5);
    std::vector<std::pair<ExtremalProfile, double>> profiles;
    for (int i = 0; i < 50; ++i) {
        ExtremalProfile g = random_monotone_profile(rng);
        profiles.emplace_back(std::move(g), pdist(rng));
    }
    const std::vector<RadialSpace> spaces = {euclidean_space(3.0), cone_space(3.0, 0.5), cone_space(2.5, 0.3),
                                             interpolated_space(3.0, 0.4, 1.0)};
    double worst = infinity;
    double worst_cone = 0.0;
    for (const RadialSpace& s : spaces) {
        const ModelCone cone = ModelCone::make(s.N);
        const bool exact = s.label.rfind("euclidean", 0) == 0 || s.label.rfind("cone", 0) == 0;
        double space_worst = infinity;
        for (const auto& [g, p] : profiles) {
            const PolyaSzegoReport r = polya_szego_check(g, s, p, cone);
            space_worst = std::min(space_worst, r.margin);
            if (exact) worst_cone = std::max(worst_cone, std::abs(r.margin));
        }
        add(c, s.label + " min_margin", space_worst);
        worst = std::min(worst, space_worst);
    }
    add(c, "max_abs_margin_exact_cones", worst_cone);
    c.measured = worst;
    c.pass = worst >= c.tolerance && worst_cone <= 1e-5;
    if (worst_cone > 1e-5) c.note = "equality fails on an exact cone";
    return c;
}

struct FamilyCase {
    InequalitySpec spec;
    std::string label;
};

inline std::vector<FamilyCase> closed_form_families()
{
    return {
        {make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0}), "gns1"},
        {make_spec(Family::sobolev, {.N = 3.0, .p = 2.0}), "sobolev"},
        {make_spec(Family::nash, {.N = 3.0}), "nash"},
        {make_spec(Family::log_sobolev, {.N = 3.0, .p = 2.0}), "log_sobolev"},
        {make_spec(Family::morrey, {.N = 3.0, .p = 4.0}), "morrey"},
        {make_spec(Family::faber_krahn_1, {.N = 3.0, .p = 2.0}), "faber_krahn_1"},
        {make_spec(Family::faber_krahn_2, {.N = 3.0, .p = 2.0}), "faber_krahn_2"},
    };
}

inline Criterion blowdown_self_consistency()
{
    Criterion c = make_criterion("7", "blowdown", "Blow-down self-consistency", 1e-3, "max|bound-avr| <=");
    double worst_cone = 0.0;
    double worst_interp = 0.0;
    bool verdicts = true;
    for (const FamilyCase& f : closed_form_families()) {
        const ExtremalProfile u0 = extremizer(f.spec);
        for (double a : {0.1, 0.25, 0.5, 1.0}) {
            const BlowdownReport r =
                end_to_end_blowdown(cone_space(f.spec.N, a), f.spec, u0, cd_constant(f.spec, a));
            const double e = std::abs(r.avr_bound - a);
            worst_cone = std::max(worst_cone, e);
            verdicts = verdicts && r.verdict == "consistent";
            char key[64];
            std::snprintf(key, sizeof key, "%s avr=%g bound", f.label.c_str(), a);
            add(c, key, r.avr_bound);
        }
        const RadialSpace s = interpolated_space(3.0, 0.4, 1.0);
        const BlowdownReport r = end_to_end_blowdown(s, f.spec, u0, cd_constant(f.spec, 0.4));
        const double e = std::max(std::abs(r.avr_bound - 0.4), std::abs(r.attained_avr - 0.4));
        worst_interp = std::max(worst_interp, e);
        verdicts = verdicts && r.verdict == "consistent";
        add(c, f.label + " interpolated bound", r.avr_bound);
        add(c, f.label + " interpolated attained_avr", r.attained_avr);
    }
    const InequalitySpec mt = make_spec(Family::moser_trudinger, {.N = 2.0});
    for (double a : {0.1, 0.25, 0.5, 1.0}) {
        const MtBlowdownReport r = mt_blowdown(cone_space(2.0, a), 2, cd_constant(mt, a));
        worst_cone = std::max(worst_cone, std::abs(r.avr_bound - a));
        char key[64];
        std::snprintf(key, sizeof key, "moser_trudinger avr=%g bound", a);
        add(c, key, r.avr_bound);
    }
    add(c, "max_err_exact_cones", worst_cone);
    add(c, "max_err_interpolated", worst_interp);
    c.measured = worst_cone;
    c.pass = worst_cone <= 1e-3 && worst_interp <= 5e-3 && verdicts;
    if (!verdicts) c.note = "a self-consistent run was not reported consistent";
    return c;
}

inline Criterion moser_trudinger_threshold()
{
    Criterion c = make_criterion("8", "moser_trudinger", "Moser-Trudinger divergence and threshold", 10.0,
                                 "min last/first below threshold >=");
    double min_growth = infinity;
    double max_spread = 0.0;
    for (double a : {0.5, 1.0}) {
        const RadialSpace s = cone_space(2.0, a);
        const double thr = mt_threshold(a, 2);
        const MtBlowdownReport below = mt_blowdown(s, 2, 0.9 * thr);
        const MtBlowdownReport at = mt_blowdown(s, 2, thr);
        char key[48];
        std::snprintf(key, sizeof key, "a=%g", a);
        add(c, std::string(key) + " 0.9x last/first", below.last_over_first);
        add(c, std::string(key) + " 1.0x tail_spread", at.tail_spread);
        add(c, std::string(key) + " 1.0x last/first", at.last_over_first);
        min_growth = std::min(min_growth, below.last_over_first);
        max_spread = std::max(max_spread, at.tail_spread);
    }
    double worst_norm = 0.0;
    const ModelCone cone = ModelCone::make(2.0);
    for (int k : {2, 8, 64}) {
        const double e = std::abs(std::pow(gradient_norm(moser_function(2, k), 2.0, cone), 2.0) - 1.0);
        worst_norm = std::max(worst_norm, e);
    }
    add(c, "max_bounded_tail_spread", max_spread);
    add(c, "max_moser_norm_err", worst_norm);
    c.measured = min_growth;
    c.pass = min_growth >= 10.0 && max_spread <= 1.5 && worst_norm <= 1e-10;
    if (min_growth < 10.0)
        c.note = "no growth below the threshold: with unit-energy test functions the functional stays bounded there";
    return c;
}

inline std::vector<ExtremalProfile> change_of_variables_functions(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<ExtremalProfile> hs;
    for (int i = 0; i < 10; ++i) {
        const double L = 0.5 + 2.5 * U(rng), m = 2.0 + 2.0 * U(rng);
        ExtremalProfile h;
        h.value = [=](double t) { return std::pow(1.0 - (t / L) * (t / L), m); };
        h.derivative = [=](double t) { return -2.0 * m * t / (L * L) * std::pow(1.0 - (t / L) * (t / L), m - 1.0); };
        h.support = L;
        hs.push_back(h);
    }
    for (int i = 0; i < 10; ++i) {
        const double a = 0.5 + 1.5 * U(rng), b = 1.0 + 2.0 * U(rng), w = 1.0 + U(rng);
        ExtremalProfile h;
        h.value = [=](double t) { return (1.0 + w * t) * std::exp(-a * std::pow(t, b)); };
        h.derivative = [=](double t) {
            const double e = std::exp(-a * std::pow(t, b));
            return w * e - (1.0 + w * t) * a * b * std::pow(t, b - 1.0) * e;
        };
        h.decay = DecayClass::gaussian;
        hs.push_back(h);
    }
    for (int i = 0; i < 10; ++i) {
        const double m = 2.5 + 3.0 * U(rng), a = 0.5 + U(rng);
        ExtremalProfile h;
        h.value = [=](double t) { return std::pow(1.0 + a * t * t, -m); };
        h.derivative = [=](double t) { return -2.0 * a * m * t * std::pow(1.0 + a * t * t, -m - 1.0); };
        h.decay = DecayClass::power;
        hs.push_back(h);
    }
    return hs;
}

inline Criterion change_of_variables(std::uint64_t seed)
{
    Criterion c = make_criterion("9", "change_of_variables", "Change of variables against direct quadrature", 1e-9,
                                 "max_rel_err <=");
    const std::vector<RadialSpace> spaces = {euclidean_space(3.0), cone_space(3.0, 0.5),
                                             interpolated_space(3.0, 0.4, 1.0), capped_space(3.0, 1.5)};
    const std::vector<ExtremalProfile> hs = change_of_variables_functions(seed);
    const char* classes[] = {"compact", "gaussian", "power"};
    double worst = 0.0;
    for (const RadialSpace& s : spaces) {
        double sw = 0.0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const double a = radial_integral(s, hs[i]);
            const double b = weighted_integral(s, hs[i]);
            const double e = std::abs(a - b) / std::max(std::abs(b), 1e-300);
            sw = std::max(sw, e);
            (void)classes;
        }
        add(c, s.label + " max_rel_err", sw);
        worst = std::max(worst, sw);
    }
    c.measured = worst;
    c.pass = worst <= c.tolerance;
    return c;
}

inline Criterion ckn_arithmetic(std::uint64_t seed)
{
    Criterion c = make_criterion("10", "ckn", "CKN and liminf/limsup arithmetic", 1e-12, "max_identity_err <=");
    double worst = 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double k = 0.2 + U(rng), cc = 0.2 + 2.0 * U(rng), th = 0.1 + 0.9 * U(rng), N = 2.0 + 4.0 * U(rng);
        const CknBound b = ckn_avr_bound(k, cc, th, N, 0.0, 0.0, 0.0);
        const double ref = avr_lower_bound(k, cc, th, N);
        worst = std::max(worst, b.degenerate ? infinity : std::abs(b.bound - ref) / ref);
        const double l = 0.05 + U(rng), p = 1.2 + 2.0 * U(rng);
        const double q = N * p / std::max(N - p, 0.5);
        const double lhs = liminf_limsup_bound(l, l, p, q, N, k, cc);
        const double rhs = l - avr_lower_bound(k, cc, 1.0, N);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    const InequalitySpec hpw = make_spec(Family::hpw, {.N = 3.0});
    const InequalitySpec hardy = make_spec(Family::hardy, {.N = 4.0, .p = 2.0});
    const bool hpw_deg = ckn_avr_bound(1.0, 1.0, hpw.theta, hpw.N, hpw.ckn_alpha, hpw.ckn_beta, hpw.ckn_gamma).degenerate;
    const bool hardy_deg =
        ckn_avr_bound(1.0, 1.0, hardy.theta, hardy.N, hardy.ckn_alpha, hardy.ckn_beta, hardy.ckn_gamma).degenerate;
    add(c, "hpw_degenerate", hpw_deg ? 1.0 : 0.0);
    add(c, "hardy_degenerate", hardy_deg ? 1.0 : 0.0);
    c.measured = worst;
    c.pass = worst <= c.tolerance && hpw_deg && hardy_deg;
    if (!hpw_deg || !hardy_deg) c.note = "a degenerate parameter set was not flagged";
    return c;
}

inline Criterion space_sanity()
{
    Criterion c = make_criterion("11", "spaces", "Space sanity", -1e-8, "min_isoperimetric_rel_margin >=");
    const std::vector<double> radii = log_grid(1e-3, 1e5, 20);
    const std::vector<RadialSpace> cd = {euclidean_space(3.0),           cone_space(2.5, 0.3),
                                         cone_space(3.0, 0.7),           interpolated_space(3.0, 0.4, 1.0),
                                         interpolated_space(2.0, 0.7, 0.9), capped_space(3.0, 1.0)};
    double worst_iso = infinity;
    bool bg = true;
    for (const RadialSpace& s : cd) {
        const IsoperimetricReport iso = isoperimetric_check(s, radii);
        const BishopGromovReport b = bishop_gromov_check(s, radii);
        worst_iso = std::min(worst_iso, iso.worst_relative);
        bg = bg && b.ok;
        add(c, s.label + " iso_rel_margin", iso.worst_relative);
        add(c, s.label + " bg_increase", b.worst_increase);
    }
    double cone_err = 0.0;
    for (double a : {0.3, 0.7, 1.0}) {
        const AvrEstimate e = estimate_avr(cone_space(3.0, a), default_avr_schedule());
        cone_err = std::max(cone_err, std::abs(e.value - a));
    }
    const AvrEstimate ie = estimate_avr(interpolated_space(3.0, 0.4, 1.0), default_avr_schedule());
    const double interp_err = std::abs(ie.value - 0.4);
    add(c, "avr_err_cones", cone_err);
    add(c, "avr_err_interpolated", interp_err);
    c.measured = worst_iso;
    c.pass = worst_iso >= c.tolerance && bg && cone_err <= 1e-4 && interp_err <= 1e-3;
    if (!bg) c.note = "Bishop-Gromov monotonicity fails";
    return c;
}

inline Criterion sharpness_sweeps(std::uint64_t seed)
{
    Criterion c = make_criterion("S", "sweeps", "Sharpness sweeps over perturbed candidates", 1.0 + 1e-6,
                                 "max quotient/K_opt <=");
    double worst = 0.0;
    bool ok = true;
    const std::vector<InequalitySpec> specs = {make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0}),
                                               make_spec(Family::nash, {.N = 3.0}),
                                               make_spec(Family::log_sobolev, {.N = 3.0, .p = 2.0})};
    for (const InequalitySpec& s : specs) {
        std::vector<Candidate> cands = default_candidates(s);
        for (Candidate& r : randomized_candidates(s, seed)) cands.push_back(std::move(r));
        const SweepReport r = sharpness_sweep(s, cands);
        ok = ok && r.ok;
        if (s.family == Family::log_sobolev) {
            add(c, "log_sobolev min_defect", r.best);
        } else {
            worst = std::max(worst, r.ratio);
            add(c, to_string(s.family) + " max_ratio", r.ratio);
        }
        for (std::size_t i = 0; i < r.labels.size(); ++i) add(c, to_string(s.family) + " " + r.labels[i], r.values[i]);
    }
    c.measured = worst;
    c.pass = ok && worst <= c.tolerance;
    return c;
}

} // namespace detail

// Runs the selected sections in a fixed order.
[[nodiscard]] inline std::vector<Criterion> run_criteria(const SuiteOptions& opt = {})
{
    for (const std::string& s : opt.only) {
        const auto& all = suite_sections();
        if (std::find(all.begin(), all.end(), s) == all.end()) throw DomainError("unknown report section: " + s);
    }
    const auto want = [&](const char* s) { return opt.only.empty() || opt.only.count(s) > 0; };
    std::vector<Criterion> out;
    if (want("constants")) out.push_back(detail::gns1_constants());
    if (want("nash")) out.push_back(detail::nash_constants());
    if (want("bessel")) out.push_back(detail::bessel_inequality());
    if (want("log_sobolev")) out.push_back(detail::log_sobolev_equality());
    if (want("faber_krahn")) out.push_back(detail::faber_krahn_2());
    if (want("polya_szego")) out.push_back(detail::polya_szego_suite(opt.seed));
    if (want("blowdown")) out.push_back(detail::blowdown_self_consistency());
    if (want("moser_trudinger")) out.push_back(detail::moser_trudinger_threshold());
    if (want("change_of_variables")) out.push_back(detail::change_of_variables(opt.seed));
    if (want("ckn")) out.push_back(detail::ckn_arithmetic(opt.seed));
    if (want("spaces")) out.push_back(detail::space_sanity());
    if (want("sweeps")) out.push_back(detail::sharpness_sweeps(opt.seed));
    return out;
}

} // namespace conesob
