#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conesob/acceptance.hpp"
#include "conesob/blowdown.hpp"
#include "conesob/catalog.hpp"
#include "conesob/rearrange.hpp"
#include "conesob/report.hpp"
#include "conesob/spaces.hpp"

using namespace conesob;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct Output {
    std::string format;
    std::string path;
};

// Thrown for bad flag combinations that CLI11 cannot express.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void emit(const Json& doc, const Output& out)
{
    const std::optional<Format> f = format_from_string(out.format);
    if (!f) throw UsageError("unknown format '" + out.format + "' (json, csv or text)");
    const std::string body = render(doc, *f);
    if (out.path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + out.path);
    file << body;
}

Family parse_family(const std::string& name)
{
    const std::optional<Family> f = family_from_string(name);
    if (!f) throw UsageError("unknown family '" + name + "'");
    return *f;
}

// "nan" marks an unset list so that the product below still has one entry.
std::vector<double> or_unset(const std::vector<double>& v)
{
    return v.empty() ? std::vector<double>{std::numeric_limits<double>::quiet_NaN()} : v;
}

RadialSpace resolve_space(std::string descriptor, std::optional<double> N)
{
    if (descriptor.rfind("csv:", 0) == 0 && descriptor.find("N=") == std::string::npos) {
        if (!N) throw UsageError("csv spaces need a dimension: add N= to the descriptor or pass --N");
        std::ostringstream ss;
        ss.precision(17);
        ss << descriptor << ",N=" << *N;
        descriptor = ss.str();
    }
    return parse_space(descriptor);
}

Json check_row(const std::string& name, double value, double target, double margin, bool pass)
{
    Json r;
    r["check"] = name;
    r["value"] = std::isfinite(value) ? Json(value) : Json(nullptr);
    r["target"] = std::isfinite(target) ? Json(target) : Json(nullptr);
    r["margin"] = std::isfinite(margin) ? Json(margin) : Json(nullptr);
    r["pass"] = pass;
    return r;
}

Json finish_checks(Json doc, const Json& rows)
{
    bool all = true;
    for (const Json& r : rows) all = all && r["pass"].get<bool>();
    doc["pass"] = all;
    doc["rows"] = rows;
    return doc;
}

// ------------------------------------------------------------- constants

struct ConstantsArgs {
    std::string family;
    std::vector<double> N, p, alpha, n;
};

int cmd_constants(const ConstantsArgs& a, const Output& out)
{
    const Family f = parse_family(a.family);
    std::vector<double> Ns = f == Family::moser_trudinger && !a.n.empty() ? a.n : a.N;
    if (Ns.empty()) throw UsageError("constants: --N (or --n for moser_trudinger) is required");
    std::vector<ConstantRow> rows;
    for (double N : Ns) {
        for (double p : or_unset(a.p)) {
            for (double alpha : or_unset(a.alpha)) {
                SpecParameters in{.N = N, .p = p, .alpha = alpha};
                if (f == Family::moser_trudinger) in.p = N;
                const InequalitySpec s = make_spec(f, in);
                ConstantRow row{to_string(f), {{f == Family::moser_trudinger ? "n" : "N", N}}, optimal_constant(s)};
                if (!std::isnan(p)) row.parameters.emplace_back("p", s.p);
                if (!std::isnan(alpha)) row.parameters.emplace_back("alpha", alpha);
                rows.push_back(std::move(row));
            }
        }
    }
    emit(constants_document(rows), out);
    return exit_ok;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string family;
    std::string prop;
    std::optional<double> N, p, alpha;
    std::vector<double> nu;
    std::string space;
    double tol = 1e-6;
    std::uint64_t seed = 7;
};

Json verify_family(const VerifyArgs& a)
{
    const Family f = parse_family(a.family);
    if (!a.N) throw UsageError("verify: --N is required");
    SpecParameters in{.N = *a.N, .p = a.p.value_or(std::numeric_limits<double>::quiet_NaN()),
                      .alpha = a.alpha.value_or(std::numeric_limits<double>::quiet_NaN())};
    if (f == Family::moser_trudinger) in.p = *a.N;
    const InequalitySpec s = make_spec(f, in);
    Json doc = make_document("verify");
    doc["family"] = to_string(f);
    doc["N"] = s.N;
    if (!std::isnan(s.p)) doc["p"] = s.p;
    Json rows = Json::array();

    if (f == Family::hardy) {
        const HardySweepReport h = hardy_sweep(s.p, s.N);
        for (std::size_t i = 0; i < h.eps.size(); ++i)
            rows.push_back(check_row("quotient eps=" + std::to_string(h.eps[i]).substr(0, 6), h.values[i], h.target,
                                     h.target - h.values[i], h.values[i] < h.target));
        rows.push_back(check_row("increasing as eps -> 0", h.sup, h.target, h.target - h.sup, h.monotone));
        doc["note"] = "sup approached, not attained";
        return finish_checks(doc, rows);
    }
    if (f == Family::moser_trudinger) {
        const int n = static_cast<int>(s.N);
        const double alpha_n = optimal_constant(s).value;
        const MtBlowdownReport r = mt_blowdown(euclidean_space(s.N), n, alpha_n);
        rows.push_back(check_row("bounded at alpha_n", r.tail_spread, 1.5, 1.5 - r.tail_spread, r.verdict == "bounded"));
        rows.push_back(check_row("unit energy", r.energies.back(), 1.0, 1.0 - r.energies.back(), r.normalized));
        return finish_checks(doc, rows);
    }

    const ExtremalProfile u = extremizer(s);
    const ConstantResult k = optimal_constant(s);
    if (f == Family::log_sobolev) {
        const double d = quotient(s, u);
        rows.push_back(check_row("defect at extremizer", d, 0.0, a.tol - std::abs(d), std::abs(d) <= a.tol));
    } else {
        const double q = quotient(s, u);
        const double ratio = q / k.value;
        rows.push_back(check_row("quotient / K_opt", ratio, 1.0, a.tol - std::abs(ratio - 1.0),
                                 std::abs(ratio - 1.0) <= a.tol));
    }
    if (f != Family::hpw) {
        std::vector<Candidate> cands = default_candidates(s);
        for (Candidate& c : randomized_candidates(s, a.seed)) cands.push_back(std::move(c));
        const SweepReport sw = sharpness_sweep(s, cands);
        const bool ls = f == Family::log_sobolev;
        rows.push_back(check_row(ls ? "min defect over candidates" : "max quotient / K_opt over candidates",
                                 ls ? sw.best : sw.ratio, ls ? 0.0 : 1.0, ls ? sw.best : 1.0 - sw.ratio, sw.ok));
    }
    const AsymptoticsReport asym = check_extremal_asymptotics(u, s);
    Json info = Json::array();
    for (const std::string& n : asym.notes) info.push_back(n);
    if (!asym.ok) info.push_back("extremizer fails " + asym.failed_clause + " (needed only for the blow-down)");
    doc["asymptotics"] = info;
    return finish_checks(doc, rows);
}

Json verify_prop(const VerifyArgs& a)
{
    Json doc = make_document("verify");
    doc["prop"] = a.prop;
    Json rows = Json::array();
    if (a.prop == "bessel") {
        const std::vector<double> nus = a.nu.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.5} : a.nu;
        for (double nu : nus) {
            const BesselInequalityReport r = bessel_inequality_check(nu, 10000);
            char name[64];
            std::snprintf(name, sizeof name, "J_nu(jt)/J_nu(j) <= t^nu, nu=%g", nu);
            rows.push_back(check_row(name, r.worst_t, conesob::nan, r.worst_margin, r.worst_margin >= -1e-12));
            const double z0 = bessel_zero(nu, 1), z1 = bessel_zero(nu + 1.0, 1), z2 = bessel_zero(nu, 2);
            std::snprintf(name, sizeof name, "zeros interlace, nu=%g", nu);
            rows.push_back(check_row(name, z1, conesob::nan, std::min(z1 - z0, z2 - z1), z0 < z1 && z1 < z2));
        }
        return finish_checks(doc, rows);
    }
    if (a.space.empty()) throw UsageError("verify --prop " + a.prop + " needs --space");
    const RadialSpace sp = resolve_space(a.space, a.N);
    doc["space"] = sp.label;
    if (a.prop == "polya_szego") {
        std::mt19937_64 rng(a.seed);
        const ModelCone cone = ModelCone::make(sp.N);
        const double p = a.p.value_or(2.0);
        for (int i = 0; i < 20; ++i) {
            const ExtremalProfile g = detail::random_monotone_profile(rng);
            const PolyaSzegoReport r = polya_szego_check(g, sp, p, cone);
            rows.push_back(check_row("profile " + std::to_string(i), r.lhs, r.rhs, r.margin, r.margin >= -1e-5));
        }
        return finish_checks(doc, rows);
    }
    if (a.prop == "isoperimetric") {
        const std::vector<double> radii = detail::log_grid(1e-3, 1e5, 20);
        const IsoperimetricReport iso = isoperimetric_check(sp, radii);
        const BishopGromovReport bg = bishop_gromov_check(sp, radii);
        rows.push_back(check_row("isoperimetric", iso.at, conesob::nan, iso.worst_relative, iso.ok));
        rows.push_back(check_row("Bishop-Gromov", conesob::nan, conesob::nan, -bg.worst_increase, bg.ok));
        return finish_checks(doc, rows);
    }
    throw UsageError("unknown property '" + a.prop + "' (bessel, polya_szego or isoperimetric)");
}

int cmd_verify(const VerifyArgs& a, const Output& out)
{
    if (a.family.empty() == a.prop.empty()) throw UsageError("verify: give exactly one of --family or --prop");
    const Json doc = a.family.empty() ? verify_prop(a) : verify_family(a);
    emit(doc, out);
    return doc["pass"].get<bool>() ? exit_ok : exit_failure;
}

// -------------------------------------------------------------- blowdown

struct BlowdownArgs {
    std::string space;
    std::string family;
    std::optional<double> N, p, alpha;
    std::string c = "auto";
    std::vector<double> radii;
};

// "auto", "<f>xcrit" or a number; crit is the sharp value on the space.
double resolve_constant(const std::string& spec, double crit)
{
    if (spec == "auto") return crit;
    const auto x = spec.find("xcrit");
    try {
        std::size_t used = 0;
        if (x != std::string::npos && x + 5 == spec.size()) {
            const double f = std::stod(spec.substr(0, x), &used);
            if (used != x) throw std::invalid_argument(spec);
            return f * crit;
        }
        const double v = std::stod(spec, &used);
        if (used != spec.size()) throw std::invalid_argument(spec);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--c expects auto, <factor>xcrit or a number, got '" + spec + "'");
    }
}

int cmd_blowdown(const BlowdownArgs& a, const Output& out)
{
    const RadialSpace sp = resolve_space(a.space, a.N);
    const Family f = parse_family(a.family);
    const std::vector<double> radii = a.radii.empty() ? default_blowdown_radii() : a.radii;
    if (f == Family::moser_trudinger) {
        const int n = static_cast<int>(std::lround(sp.N));
        if (std::abs(sp.N - n) > 1e-12) throw UsageError("moser_trudinger needs an integer dimension");
        const double c = resolve_constant(a.c, mt_threshold(sp.avr, n));
        const MtBlowdownReport r = mt_blowdown(sp, n, c, default_moser_schedule(), radii);
        emit(to_json(r), out);
        if (!out.path.empty()) std::printf("avr_bound=%.6g verdict=%s\n", r.avr_bound, r.verdict.c_str());
        return exit_ok;
    }
    SpecParameters in{.N = sp.N, .p = a.p.value_or(std::numeric_limits<double>::quiet_NaN()),
                      .alpha = a.alpha.value_or(std::numeric_limits<double>::quiet_NaN())};
    const InequalitySpec s = make_spec(f, in);
    const bool needs_crit = a.c == "auto" || a.c.find("xcrit") != std::string::npos;
    const double c = resolve_constant(a.c, needs_crit ? cd_constant(s, sp.avr) : 1.0);
    const BlowdownReport r = end_to_end_blowdown(sp, s, extremizer(s), c, radii);
    emit(to_json(r), out);
    if (!out.path.empty()) std::printf("avr_bound=%.6g verdict=%s\n", r.avr_bound, r.verdict.c_str());
    return r.verdict == "violated" ? exit_failure : exit_ok;
}

// ------------------------------------------------------------- rearrange

struct RearrangeArgs {
    std::string space;
    std::string profile;
    std::optional<double> N;
    double p = 2.0;
    std::optional<double> alpha;
};

int cmd_rearrange(const RearrangeArgs& a, const Output& out)
{
    const RadialSpace sp = resolve_space(a.space, a.N);
    ExtremalProfile g;
    if (a.profile.rfind("csv:", 0) == 0) {
        g = load_profile_csv(a.profile.substr(4));
    } else {
        const Family f = parse_family(a.profile);
        SpecParameters in{.N = sp.N, .p = a.p, .alpha = a.alpha.value_or(std::numeric_limits<double>::quiet_NaN())};
        if (f == Family::moser_trudinger) in.p = sp.N;
        g = extremizer(make_spec(f, in));
    }
    const ModelCone cone = ModelCone::make(sp.N);
    const SampledProfile star = rearrangement(g, sp, cone);
    const PolyaSzegoReport ps = polya_szego_check(g, sp, a.p, cone);
    const double pe = a.p;
    const CavalieriReport cav = cavalieri_check(g, sp, [pe](double x) { return std::pow(std::abs(x), pe); }, cone);

    Json doc = make_document("rearrangement");
    doc["space"] = sp.label;
    doc["profile"] = a.profile;
    doc["p"] = a.p;
    doc["monotone"] = star.monotone_flag;
    doc["gradient_space"] = ps.lhs;
    doc["gradient_cone"] = ps.rhs;
    doc["polya_szego_margin"] = ps.margin;
    doc["polya_szego_relative_margin"] = ps.relative_margin;
    doc["cavalieri_residual"] = cav.residual;
    const bool pass = ps.relative_margin >= -1e-5 && cav.residual <= 1e-6;
    doc["pass"] = pass;
    Json rows = Json::array();
    const std::size_t n = star.grid.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 200);
    for (std::size_t i = 0; i < n; i += stride) {
        Json row;
        row["s"] = star.grid[i];
        row["u_star"] = star.values[i];
        rows.push_back(row);
    }
    doc["rows"] = rows;
    emit(doc, out);
    return pass ? exit_ok : exit_failure;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    bool all = false;
    std::vector<std::string> only;
    std::uint64_t seed = 7;
};

int cmd_report(const ReportArgs& a, const Output& out)
{
    if (a.all && !a.only.empty()) throw UsageError("report: --all and --only are exclusive");
    SuiteOptions opt;
    opt.seed = a.seed;
    for (const std::string& s : a.only) opt.only.insert(s);
    for (const std::string& s : opt.only) {
        const auto& known = suite_sections();
        if (std::find(known.begin(), known.end(), s) == known.end()) throw UsageError("unknown section '" + s + "'");
    }
    const std::vector<Criterion> cs = run_criteria(opt);
    emit(criteria_document(cs, a.seed), out);
    for (const Criterion& c : cs)
        if (!c.pass) return exit_failure;
    return exit_ok;
}

void add_output(CLI::App* cmd, Output& out, const std::string& default_format)
{
    out.format = default_format;
    cmd->add_option("--format", out.format, "json, csv or text")->capture_default_str();
    cmd->add_option("--out", out.path, "write the report to a file instead of stdout");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sharp functional inequalities on radial spaces and their blow-down"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cone_sobolev 1.0");

    Output out_constants, out_verify, out_blowdown, out_rearrange, out_report;

    ConstantsArgs ca;
    CLI::App* constants = app.add_subcommand("constants", "Table of optimal constants");
    constants->add_option("--family", ca.family, "inequality family")->required();
    constants->add_option("--N", ca.N, "dimensions (comma list)")->delimiter(',');
    constants->add_option("--p", ca.p, "exponents (comma list)")->delimiter(',');
    constants->add_option("--alpha", ca.alpha, "GNS parameters (comma list)")->delimiter(',');
    constants->add_option("--n", ca.n, "Moser-Trudinger dimensions (comma list)")->delimiter(',');
    add_output(constants, out_constants, "text");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "Check sharpness of a family or a property");
    verify->add_option("--family", va.family, "inequality family");
    verify->add_option("--prop", va.prop, "bessel, polya_szego or isoperimetric");
    verify->add_option("--N", va.N);
    verify->add_option("--p", va.p);
    verify->add_option("--alpha", va.alpha);
    verify->add_option("--nu", va.nu, "Bessel orders (comma list)")->delimiter(',');
    verify->add_option("--space", va.space, "space descriptor, e.g. cone:N=3,a=0.5");
    verify->add_option("--tol", va.tol, "relative tolerance for quotient checks")->capture_default_str();
    verify->add_option("--seed", va.seed)->capture_default_str();
    add_output(verify, out_verify, "text");

    BlowdownArgs ba;
    CLI::App* blowdown = app.add_subcommand("blowdown", "Blow-down experiment and AVR bound");
    blowdown->add_option("--space", ba.space, "space descriptor, e.g. cone:N=3,a=0.5 or csv:vol.csv")->required();
    blowdown->add_option("--family", ba.family, "inequality family")->required();
    blowdown->add_option("--N", ba.N, "dimension for csv spaces");
    blowdown->add_option("--p", ba.p);
    blowdown->add_option("--alpha", ba.alpha);
    blowdown->add_option("--c", ba.c, "auto, <factor>xcrit or a number")->capture_default_str();
    blowdown->add_option("--radii", ba.radii, "blow-down radii (comma list)")->delimiter(',');
    add_output(blowdown, out_blowdown, "json");

    RearrangeArgs ra;
    CLI::App* rearrange = app.add_subcommand("rearrange", "Rearrangement onto the model cone");
    rearrange->add_option("--space", ra.space, "space descriptor")->required();
    rearrange->add_option("--profile", ra.profile, "family name or csv:path with t,u columns")->required();
    rearrange->add_option("--N", ra.N, "dimension for csv spaces");
    rearrange->add_option("--p", ra.p)->capture_default_str();
    rearrange->add_option("--alpha", ra.alpha);
    add_output(rearrange, out_rearrange, "text");

    ReportArgs pa;
    CLI::App* report = app.add_subcommand("report", "Run the acceptance criteria");
    report->add_flag("--all", pa.all, "every section (the default)");
    report->add_option("--only", pa.only, "sections (repeatable or comma list)")->delimiter(',');
    report->add_option("--seed", pa.seed)->capture_default_str();
    add_output(report, out_report, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return exit_usage;
    }

    try {
        if (*constants) return cmd_constants(ca, out_constants);
        if (*verify) return cmd_verify(va, out_verify);
        if (*blowdown) return cmd_blowdown(ba, out_blowdown);
        if (*rearrange) return cmd_rearrange(ra, out_rearrange);
        if (*report) return cmd_report(pa, out_report);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}
