#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "conesob/error.hpp"
#include "conesob/model_cone.hpp"
#include "conesob/quadrature.hpp"
#include "conesob/specfun.hpp"

namespace conesob {

enum class Family {
    gns1,
    gns2,
    sobolev,
    nash,
    log_sobolev,
    morrey,
    faber_krahn_1,
    faber_krahn_2,
    moser_trudinger,
    ckn,
    hpw,
    hardy
};

[[nodiscard]] inline std::string to_string(Family f)
{
    switch (f) {
    case Family::gns1: return "gns1";
    case Family::gns2: return "gns2";
    case Family::sobolev: return "sobolev";
    case Family::nash: return "nash";
    case Family::log_sobolev: return "log_sobolev";
    case Family::morrey: return "morrey";
    case Family::faber_krahn_1: return "faber_krahn_1";
    case Family::faber_krahn_2: return "faber_krahn_2";
    case Family::moser_trudinger: return "moser_trudinger";
    case Family::ckn: return "ckn";
    case Family::hpw: return "hpw";
    case Family::hardy: return "hardy";
    }
    return "unknown";
}

[[nodiscard]] inline std::optional<Family> family_from_string(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    std::replace(s.begin(), s.end(), '-', '_');
    static const std::map<std::string, Family> names = {
        {"gns1", Family::gns1},
        {"gns2", Family::gns2},
        {"sobolev", Family::sobolev},
        {"nash", Family::nash},
        {"log_sobolev", Family::log_sobolev},
        {"logsobolev", Family::log_sobolev},
        {"morrey", Family::morrey},
        {"faber_krahn_1", Family::faber_krahn_1},
        {"fk1", Family::faber_krahn_1},
        {"faber_krahn_2", Family::faber_krahn_2},
        {"fk2", Family::faber_krahn_2},
        {"moser_trudinger", Family::moser_trudinger},
        {"mt", Family::moser_trudinger},
        {"ckn", Family::ckn},
        {"hpw", Family::hpw},
        {"hardy", Family::hardy},
    };
    const auto it = names.find(s);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Raw parameters; which fields are read depends on the family.
struct SpecParameters {
    double N = nan;
    double p = nan;
    double alpha = nan;  // GNS interpolation parameter
    double q = nan;      // CKN only
    double r = nan;      // CKN only
    double theta = nan;  // CKN only
    double ckn_alpha = 0.0;
    double ckn_beta = 0.0;
    double ckn_gamma = 0.0;
};

struct InequalitySpec {
    Family family = Family::gns1;
    double N = nan;
    double p = nan;
    std::optional<double> q;
    std::optional<double> r;
    double theta = 1.0;
    double alpha_gns = nan;
    double ckn_alpha = 0.0;
    double ckn_beta = 0.0;
    double ckn_gamma = 0.0;
    double balance_residual = 0.0;
    std::string notes;

    [[nodiscard]] double p_conjugate() const { return p / (p - 1.0); }
    [[nodiscard]] double p_star() const { return p * N / (N - p); }
};

// Families where an AVR bound follows from the blow-down of the extremizer.
[[nodiscard]] inline bool has_support_measure(Family f)
{
    return f == Family::morrey || f == Family::faber_krahn_1 || f == Family::faber_krahn_2;
}

namespace detail {

inline double gns_balance_residual(double N, double p, double q, double r, double theta)
{
    return std::abs(1.0 / q - theta * (1.0 / p - 1.0 / N) - (1.0 - theta) / r);
}

inline double ckn_balance_residual(const InequalitySpec& s)
{
    const double lhs = 1.0 / *s.q - s.ckn_alpha / s.N;
    const double grad = s.theta * (1.0 / s.p - (1.0 + s.ckn_beta) / s.N);
    const double rest = s.theta < 1.0 ? (1.0 - s.theta) * (1.0 / *s.r - s.ckn_gamma / s.N) : 0.0;
    return std::abs(lhs - grad - rest);
}

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw DomainError("make_spec: " + what);
}

} // namespace detail

[[nodiscard]] inline InequalitySpec make_spec(Family family, const SpecParameters& in)
{
    InequalitySpec s;
    s.family = family;
    s.N = in.N;
    detail::require(s.N > 1.0, "N must exceed 1");
    const double N = s.N;

    switch (family) {
    case Family::gns1:
    case Family::sobolev: {
        s.p = in.p;
        detail::require(s.p > 1.0 && s.p < N, "requires 1 < p < N");
        const double amax = N / (N - s.p);
        double a = family == Family::sobolev ? amax : in.alpha;
        detail::require(a > 1.0 && a <= amax * (1.0 + 1e-12), "GNS1 requires 1 < alpha <= N/(N-p)");
        a = std::min(a, amax);
        s.alpha_gns = a;
        const double ps = s.p_star();
        s.q = a * s.p;
        s.r = a * (s.p - 1.0) + 1.0;
        s.theta = std::abs(a - amax) <= 1e-12 * amax ? 1.0 : ps * (a - 1.0) / (a * s.p * (ps - a * s.p + a - 1.0));
        s.balance_residual = detail::gns_balance_residual(N, s.p, *s.q, *s.r, s.theta);
        break;
    }
    case Family::gns2: {
        s.p = in.p;
        detail::require(s.p > 1.0 && s.p < N, "requires 1 < p < N");
        detail::require(in.alpha > 0.0 && in.alpha < 1.0, "GNS2 requires 0 < alpha < 1");
        const double a = in.alpha;
        s.alpha_gns = a;
        const double ps = s.p_star();
        s.q = a * (s.p - 1.0) + 1.0;
        s.r = a * s.p;
        s.theta = ps * (1.0 - a) / ((ps - a * s.p) * (a * s.p + 1.0 - a));
        s.balance_residual = detail::gns_balance_residual(N, s.p, *s.q, *s.r, s.theta);
        break;
    }
    case Family::nash:
        s.p = 2.0;
        s.q = 2.0;
        s.r = 1.0;
        s.theta = N / (N + 2.0);
        s.balance_residual = detail::gns_balance_residual(N, 2.0, 2.0, 1.0, s.theta);
        break;
    case Family::log_sobolev:
        s.p = in.p;
        detail::require(s.p > 1.0, "requires p > 1");
        s.q = s.p;
        s.notes = "entropy functional; volume exponent N/p";
        break;
    case Family::morrey:
        s.p = in.p;
        detail::require(s.p > N, "MORREY requires p > N");
        s.notes = "sup norm with support measure (r -> 0 limit)";
        break;
    case Family::faber_krahn_1:
        s.p = in.p;
        detail::require(s.p > 1.0 && s.p < N, "requires 1 < p < N");
        s.q = 1.0;
        s.notes = "L1 norm with support measure (alpha -> 0 limit of GNS2)";
        break;
    case Family::faber_krahn_2:
        s.p = in.p;
        detail::require(s.p > 1.0 && s.p < N, "FABER_KRAHN_2 requires 1 < p < N");
        s.q = s.p;
        s.notes = "first Dirichlet p-eigenvalue on the unit ball";
        break;
    case Family::moser_trudinger: {
        const double n = N;
        detail::require(n >= 2.0 && std::floor(n) == n, "MOSER_TRUDINGER requires integer n >= 2");
        s.p = n;
        break;
    }
    case Family::ckn:
        s.p = in.p;
        s.q = in.q;
        s.r = in.r;
        s.theta = in.theta;
        s.ckn_alpha = in.ckn_alpha;
        s.ckn_beta = in.ckn_beta;
        s.ckn_gamma = in.ckn_gamma;
        detail::require(s.p > 1.0, "requires p > 1");
        detail::require(*s.q > 0.0, "requires q > 0");
        detail::require(s.theta > 0.0 && s.theta <= 1.0, "requires theta in (0,1]");
        detail::require(s.theta == 1.0 || *s.r > 0.0, "requires r > 0 when theta < 1");
        s.balance_residual = detail::ckn_balance_residual(s);
        break;
    case Family::hpw:
        s.p = 2.0;
        s.q = 2.0;
        s.r = 2.0;
        s.theta = 0.5;
        s.ckn_gamma = -1.0;
        s.balance_residual = detail::ckn_balance_residual(s);
        break;
    case Family::hardy:
        s.p = in.p;
        detail::require(s.p > 1.0 && s.p < N, "HARDY requires 1 < p < N");
        s.q = s.p;
        s.ckn_alpha = 1.0;
        s.balance_residual = detail::ckn_balance_residual(s);
        break;
    }
    if (s.balance_residual > 1e-12)
        throw DomainError("make_spec: balance condition violated, residual " + std::to_string(s.balance_residual));
    return s;
}

// Moser-Trudinger critical exponent alpha_n = n sigma_{n-1}^{1/(n-1)}.
[[nodiscard]] inline double mt_critical_exponent(int n)
{
    const double sigma = n * unit_ball_volume(n);
    return n * std::pow(sigma, 1.0 / (n - 1.0));
}

enum class Provenance { closed_form, quadrature_of_extremizer, shooting, critical_exponent };

[[nodiscard]] inline std::string to_string(Provenance p)
{
    switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::quadrature_of_extremizer: return "quadrature_of_extremizer";
    case Provenance::shooting: return "shooting";
    case Provenance::critical_exponent: return "critical_exponent";
    }
    return "unknown";
}

struct ConstantResult {
    double value = nan;
    Provenance provenance = Provenance::closed_form;
    std::map<std::string, double> components;
};

// ---------------------------------------------------------------- profiles

namespace detail {

// (1 + sign t^{p'})^m with sign = +1 (GNS1) or -1 (GNS2, truncated at t = 1).
inline ExtremalProfile barenblatt(double pc, double m, double sign)
{
    ExtremalProfile u;
    u.value = [=](double t) { return std::pow(1.0 + sign * std::pow(t, pc), m); };
    u.derivative = [=](double t) {
        if (t == 0.0) return 0.0;
        return sign * m * pc * std::pow(t, pc - 1.0) * std::pow(1.0 + sign * std::pow(t, pc), m - 1.0);
    };
    u.second = [=](double t) {
        const double s = 1.0 + sign * std::pow(t, pc);
        const double a = (pc - 1.0) * std::pow(t, pc - 2.0) * std::pow(s, m - 1.0);
        const double b = (m - 1.0) * sign * pc * std::pow(t, 2.0 * pc - 2.0) * std::pow(s, m - 2.0);
        return sign * m * pc * (a + b);
    };
    return u;
}

} // namespace detail

[[nodiscard]] inline ExtremalProfile moser_function(int n, int k)
{
    if (n < 2) throw DomainError("moser_function: n must be >= 2");
    if (k < 2) throw DomainError("moser_function: k must be >= 2");
    const double sigma = n * unit_ball_volume(n);
    const double s = std::pow(sigma, -1.0 / n);
    const double lk = std::log(static_cast<double>(k));
    const double inner = 1.0 / k;
    ExtremalProfile w;
    w.value = [=](double t) {
        if (t < inner) return s * std::pow(lk, (n - 1.0) / n);
        if (t <= 1.0) return s * std::log(1.0 / t) / std::pow(lk, 1.0 / n);
        return 0.0;
    };
    w.derivative = [=](double t) {
        if (t < inner || t > 1.0) return 0.0;
        return -s / (std::pow(lk, 1.0 / n) * t);
    };
    w.second = [=](double t) {
        if (t < inner || t > 1.0) return 0.0;
        return s / (std::pow(lk, 1.0 / n) * t * t);
    };
    w.support = 1.0;
    w.decay = DecayClass::compact;
    w.breakpoints = {inner};
    w.normalization = "Moser function w_k, k=" + std::to_string(k);
    return w;
}

struct FaberKrahnResult {
    double eigenvalue = nan;
    double constant = nan;
    int steps = 0;
    int bisections = 0;
    ExtremalProfile profile;
    std::vector<double> grid;
    std::vector<double> values;
};

namespace detail {

struct ShootState {
    double u, w;
};

// Integrates the radial p-Laplacian eigen-ODE from rho = eps to 1 on a grid
// clustered at the origin. Returns grid, u and u'.
inline void shoot(double p, double N, double lambda, int steps, std::vector<double>& rho, std::vector<double>& u,
                  std::vector<double>& du)
{
    constexpr double eps = 1e-8;
    const double pc = p / (p - 1.0);
    const auto phi_inv = [p](double y) { return std::copysign(std::pow(std::abs(y), 1.0 / (p - 1.0)), y); };
    const auto rhs = [&](double r, const ShootState& s) {
        const double rn1 = std::pow(r, N - 1.0);
        const double up = phi_inv(s.w / rn1);
        const double w_prime = -lambda * std::copysign(std::pow(std::abs(s.u), p - 1.0), s.u) * rn1;
        return ShootState{up, w_prime};
    };
    rho.assign(steps + 1, 0.0);
    u.assign(steps + 1, 0.0);
    du.assign(steps + 1, 0.0);
    for (int i = 0; i <= steps; ++i) {
        const double x = static_cast<double>(i) / steps;
        rho[i] = eps + (1.0 - eps) * x * x;
    }
    // Series start: u = 1 - c rho^{p'}, flux w = -lambda rho^N / N.
    const double c = std::pow(lambda / N, 1.0 / (p - 1.0)) / pc;
    ShootState s{1.0 - c * std::pow(eps, pc), -lambda * std::pow(eps, N) / N};
    u[0] = s.u;
    du[0] = rhs(eps, s).u;
    for (int i = 0; i < steps; ++i) {
        const double r = rho[i];
        const double h = rho[i + 1] - r;
        const ShootState k1 = rhs(r, s);
        const ShootState k2 = rhs(r + 0.5 * h, {s.u + 0.5 * h * k1.u, s.w + 0.5 * h * k1.w});
        const ShootState k3 = rhs(r + 0.5 * h, {s.u + 0.5 * h * k2.u, s.w + 0.5 * h * k2.w});
        const ShootState k4 = rhs(r + h, {s.u + h * k3.u, s.w + h * k3.w});
        s.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        s.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
        if (!std::isfinite(s.u) || !std::isfinite(s.w)) throw ConvergenceError("faber_krahn_shooting: stiff-step failure");
        u[i + 1] = s.u;
        du[i + 1] = rhs(rho[i + 1], s).u;
    }
}

inline bool has_zero(const std::vector<double>& u)
{
    return std::any_of(u.begin(), u.end(), [](double v) { return v <= 0.0; });
}

// Cubic Hermite interpolant through (x_i, y_i, dy_i).
inline ExtremalProfile hermite_profile(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
{
    struct Data {
        std::vector<double> x, y, dy;
    };
    auto d = std::make_shared<Data>(Data{std::move(x), std::move(y), std::move(dy)});
    const auto locate = [d](double t) {
        const auto it = std::upper_bound(d->x.begin(), d->x.end(), t);
        std::size_t i = it == d->x.begin() ? 0 : static_cast<std::size_t>(it - d->x.begin()) - 1;
        return std::min(i, d->x.size() - 2);
    };
    ExtremalProfile p;
    p.value = [d, locate](double t) {
        const std::size_t i = locate(t);
        const double h = d->x[i + 1] - d->x[i];
        const double s = (t - d->x[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return h00 * d->y[i] + h10 * h * d->dy[i] + h01 * d->y[i + 1] + h11 * h * d->dy[i + 1];
    };
    p.derivative = [d, locate](double t) {
        const std::size_t i = locate(t);
        const double h = d->x[i + 1] - d->x[i];
        const double s = (t - d->x[i]) / h;
        const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
        const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
        return (d00 * d->y[i] + d01 * d->y[i + 1]) / h + d10 * d->dy[i] + d11 * d->dy[i + 1];
    };
    return p;
}

} // namespace detail

// First Dirichlet eigenpair of the radial p-Laplacian on [0,1] with weight
// rho^{N-1}; bisection on lambda until the shooting solution just reaches
// its first zero at rho = 1.
[[nodiscard]] inline FaberKrahnResult faber_krahn_shooting(double p, double N, double tolerance = 1e-13,
                                                           int steps = 4000)
{
    if (!(p > 1.0) || !(N > 1.0)) throw DomainError("faber_krahn_shooting: requires p > 1, N > 1");
    if (!(tolerance > 0.0) || steps < 10) throw DomainError("faber_krahn_shooting: invalid tolerance or steps");
    std::vector<double> rho, u, du;
    double lo = 1.0;
    double hi = 1.0;
    detail::shoot(p, N, hi, steps, rho, u, du);
    int guard = 0;
    if (detail::has_zero(u)) {
        while (detail::has_zero(u)) {
            if (++guard > 200) throw ConvergenceError("faber_krahn_shooting: bracket not found");
            lo *= 0.5;
            detail::shoot(p, N, lo, steps, rho, u, du);
        }
        hi = 2.0 * lo;
    } else {
        while (!detail::has_zero(u)) {
            if (++guard > 200) throw ConvergenceError("faber_krahn_shooting: bracket not found");
            lo = hi;
            hi *= 2.0;
            detail::shoot(p, N, hi, steps, rho, u, du);
        }
    }
    int iters = 0;
    while (hi - lo > tolerance * hi) {
        if (++iters > 300) throw ConvergenceError("faber_krahn_shooting: bisection did not converge");
        const double mid = 0.5 * (lo + hi);
        detail::shoot(p, N, mid, steps, rho, u, du);
        // The sign of u(1) decides; a zero strictly inside (0,1) also means
        // the parameter is above the first eigenvalue.
        if (detail::has_zero(u))
            hi = mid;
        else
            lo = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    detail::shoot(p, N, lambda, steps, rho, u, du);

    FaberKrahnResult res;
    res.eigenvalue = lambda;
    res.constant = std::pow(lambda, -1.0 / p) / std::pow(unit_ball_volume(N), 1.0 / N);
    res.steps = steps;
    res.bisections = iters;

    // Anchor at the origin and pin u(1) = 0 (the residual is below the
    // bisection tolerance).
    std::vector<double> x{0.0}, y{1.0}, dy{0.0};
    for (std::size_t i = 0; i < rho.size(); ++i) {
        x.push_back(rho[i]);
        y.push_back(std::max(u[i], 0.0));
        dy.push_back(du[i]);
    }
    y.back() = 0.0;
    res.grid = x;
    res.values = y;
    res.profile = detail::hermite_profile(x, y, dy);
    res.profile.second = [p, N, lambda, prof = res.profile](double t) {
        const double up = prof.derivative(t);
        if (t <= 0.0 || up == 0.0) return 0.0;
        const double uu = std::max(prof.value(t), 0.0);
        const double a = std::pow(std::abs(up), p - 2.0);
        return (-lambda * std::pow(uu, p - 1.0) - (N - 1.0) * a * up / t) / ((p - 1.0) * a);
    };
    res.profile.support = 1.0;
    res.profile.decay = DecayClass::compact;
    res.profile.normalization = "shooting solution, u(0)=1";
    return res;
}

// Extremal profile of the family. MOSER_TRUDINGER returns the Moser
// function w_k.
[[nodiscard]] inline ExtremalProfile extremizer(const InequalitySpec& s, int moser_k = 8)
{
    const double N = s.N;
    const double p = s.p;
    ExtremalProfile u;
    switch (s.family) {
    case Family::gns1:
    case Family::sobolev: {
        const double pc = s.p_conjugate();
        const double a = s.alpha_gns;
        u = detail::barenblatt(pc, 1.0 / (1.0 - a), 1.0);
        u.decay = DecayClass::power;
        u.convexity_onset = std::pow((a - 1.0) / (a * (p - 1.0) + 1.0), 1.0 / pc);
        u.normalization = "(1+t^{p'})^{1/(1-alpha)}";
        return u;
    }
    case Family::gns2:
    case Family::faber_krahn_1: {
        const double pc = s.p_conjugate();
        const double m = s.family == Family::gns2 ? 1.0 / (1.0 - s.alpha_gns) : 1.0;
        u = detail::barenblatt(pc, m, -1.0);
        u.support = 1.0;
        u.normalization = "(1-t^{p'})_+^{m}";
        return u;
    }
    case Family::morrey: {
        const double a = (p - N) / (p - 1.0);
        u.value = [a](double t) { return 1.0 - std::pow(t, a); };
        u.derivative = [a](double t) { return -a * std::pow(t, a - 1.0); };
        u.second = [a](double t) { return -a * (a - 1.0) * std::pow(t, a - 2.0); };
        u.support = 1.0;
        u.normalization = "(1-t^{(p-N)/(p-1)})_+";
        return u;
    }
    case Family::nash: {
        const double nu = 0.5 * N - 1.0;
        const double j = bessel_zero(nu + 1.0, 1);
        const double jn = bessel_j(nu, j);
        const double jnu = std::pow(j, nu);
        u.value = [=](double t) { return 1.0 - jnu * bessel_j_scaled(nu, j * t) / jn; };
        u.derivative = [=](double t) { return jnu * j * j * t * bessel_j_scaled(nu + 1.0, j * t) / jn; };
        u.second = [=](double t) {
            const double x = j * t;
            return jnu * j * j * (bessel_j_scaled(nu + 1.0, x) - x * x * bessel_j_scaled(nu + 2.0, x)) / jn;
        };
        u.support = 1.0;
        u.normalization = "1 - t^{-nu} J_nu(j_{nu+1} t) / J_nu(j_{nu+1})";
        return u;
    }
    case Family::faber_krahn_2: {
        if (p == 2.0) {
            const double nu = 0.5 * N - 1.0;
            const double j = bessel_zero(nu, 1);
            const double c0 = bessel_j_scaled(nu, 0.0);
            u.value = [=](double t) { return bessel_j_scaled(nu, j * t) / c0; };
            u.derivative = [=](double t) { return -j * j * t * bessel_j_scaled(nu + 1.0, j * t) / c0; };
            u.second = [=](double t) {
                const double x = j * t;
                return -j * j * (bessel_j_scaled(nu + 1.0, x) - x * x * bessel_j_scaled(nu + 2.0, x)) / c0;
            };
            u.support = 1.0;
            u.normalization = "t^{-nu} J_nu(j_nu t), u(0)=1";
            return u;
        }
        return faber_krahn_shooting(p, N).profile;
    }
    case Family::log_sobolev: {
        const double pc = s.p_conjugate();
        const double omega = unit_ball_volume(N);
        const double c = std::pow(omega * gamma(N / pc + 1.0), -1.0 / p);
        const double k = pc / p;
        u.value = [=](double t) { return c * std::exp(-std::pow(t, pc) / p); };
        u.derivative = [=](double t) { return -k * std::pow(t, pc - 1.0) * c * std::exp(-std::pow(t, pc) / p); };
        u.second = [=](double t) {
            const double e = c * std::exp(-std::pow(t, pc) / p);
            return k * e * (k * std::pow(t, 2.0 * pc - 2.0) - (pc - 1.0) * std::pow(t, pc - 2.0));
        };
        u.decay = DecayClass::gaussian;
        u.convexity_onset = 1.0;
        u.normalization = "Gaussian with unit L^p norm";
        return u;
    }
    case Family::hpw:
        u.value = [](double t) { return std::exp(-t * t); };
        u.derivative = [](double t) { return -2.0 * t * std::exp(-t * t); };
        u.second = [](double t) { return (4.0 * t * t - 2.0) * std::exp(-t * t); };
        u.decay = DecayClass::gaussian;
        u.convexity_onset = std::sqrt(0.5);
        u.normalization = "exp(-t^2)";
        return u;
    case Family::moser_trudinger: return moser_function(static_cast<int>(N), moser_k);
    case Family::hardy: throw DomainError("extremizer: the Hardy quotient has no extremal function");
    case Family::ckn: throw DomainError("extremizer: no closed-form extremizer for general CKN parameters");
    }
    throw DomainError("extremizer: unsupported family");
}

[[nodiscard]] inline AsymptoticExponents asymptotic_exponents(const InequalitySpec& s)
{
    AsymptoticExponents ex{.p = s.p, .q = {}, .r = {}};
    if (!has_support_measure(s.family)) ex.q = s.q;
    if (s.theta < 1.0) ex.r = s.r;
    return ex;
}

[[nodiscard]] inline AsymptoticsReport check_extremal_asymptotics(const ExtremalProfile& u, const InequalitySpec& s)
{
    return check_extremal_asymptotics(u, s.N, asymptotic_exponents(s));
}

// --------------------------------------------------------------- quotients

namespace detail {

// || u t^{-a} ||_q on the cone.
inline double weighted_norm(const ExtremalProfile& u, double q, double a, const ModelCone& cone, bool gradient)
{
    const auto f = [&](double t) {
        const double v = gradient ? u.du(t) : u.u(t);
        if (v == 0.0) return 0.0;
        const double w = a == 0.0 ? 1.0 : std::pow(t, -a);
        return std::pow(std::abs(v) * w, q);
    };
    return std::pow(cone_integral(cone, f, u), 1.0 / q);
}

inline double support_measure(const ExtremalProfile& u, const ModelCone& cone)
{
    if (!u.compact()) throw DomainError("quotient: support-measure functionals need a declared finite support");
    return cone_volume(cone, u.support);
}

inline double sup_abs(const ExtremalProfile& u)
{
    const double L = u.compact() ? u.support : 100.0;
    double m = std::abs(u.u(0.0));
    for (int i = 1; i < 4000; ++i) m = std::max(m, std::abs(u.u(L * i / 4000.0)));
    return m;
}

inline void nonzero(double v, const char* what)
{
    if (!(v > 0.0)) throw DomainError(std::string("quotient: zero denominator (") + what + ")");
    if (!std::isfinite(v)) throw NonFiniteError(std::string("quotient: non-finite norm (") + what + ")");
}

} // namespace detail

// Entropy-type pieces for log-Sobolev: P = ||u||_p^p, G = ||u'||_p^p,
// E = int u^p log u^p dm.
struct EntropyParts {
    double P, G, E;
};

[[nodiscard]] inline EntropyParts entropy_parts(const ExtremalProfile& u, double p, const ModelCone& cone)
{
    const double P = cone_integral(cone, [&](double t) { return std::pow(std::abs(u.u(t)), p); }, u);
    const double G = cone_integral(cone, [&](double t) { return std::pow(std::abs(u.du(t)), p); }, u);
    const double E = cone_integral(
        cone,
        [&](double t) {
            const double v = std::pow(std::abs(u.u(t)), p);
            return v > 0.0 ? v * std::log(v) : 0.0;
        },
        u);
    return {P, G, E};
}

[[nodiscard]] inline double log_sobolev_constant(double p, double N)
{
    const double pc = p / (p - 1.0);
    return (p / N) * std::pow((p - 1.0) / std::numbers::e, p - 1.0) *
           std::pow(unit_ball_volume(N) * gamma(N / pc + 1.0), -p / N);
}

// Family functional; for LOG_SOBOLEV the signed defect (>= 0 when the
// inequality holds).
[[nodiscard]] inline double quotient(const InequalitySpec& s, const ExtremalProfile& u)
{
    const ModelCone cone = ModelCone::make(s.N);
    const double p = s.p;
    switch (s.family) {
    case Family::gns1:
    case Family::gns2:
    case Family::sobolev:
    case Family::nash: {
        const double a = lp_norm(u, *s.q, cone);
        const double g = gradient_norm(u, p, cone);
        detail::nonzero(g, "||u'||_p");
        double den = std::pow(g, s.theta);
        if (s.theta < 1.0) {
            // ||u||_r^{1-theta} taken from the integral directly: for small r
            // the norm itself overflows.
            const double b = cone_integral(cone, [&](double t) { return std::pow(std::abs(u.u(t)), *s.r); }, u);
            detail::nonzero(b, "||u||_r");
            den *= std::pow(b, (1.0 - s.theta) / *s.r);
        }
        return a / den;
    }
    case Family::ckn:
    case Family::hpw:
    case Family::hardy: {
        const double a = detail::weighted_norm(u, *s.q, s.ckn_alpha, cone, false);
        const double g = detail::weighted_norm(u, p, s.ckn_beta, cone, true);
        detail::nonzero(g, "weighted ||u'||_p");
        double den = std::pow(g, s.theta);
        if (s.theta < 1.0) {
            const double b = detail::weighted_norm(u, *s.r, s.ckn_gamma, cone, false);
            detail::nonzero(b, "weighted ||u||_r");
            den *= std::pow(b, 1.0 - s.theta);
        }
        return a / den;
    }
    case Family::morrey: {
        const double g = gradient_norm(u, p, cone);
        detail::nonzero(g, "||u'||_p");
        return detail::sup_abs(u) / (g * std::pow(detail::support_measure(u, cone), 1.0 / s.N - 1.0 / p));
    }
    case Family::faber_krahn_1: {
        const double g = gradient_norm(u, p, cone);
        detail::nonzero(g, "||u'||_p");
        return lp_norm(u, 1.0, cone) / (g * std::pow(detail::support_measure(u, cone), 1.0 - 1.0 / s.p_star()));
    }
    case Family::faber_krahn_2: {
        const double g = gradient_norm(u, p, cone);
        detail::nonzero(g, "||u'||_p");
        return lp_norm(u, p, cone) / (g * std::pow(detail::support_measure(u, cone), 1.0 / s.N));
    }
    case Family::log_sobolev: {
        const EntropyParts e = entropy_parts(u, p, cone);
        detail::nonzero(e.P, "||u||_p");
        detail::nonzero(e.G, "||u'||_p");
        const double entropy = e.E / e.P - std::log(e.P);
        return (s.N / p) * std::log(log_sobolev_constant(p, s.N) * e.G / e.P) - entropy;
    }
    case Family::moser_trudinger: throw DomainError("quotient: use mt_functional for MOSER_TRUDINGER");
    }
    throw DomainError("quotient: unsupported family");
}

[[nodiscard]] inline ConstantResult optimal_constant(const InequalitySpec& s)
{
    const double N = s.N;
    const double p = s.p;
    const double omega = unit_ball_volume(N);
    ConstantResult res;
    switch (s.family) {
    case Family::gns1:
    case Family::sobolev: {
        const double a = s.alpha_gns;
        const double pc = s.p_conjugate();
        const double th = s.theta;
        const double A = (a * (p - 1.0) + 1.0) / (a - 1.0);
        const double B = beta(A - N / pc, N / pc);
        res.value = std::pow((a - 1.0) / pc, th) * std::pow(pc / N, th / p + th / N) *
                    std::pow(A - N / pc, 1.0 / (a * p)) * std::pow(A, th / p - 1.0 / (a * p)) /
                    std::pow(omega * B, th / N);
        res.components = {{"theta", th}, {"beta", B}};
        return res;
    }
    case Family::gns2: {
        const ModelCone cone = ModelCone::make(N);
        const ExtremalProfile u = extremizer(s);
        res.value = quotient(s, u);
        res.provenance = Provenance::quadrature_of_extremizer;
        res.components = {{"norm_q", lp_norm(u, *s.q, cone)},
                          {"norm_grad_p", gradient_norm(u, p, cone)},
                          {"norm_r", lp_norm(u, *s.r, cone)}};
        return res;
    }
    case Family::nash: {
        const double j = bessel_zero(0.5 * N, 1);
        res.value = std::sqrt((N + 2.0) / 2.0) * std::pow(omega, -1.0 / (N + 2.0)) *
                    std::pow(0.5 * N * j * j, -N / (2.0 * (N + 2.0)));
        res.components = {{"j_N/2", j}};
        return res;
    }
    case Family::log_sobolev: res.value = log_sobolev_constant(p, N); return res;
    case Family::morrey:
        res.value = std::pow(N, -1.0 / p) * std::pow(omega, -1.0 / N) * std::pow((p - 1.0) / (p - N), (p - 1.0) / p);
        return res;
    case Family::faber_krahn_1:
        res.value = std::pow(N, -1.0 / p) * std::pow(omega, -1.0 / N) * std::pow(s.p_conjugate() + N, -(p - 1.0) / p);
        return res;
    case Family::faber_krahn_2: {
        const FaberKrahnResult fk = faber_krahn_shooting(p, N);
        res.value = fk.constant;
        res.provenance = Provenance::shooting;
        res.components = {{"eigenvalue", fk.eigenvalue}};
        if (p == 2.0) res.components["closed_form"] = 1.0 / (bessel_zero(0.5 * N - 1.0, 1) * std::pow(omega, 1.0 / N));
        return res;
    }
    case Family::moser_trudinger:
        res.value = mt_critical_exponent(static_cast<int>(N));
        res.provenance = Provenance::critical_exponent;
        return res;
    case Family::hpw: res.value = std::sqrt(2.0 / N); return res;
    case Family::hardy: res.value = p / (N - p); return res;
    case Family::ckn: throw DomainError("optimal_constant: no closed form for general CKN parameters");
    }
    throw DomainError("optimal_constant: unsupported family");
}

// Sharp constant on a CD(0,N) space with the given AVR.
[[nodiscard]] inline double cd_constant(const InequalitySpec& s, double avr, std::optional<double> k_opt = {})
{
    if (!(avr > 0.0) || avr > 1.0) throw DomainError("cd_constant: avr must lie in (0, 1]");
    const double K = k_opt ? *k_opt : optimal_constant(s).value;
    switch (s.family) {
    case Family::log_sobolev: return std::pow(avr, -s.p / s.N) * K;
    case Family::moser_trudinger: return std::pow(avr, 1.0 / (s.N - 1.0)) * K;
    case Family::hpw:
    case Family::hardy:
    case Family::ckn:
        if (avr == 1.0) return K;
        throw DomainError("cd_constant: no sharp constant is known for this family when avr < 1");
    default: return std::pow(avr, -s.theta / s.N) * K;
    }
}

// ------------------------------------------------------------------ sweeps

struct Candidate {
    std::string label;
    ExtremalProfile profile;
};

namespace detail {

// C^1 compactly supported cubic bump (1-|x|)^2 (1+2|x|) on |x| < 1.
inline double bump(double x)
{
    const double a = std::abs(x);
    return a >= 1.0 ? 0.0 : (1.0 - a) * (1.0 - a) * (1.0 + 2.0 * a);
}

inline double bump_derivative(double x)
{
    const double a = std::abs(x);
    if (a >= 1.0) return 0.0;
    const double d = -6.0 * a * (1.0 - a);
    return x < 0 ? -d : d;
}

} // namespace detail

[[nodiscard]] inline ExtremalProfile perturbed(const ExtremalProfile& u, double center, double width, double eps)
{
    ExtremalProfile out = u;
    out.value = [v = u.value, center, width, eps](double t) {
        return v(t) * (1.0 + eps * detail::bump((t - center) / width));
    };
    out.derivative = [v = u.value, d = u.derivative, center, width, eps](double t) {
        const double x = (t - center) / width;
        return d(t) * (1.0 + eps * detail::bump(x)) + v(t) * eps * detail::bump_derivative(x) / width;
    };
    out.second = nullptr;
    out.breakpoints.push_back(center - width);
    out.breakpoints.push_back(center);
    out.breakpoints.push_back(center + width);
    std::erase_if(out.breakpoints, [&](double b) { return b <= 0.0 || b >= out.support; });
    return out;
}

[[nodiscard]] inline std::vector<Candidate> default_candidates(const InequalitySpec& s)
{
    const ExtremalProfile u0 = extremizer(s);
    std::vector<Candidate> c;
    c.push_back({"extremizer", u0});
    c.push_back({"scaled x0.5", rescaled(u0, 0.5)});
    c.push_back({"scaled x2", rescaled(u0, 2.0)});
    c.push_back({"multiplied x3", multiplied(u0, 3.0)});
    const double L = std::min(u0.support, 5.0);
    for (double frac : {0.25, 0.5, 0.75}) {
        for (double eps : {0.1, -0.1, 0.01, -0.01}) {
            c.push_back({"bump@" + std::to_string(frac).substr(0, 4) + " eps=" + std::to_string(eps).substr(0, 5),
                         perturbed(u0, frac * L, 0.2 * L, eps)});
        }
    }
    return c;
}

// Bump perturbations with random center, width and amplitude; a fixed seed
// gives the same list on a given platform.
[[nodiscard]] inline std::vector<Candidate> randomized_candidates(const InequalitySpec& s, std::uint64_t seed,
                                                                  int count = 8)
{
    const ExtremalProfile u0 = extremizer(s);
    const double L = std::min(u0.support, 5.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(0.1, 0.9), width(0.05, 0.3), amp(-0.2, 0.2);
    std::vector<Candidate> c;
    for (int i = 0; i < count; ++i) {
        const double x = center(rng) * L;
        const double w = width(rng) * L;
        const double e = amp(rng);
        char label[96];
        std::snprintf(label, sizeof label, "random bump c=%.6g w=%.6g eps=%.6g", x, w, e);
        c.push_back({label, perturbed(u0, x, w, e)});
    }
    return c;
}

struct SweepReport {
    std::vector<std::string> labels;
    std::vector<double> values;
    std::size_t argmax = 0;
    double best = nan;   // max quotient (min defect for LOG_SOBOLEV)
    double k_opt = nan;
    double ratio = nan;  // best / k_opt
    bool ok = false;
    std::string violation;
};

[[nodiscard]] inline SweepReport sharpness_sweep(const InequalitySpec& s, const std::vector<Candidate>& candidates)
{
    SweepReport rep;
    const bool defect = s.family == Family::log_sobolev;
    rep.k_opt = optimal_constant(s).value;
    for (const Candidate& c : candidates) {
        rep.labels.push_back(c.label);
        rep.values.push_back(quotient(s, c.profile));
    }
    const auto it = defect ? std::min_element(rep.values.begin(), rep.values.end())
                           : std::max_element(rep.values.begin(), rep.values.end());
    rep.argmax = static_cast<std::size_t>(it - rep.values.begin());
    rep.best = *it;
    if (defect) {
        rep.ratio = rep.best;
        rep.ok = rep.best >= -1e-6;
        if (!rep.ok) rep.violation = rep.labels[rep.argmax] + " has negative defect " + std::to_string(rep.best);
    } else {
        rep.ratio = rep.best / rep.k_opt;
        rep.ok = rep.ratio <= 1.0 + 1e-6;
        if (!rep.ok) rep.violation = rep.labels[rep.argmax] + " exceeds K_opt by ratio " + std::to_string(rep.ratio);
    }
    return rep;
}

struct HardySweepReport {
    std::vector<double> eps;
    std::vector<double> values;
    double sup = nan;
    double target = nan;
    bool monotone = false;
    bool below_target = false;
};

// Hardy quotient on t^{-(N-p)/p + eps}, flattened below delta and cut off
// linearly on [1/delta, 2/delta].
[[nodiscard]] inline ExtremalProfile hardy_profile(double p, double N, double eps, double delta)
{
    const double a = (N - p) / p - eps;
    if (!(a > 0.0)) throw DomainError("hardy_profile: eps must be below (N-p)/p");
    const double T = 1.0 / delta;
    ExtremalProfile u;
    u.value = [=](double t) {
        if (t < delta) return std::pow(delta, -a);
        if (t <= T) return std::pow(t, -a);
        return std::pow(T, -a) * (2.0 - t / T);
    };
    u.derivative = [=](double t) {
        if (t < delta) return 0.0;
        if (t <= T) return -a * std::pow(t, -a - 1.0);
        return -std::pow(T, -a) / T;
    };
    u.support = 2.0 * T;
    u.breakpoints = {delta, 1.0, T};
    for (double x = 10.0 * delta; x < T; x *= 10.0) u.breakpoints.push_back(x);
    return u;
}

[[nodiscard]] inline HardySweepReport hardy_sweep(double p, double N, std::vector<double> eps_grid = {0.4, 0.2, 0.1, 0.05},
                                                  double delta = 1e-4)
{
    const InequalitySpec s = make_spec(Family::hardy, {.N = N, .p = p});
    HardySweepReport rep;
    rep.target = p / (N - p);
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    rep.eps = eps_grid;
    for (double e : eps_grid) rep.values.push_back(quotient(s, hardy_profile(p, N, e, delta)));
    rep.sup = *std::max_element(rep.values.begin(), rep.values.end());
    rep.monotone = rep.values.size() >= 4 && std::is_sorted(rep.values.begin(), rep.values.end()) &&
                   std::adjacent_find(rep.values.begin(), rep.values.end(), std::equal_to<>()) == rep.values.end();
    rep.below_target = rep.sup < rep.target;
    return rep;
}

// (1/(omega_n R^n)) int_0^R exp(alpha |u|^{n/(n-1)}) dm_n, returned as a log
// so that large exponents do not overflow.
[[nodiscard]] inline double mt_log_functional(int n, double alpha, const ExtremalProfile& u, double domain_radius)
{
    if (n < 2) throw DomainError("mt_functional: n must be >= 2");
    if (!(alpha > 0.0) || !(domain_radius > 0.0)) throw DomainError("mt_functional: alpha and radius must be positive");
    if (u.support > domain_radius * (1.0 + 1e-12)) throw PreconditionError("mt_functional: u must be supported in the domain");
    const double e = n / (n - 1.0);
    const auto expo = [&](double t) { return alpha * std::pow(std::abs(u.u(t)), e); };
    double M = expo(0.0);
    for (double b : u.breakpoints) M = std::max(M, expo(b));
    for (int i = 1; i <= 200; ++i) M = std::max(M, expo(domain_radius * i / 200.0));
    const double shift = M > 500.0 ? M : 0.0;
    const double omega = unit_ball_volume(n);
    const auto f = [&](double t) { return std::exp(expo(t) - shift) * n * std::pow(t, n - 1.0); };
    QuadratureSettings qs = precise_settings(DecayClass::compact);
    std::vector<double> bps = u.breakpoints;
    if (u.support < domain_radius) bps.push_back(u.support);
    const double I = integrate_value(f, 0.0, domain_radius, qs, bps);
    return shift + std::log(I) - n * std::log(domain_radius) + std::log(omega) - std::log(omega);
}

[[nodiscard]] inline double mt_functional(int n, double alpha, const ExtremalProfile& u, double domain_radius)
{
    return std::exp(mt_log_functional(n, alpha, u, domain_radius));
}

} // namespace conesob
