#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "conesob/error.hpp"
#include "conesob/model_cone.hpp"
#include "conesob/quadrature.hpp"
#include "conesob/spaces.hpp"

namespace conesob {

struct SampledProfile {
    std::vector<double> grid;
    std::vector<double> values;
    bool monotone_flag = false;

    // Piecewise linear; zero beyond the last grid point.
    [[nodiscard]] double operator()(double s) const
    {
        if (s >= grid.back()) return s == grid.back() ? values.back() : 0.0;
        const auto it = std::upper_bound(grid.begin(), grid.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
        const double w = (s - grid[i]) / (grid[i + 1] - grid[i]);
        return (1.0 - w) * values[i] + w * values[i + 1];
    }
};

namespace detail {

// Outer radius of the region that matters for g: its support, or the
// radius where |g| has dropped below 1e-16 of its peak.
inline double effective_radius(const ExtremalProfile& g)
{
    if (g.compact()) return g.support;
    const double peak = std::max(std::abs(g.u(0.0)), 1e-300);
    double R = 1.0;
    while (R < 1e8 && (std::abs(g.u(R)) > 1e-16 * peak || std::abs(g.u(2.0 * R)) > 1e-16 * peak)) R *= 2.0;
    return R;
}

inline std::vector<double> radial_grid(const ExtremalProfile& g, int n = 4000)
{
    const double R = effective_radius(g);
    std::set<double> pts;
    for (int i = 0; i <= n; ++i) pts.insert(R * i / n);
    if (!g.compact()) {
        for (int i = 0; i <= n / 4; ++i) pts.insert(R * std::pow(10.0, -8.0 + 8.0 * i / (n / 4)));
    }
    for (double b : g.breakpoints)
        if (b > 0.0 && b < R) pts.insert(b);
    return {pts.begin(), pts.end()};
}

} // namespace detail

// Smallest r with V(r) >= target.
[[nodiscard]] inline double inverse_volume(const RadialSpace& s, double target)
{
    if (target <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    int guard = 0;
    while (s.V(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2000 || !std::isfinite(hi))
            throw PreconditionError("inverse_volume: target exceeds the total measure of " + s.label);
    }
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        // Newton step from the midpoint when it stays inside the bracket.
        const double v = s.v(mid);
        const double f = s.V(mid) - target;
        double next = v > 0.0 ? mid - f / v : mid;
        if (f >= 0.0)
            hi = mid;
        else
            lo = mid;
        if (next > lo && next < hi) {
            if (s.V(next) >= target)
                hi = next;
            else
                lo = next;
        }
    }
    return hi;
}

// Profile from "t,u" samples (header line first): monotone cubic through the
// samples, zero beyond the last radius.
[[nodiscard]] inline ExtremalProfile profile_from_samples(std::vector<double> t, std::vector<double> u)
{
    if (t.size() != u.size() || t.size() < 3) throw DomainError("profile samples: need at least three (t, u) rows");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(u[i]) || t[i] < 0.0)
            throw DomainError("profile samples: radii must be non-negative and values finite");
        if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("profile samples: radii must be strictly increasing");
    }
    const double t0 = t.front(), u0 = u.front(), last = t.back();
    auto cubic = std::make_shared<detail::MonotoneCubic>(std::move(t), std::move(u));
    ExtremalProfile g;
    g.value = [=](double x) { return x <= t0 ? u0 : cubic->value(x); };
    g.derivative = [=](double x) { return x <= t0 ? 0.0 : cubic->derivative(x); };
    g.support = last;
    g.breakpoints.assign(cubic->x.begin() + 1, cubic->x.end() - 1);
    g.normalization = "sampled";
    return g;
}

[[nodiscard]] inline ExtremalProfile load_profile_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open profile table " + path);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("profile table " + path + " is empty");
    std::vector<double> t, u;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) throw DomainError(path + ": malformed row " + std::to_string(row));
        t.push_back(a);
        u.push_back(b);
    }
    return profile_from_samples(std::move(t), std::move(u));
}

[[nodiscard]] inline bool is_non_increasing(const ExtremalProfile& g)
{
    const std::vector<double> grid = detail::radial_grid(g);
    double prev = g.u(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = g.u(grid[i]);
        if (cur > prev + 1e-14 * std::max(1.0, std::abs(prev))) return false;
        prev = cur;
    }
    return true;
}

// m({x : g(d(x0,x)) > t}) from the sign changes of g - t on a fine grid.
[[nodiscard]] inline double superlevel_measure(const ExtremalProfile& g, const RadialSpace& s, double t)
{
    const std::vector<double> grid = detail::radial_grid(g);
    const auto crossing = [&](double a, double b) {
        const bool above_a = g.u(a) > t;
        for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, b); ++it) {
            const double m = 0.5 * (a + b);
            if ((g.u(m) > t) == above_a)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    };
    double total = 0.0;
    bool inside = g.u(grid.front()) > t;
    double start = grid.front();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool now = g.u(grid[i]) > t;
        if (now != inside) {
            const double x = crossing(grid[i - 1], grid[i]);
            if (inside)
                total += s.V(x) - s.V(start);
            else
                start = x;
            inside = now;
        }
    }
    if (inside) {
        if (!g.compact() && t <= 0.0)
            throw DomainError("superlevel_measure: level set of infinite measure at t=" + std::to_string(t));
        total += s.V(grid.back()) - s.V(start);
    }
    return total;
}

// u*(s) = g(V^{-1}(omega_N s^N)) for non-increasing g, with
// (u*)'(s) = g'(r) N omega_N s^{N-1} / V'(r).
[[nodiscard]] inline ExtremalProfile rearranged_profile(const ExtremalProfile& g, const RadialSpace& s)
{
    if (!is_non_increasing(g))
        throw PreconditionError("rearranged_profile: the closed-form path needs a non-increasing profile");
    const double w = unit_ball_volume(s.N);
    const double N = s.N;
    ExtremalProfile out;
    out.value = [=](double x) { return g.u(inverse_volume(s, w * std::pow(x, N))); };
    out.derivative = [=](double x) {
        if (x == 0.0) return 0.0;
        const double r = inverse_volume(s, w * std::pow(x, N));
        const double dv = s.v(r);
        const double gp = g.du(r);
        if (gp == 0.0) return 0.0;
        if (!(dv > 0.0)) throw NonFiniteError("rearranged_profile: zero density where g varies");
        return gp * N * w * std::pow(x, N - 1.0) / dv;
    };
    out.decay = g.decay;
    out.support = g.compact() ? std::pow(s.V(g.support) / w, 1.0 / N) : infinity;
    // Bounded total measure (zero AVR): u* lives on a bounded interval.
    if (s.avr == 0.0) out.support = std::min(out.support, std::pow(s.V(1e15) / w, 1.0 / N));
    for (double b : g.breakpoints) out.breakpoints.push_back(std::pow(s.V(b) / w, 1.0 / N));
    for (double b : s.breakpoints)
        if (b < (g.compact() ? g.support : infinity)) out.breakpoints.push_back(std::pow(s.V(b) / w, 1.0 / N));
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    out.normalization = "rearrangement on the model cone";
    return out;
}

// Non-increasing rearrangement sampled on a grid. Non-increasing g use the
// closed form on the images of a radial grid; other profiles go through
// level-set inversion on 512 logarithmic and 512 uniform levels plus
// breakpoint values.
[[nodiscard]] inline SampledProfile rearrangement(const ExtremalProfile& g, const RadialSpace& space,
                                                  const ModelCone& cone)
{
    if (std::abs(space.N - cone.N) > 1e-12) throw DomainError("rearrangement: space and cone dimensions differ");
    const double w = cone.omega;
    const double N = cone.N;
    SampledProfile out;
    out.monotone_flag = true;
    if (is_non_increasing(g)) {
        for (double r : detail::radial_grid(g)) {
            const double s = std::pow(space.V(r) / w, 1.0 / N);
            if (!out.grid.empty() && !(s > out.grid.back())) continue;
            out.grid.push_back(s);
            out.values.push_back(g.u(r));
        }
        return out;
    }
    const std::vector<double> rg = detail::radial_grid(g);
    double hi = 0.0;
    for (double r : rg) hi = std::max(hi, g.u(r));
    if (!(hi > 0.0)) throw DomainError("rearrangement: profile has no positive part");
    std::vector<double> levels;
    for (int k = 0; k < 512; ++k) {
        levels.push_back(hi * std::pow(10.0, -12.0 * (511 - k) / 511.0));
        levels.push_back(hi * (k + 0.5) / 512.0);
    }
    for (double b : g.breakpoints)
        if (g.u(b) > 0.0) levels.push_back(g.u(b));
    std::sort(levels.begin(), levels.end(), std::greater<>());
    out.grid.push_back(0.0);
    out.values.push_back(hi);
    for (double t : levels) {
        if (t >= hi) continue;
        const double mu = superlevel_measure(g, space, t);
        if (!std::isfinite(mu)) throw DomainError("rearrangement: non-finite superlevel measure");
        const double s = std::pow(mu / w, 1.0 / N);
        if (!(s > out.grid.back())) continue;
        out.grid.push_back(s);
        out.values.push_back(t);
    }
    return out;
}

struct CavalieriReport {
    double space_side = 0.0;
    double cone_side = 0.0;
    double residual = 0.0;  // relative to the larger magnitude
};

namespace detail {

inline QuadratureSettings rearrange_settings(DecayClass d)
{
    QuadratureSettings q = precise_settings(d);
    q.abs_tol = 1e-15;
    return q;
}

// int h(r) V'(r) dr over the support of g.
template <class H>
double space_integral(const RadialSpace& s, const ExtremalProfile& g, const H& h)
{
    std::vector<double> bps = g.breakpoints;
    for (double b : s.breakpoints) bps.push_back(b);
    return integrate_value([&](double r) { return h(r) * s.v(r); }, 0.0, g.support, rearrange_settings(g.decay), bps);
}

} // namespace detail

[[nodiscard]] inline CavalieriReport cavalieri_check(const ExtremalProfile& g, const RadialSpace& space,
                                                     const std::function<double(double)>& F, const ModelCone& cone)
{
    CavalieriReport rep;
    rep.space_side = detail::space_integral(space, g, [&](double r) { return F(g.u(r)); });
    if (is_non_increasing(g)) {
        const ExtremalProfile u = rearranged_profile(g, space);
        rep.cone_side = cone_integral(cone, [&](double s) { return F(u.u(s)); }, u);
    } else {
        const SampledProfile u = rearrangement(g, space, cone);
        rep.cone_side = integrate_value([&](double s) { return F(u(s)) * cone.density(s); }, 0.0, u.grid.back(),
                                        detail::rearrange_settings(DecayClass::compact), u.grid);
    }
    if (!std::isfinite(rep.space_side) || !std::isfinite(rep.cone_side))
        throw DomainError("cavalieri_check: divergent integral");
    const double scale = std::max(std::abs(rep.space_side), std::abs(rep.cone_side));
    rep.residual = scale > 0.0 ? std::abs(rep.space_side - rep.cone_side) / scale : 0.0;
    return rep;
}

struct PolyaSzegoReport {
    double lhs = 0.0;  // int |g'|^p dm on the space
    double rhs = 0.0;  // AVR^{p/N} int |(u*)'|^p dm_N
    double margin = 0.0;
    double relative_margin = 0.0;
};

[[nodiscard]] inline PolyaSzegoReport polya_szego_check(const ExtremalProfile& g, const RadialSpace& space, double p,
                                                        const ModelCone& cone)
{
    if (!(p > 1.0)) throw DomainError("polya_szego_check: p must exceed 1");
    PolyaSzegoReport rep;
    rep.lhs = detail::space_integral(space, g, [&](double r) { return std::pow(std::abs(g.du(r)), p); });
    double energy = 0.0;
    if (is_non_increasing(g)) {
        const ExtremalProfile u = rearranged_profile(g, space);
        energy = cone_integral(cone, [&](double s) { return std::pow(std::abs(u.du(s)), p); }, u);
    } else {
        // Energy of the piecewise linear level-set inverse.
        const SampledProfile u = rearrangement(g, space, cone);
        for (std::size_t i = 0; i + 1 < u.grid.size(); ++i) {
            const double a = u.grid[i], b = u.grid[i + 1];
            const double slope = (u.values[i + 1] - u.values[i]) / (b - a);
            energy += std::pow(std::abs(slope), p) * cone.omega * (std::pow(b, cone.N) - std::pow(a, cone.N));
        }
    }
    rep.rhs = std::pow(space.avr, p / space.N) * energy;
    if (!std::isfinite(rep.lhs) || !std::isfinite(rep.rhs)) throw NonFiniteError("polya_szego_check: non-finite energy");
    rep.margin = rep.lhs - rep.rhs;
    rep.relative_margin = rep.lhs > 0.0 ? rep.margin / rep.lhs : 0.0;
    return rep;
}

} // namespace conesob
