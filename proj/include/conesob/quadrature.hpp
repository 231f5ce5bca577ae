#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "conesob/error.hpp"

namespace conesob {

enum class TailCut { substitution, exponential_tail_bound };

enum class DecayClass { compact, power, gaussian };

struct QuadratureSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 5000;
    TailCut tail_cut_strategy = TailCut::substitution;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    int evaluations = 0;
};

[[nodiscard]] inline TailCut tail_cut_for(DecayClass d)
{
    return d == DecayClass::gaussian ? TailCut::exponential_tail_bound : TailCut::substitution;
}

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 nodes and weights).
inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b, int& evals)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const auto eval = [&](double x) {
        const double y = f(x);
        ++evals;
        if (!std::isfinite(y)) throw NonFiniteError("integrate: non-finite integrand at t=" + std::to_string(x));
        return y;
    };
    const double fc = eval(c);
    double rk = fc * gk15_wk[7];
    double rg = fc * gk15_wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk15_x[j];
        const double s = eval(c - dx) + eval(c + dx);
        rk += gk15_wk[j] * s;
        if (j % 2 == 1) rg += gk15_wg[j / 2] * s;
    }
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

// Global adaptive bisection on a finite interval. The best (smallest error)
// state seen is reported, so a larger budget never reports a worse error.
template <class F>
QuadratureResult adaptive(const F& f, const std::vector<double>& cuts, const QuadratureSettings& s)
{
    QuadratureResult res;
    std::priority_queue<Panel> heap;
    double total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        Panel p = gk15(f, cuts[i], cuts[i + 1], res.evaluations);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    double best_val = total;
    double best_err = err;
    int subdivisions = 0;
    while (!heap.empty() && err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
        if (subdivisions >= s.max_subdivisions) break;
        const Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break;  // interval exhausted at machine precision
        heap.pop();
        const Panel l = gk15(f, p.a, mid, res.evaluations);
        const Panel r = gk15(f, mid, p.b, res.evaluations);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++subdivisions;
        if (err < best_err) {
            best_err = err;
            best_val = total;
        }
        // Accumulated round-off in the running sums: resum occasionally.
        if (subdivisions % 256 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    if (err <= best_err) {
        best_err = err;
        best_val = total;
    }
    res.value = best_val;
    res.error = best_err;
    res.converged = best_err <= std::max(s.abs_tol, s.rel_tol * std::abs(best_val));
    return res;
}

} // namespace detail

// Integral of f over (a, b); b may be +infinity. Interior points where f is
// not smooth can be passed as breakpoints.
template <class F>
[[nodiscard]] QuadratureResult integrate(const F& f, double a, double b, const QuadratureSettings& s = {},
                                         std::vector<double> breakpoints = {})
{
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || s.max_subdivisions < 1)
        throw DomainError("integrate: invalid settings");
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limits");
    if (b < a) {
        QuadratureResult r = integrate(f, b, a, s, std::move(breakpoints));
        r.value = -r.value;
        return r;
    }
    if (a == b) return {.value = 0.0, .error = 0.0, .converged = true};

    std::sort(breakpoints.begin(), breakpoints.end());

    if (std::isfinite(b)) {
        std::vector<double> cuts{a};
        for (double x : breakpoints)
            if (x > a && x < b) cuts.push_back(x);
        cuts.push_back(b);
        return detail::adaptive(f, cuts, s);
    }

    if (s.tail_cut_strategy == TailCut::exponential_tail_bound) {
        // Find T beyond which |f(t)| t stays below abs_tol/10 at T, 1.5T, 2T.
        const double floor_tol = 0.1 * s.abs_tol;
        double T = std::max(1.0, std::abs(a));
        double last_break = a;
        for (double x : breakpoints) last_break = std::max(last_break, x);
        T = std::max(T, last_break);
        int tries = 0;
        for (;; T *= 2.0) {
            if (++tries > 60) throw ConvergenceError("integrate: integrand does not decay like a Gaussian-class tail");
            const double t1 = a + T;
            const bool small = std::abs(f(t1)) * t1 <= floor_tol && std::abs(f(1.5 * t1)) * 1.5 * t1 <= floor_tol &&
                               std::abs(f(2.0 * t1)) * 2.0 * t1 <= floor_tol;
            if (small) break;
        }
        std::vector<double> cuts{a};
        for (double x : breakpoints)
            if (x > a && x < a + T) cuts.push_back(x);
        cuts.push_back(a + T);
        return detail::adaptive(f, cuts, s);
    }

    // t = a + s/(1-s) maps (0,1) onto (a, inf).
    const auto g = [&f, a](double u) {
        const double one_minus = 1.0 - u;
        const double t = a + u / one_minus;
        if (t > 1e150) return 0.0;
        return f(t) / (one_minus * one_minus);
    };
    std::vector<double> cuts{0.0};
    for (double x : breakpoints)
        if (x > a) cuts.push_back((x - a) / (1.0 + x - a));
    cuts.push_back(1.0);
    return detail::adaptive(g, cuts, s);
}

// Convenience: value only, throws if the budget was exhausted without
// meeting the tolerance by a wide margin.
template <class F>
[[nodiscard]] double integrate_value(const F& f, double a, double b, const QuadratureSettings& s = {},
                                     std::vector<double> breakpoints = {})
{
    const QuadratureResult r = integrate(f, a, b, s, std::move(breakpoints));
    if (!r.converged && r.error > 1e3 * std::max(s.abs_tol, s.rel_tol * std::abs(r.value)))
        throw ConvergenceError("integrate: subdivision budget exhausted, error estimate " + std::to_string(r.error));
    return r.value;
}

} // namespace conesob
