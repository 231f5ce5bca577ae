#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "conesob/error.hpp"
#include "conesob/quadrature.hpp"
#include "conesob/specfun.hpp"

namespace conesob {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct ModelCone {
    double N = 0.0;
    double omega = 0.0;

    [[nodiscard]] static ModelCone make(double N)
    {
        if (!(N > 1.0)) throw DomainError("ModelCone: N must exceed 1");
        return {N, unit_ball_volume(N)};
    }

    // Density of m_N with respect to dt.
    [[nodiscard]] double density(double t) const { return N * omega * std::pow(t, N - 1.0); }
};

[[nodiscard]] inline double cone_volume(const ModelCone& cone, double r)
{
    if (r < 0.0) throw DomainError("cone_volume: radius must be >= 0");
    return cone.omega * std::pow(r, cone.N);
}

// A radial profile on [0, support). Outside the support the profile is 0.
struct ExtremalProfile {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> second;  // optional; finite differences otherwise
    double support = infinity;
    std::optional<double> convexity_onset;
    DecayClass decay = DecayClass::compact;
    std::vector<double> breakpoints;  // interior points where the profile is not smooth
    std::string normalization;

    [[nodiscard]] double u(double t) const { return t >= support ? 0.0 : value(t); }
    [[nodiscard]] double du(double t) const { return t >= support ? 0.0 : derivative(t); }
    [[nodiscard]] double d2u(double t) const
    {
        if (t >= support) return 0.0;
        if (second) return second(t);
        const double h = std::max(1e-6, 1e-6 * t);
        const double lo = std::max(0.0, t - h);
        const double hi = std::isfinite(support) ? std::min(t + h, support) : t + h;
        return (derivative(hi) - derivative(lo)) / (hi - lo);
    }
    [[nodiscard]] bool compact() const { return std::isfinite(support); }
};

// t -> u(t / lambda).
[[nodiscard]] inline ExtremalProfile rescaled(const ExtremalProfile& p, double lambda)
{
    ExtremalProfile out = p;
    out.value = [v = p.value, lambda](double t) { return v(t / lambda); };
    out.derivative = [d = p.derivative, lambda](double t) { return d(t / lambda) / lambda; };
    if (p.second) out.second = [s = p.second, lambda](double t) { return s(t / lambda) / (lambda * lambda); };
    out.support = p.support * lambda;
    if (p.convexity_onset) out.convexity_onset = *p.convexity_onset * lambda;
    for (double& b : out.breakpoints) b *= lambda;
    return out;
}

// t -> c u(t).
[[nodiscard]] inline ExtremalProfile multiplied(const ExtremalProfile& p, double c)
{
    ExtremalProfile out = p;
    out.value = [v = p.value, c](double t) { return c * v(t); };
    out.derivative = [d = p.derivative, c](double t) { return c * d(t); };
    if (p.second) out.second = [s = p.second, c](double t) { return c * s(t); };
    return out;
}

[[nodiscard]] inline QuadratureSettings precise_settings(DecayClass d)
{
    return {.rel_tol = 1e-12, .abs_tol = 1e-300, .max_subdivisions = 20000, .tail_cut_strategy = tail_cut_for(d)};
}

// Integral of f against m_N over [0, support).
template <class F>
[[nodiscard]] double cone_integral(const ModelCone& cone, const F& f, const ExtremalProfile& shape)
{
    QuadratureSettings s = precise_settings(shape.decay);
    if (s.tail_cut_strategy == TailCut::exponential_tail_bound) s.abs_tol = 1e-18;
    const auto g = [&](double t) { return f(t) * cone.density(t); };
    return integrate_value(g, 0.0, shape.support, s, shape.breakpoints);
}

[[nodiscard]] inline double lp_norm(const ExtremalProfile& u, double p_exp, const ModelCone& cone)
{
    if (!(p_exp > 0.0)) throw DomainError("lp_norm: exponent must be positive");
    const double I = cone_integral(cone, [&](double t) { return std::pow(std::abs(u.u(t)), p_exp); }, u);
    return std::pow(I, 1.0 / p_exp);
}

// ||u'||_p on the cone.
[[nodiscard]] inline double gradient_norm(const ExtremalProfile& u, double p_exp, const ModelCone& cone)
{
    const double I = cone_integral(cone, [&](double t) { return std::pow(std::abs(u.du(t)), p_exp); }, u);
    return std::pow(I, 1.0 / p_exp);
}

struct AsymptoticsReport {
    bool ok = true;
    std::string failed_clause;
    double witness = 0.0;
    std::vector<std::string> notes;
};

struct AsymptoticExponents {
    double p = 2.0;
    std::optional<double> q;  // empty for sup-norm or support-measure functionals
    std::optional<double> r;
};

// Finite proxies for the integrability conditions imposed on extremizers:
// |u'|^p locally BV on [0,R0), u'' >= 0 beyond i0, and the three vanishing
// limits when R0 is infinite.
[[nodiscard]] inline AsymptoticsReport check_extremal_asymptotics(const ExtremalProfile& u, double N,
                                                                  const AsymptoticExponents& ex)
{
    AsymptoticsReport rep;
    const auto fail = [&](std::string clause, double at) {
        if (rep.ok) {
            rep.ok = false;
            rep.failed_clause = std::move(clause);
            rep.witness = at;
        }
    };
    const auto grad_p = [&](double t) { return std::pow(std::abs(u.du(t)), ex.p); };

    // Local BV: discrete total variation on [0, L] must stabilize.
    const double L = u.compact() ? u.support : (u.convexity_onset ? std::max(10.0, 2.0 * *u.convexity_onset) : 10.0);
    std::vector<double> tv;
    for (int n : {1000, 2000, 4000, 8000}) {
        double sum = 0.0;
        double prev = grad_p(0.0);
        double worst_t = 0.0;
        for (int i = 1; i < n; ++i) {
            const double t = L * i / n;
            const double cur = grad_p(t);
            if (!std::isfinite(cur) || !std::isfinite(prev)) {
                sum = infinity;
                worst_t = t;
                break;
            }
            sum += std::abs(cur - prev);
            prev = cur;
        }
        if (!std::isfinite(sum)) {
            fail("|u'|^p locally BV", worst_t);
            break;
        }
        tv.push_back(sum);
    }
    if (rep.ok) {
        for (std::size_t i = 1; i < tv.size(); ++i) {
            const double ratio = tv[i] / tv[i - 1];
            if (std::abs(ratio - 1.0) > 0.01 && std::abs(tv[i] - tv[i - 1]) > 1e-12) fail("|u'|^p locally BV", 0.0);
        }
    }

    // Monotonicity and sign.
    for (int i = 0; i <= 400; ++i) {
        const double t = (u.compact() ? u.support : 50.0) * i / 400.0;
        if (u.u(t) < -1e-14) fail("u0 >= 0", t);
    }
    if (u.compact() && std::abs(u.u(u.support * (1.0 - 1e-12))) > 1e-6) fail("u0(R0) = 0", u.support);

    if (!u.compact()) {
        if (!u.convexity_onset) {
            fail("convexity onset i0 declared", 0.0);
        } else {
            const double i0 = *u.convexity_onset;
            for (int i = 1; i <= 200; ++i) {
                const double t = i0 * std::pow(1e4, i / 200.0);
                if (u.d2u(t) < -1e-10 * std::abs(u.du(t)) / t) fail("u0'' >= 0 beyond i0", t);
            }
        }
        const auto vanishing = [&](const std::string& clause, auto g) {
            double prev = infinity;
            double first = 0.0;
            int idx = 0;
            for (double rho : {10.0, 100.0, 1000.0, 10000.0}) {
                const double v = std::abs(g(rho)) * std::pow(rho, N);
                if (idx == 0) first = v;
                if (v > prev) {
                    fail(clause + " -> 0", rho);
                    return;
                }
                prev = v;
                ++idx;
            }
            // Power-law decay at rate rho^-1 or faster is required; a fixed
            // 1e-8 drop over three decades would reject critical Sobolev
            // extremizers whose limits do vanish.
            if (prev > 1e-2 * first) fail(clause + " -> 0", 10000.0);
        };
        if (ex.q) vanishing("u0^q rho^N", [&](double t) { return std::pow(u.u(t), *ex.q); });
        vanishing("|u0'|^p rho^N", grad_p);
        if (ex.r) vanishing("u0^r rho^N", [&](double t) { return std::pow(u.u(t), *ex.r); });
    } else {
        rep.notes.emplace_back("compact support: limit clauses vacuous");
    }
    return rep;
}

} // namespace conesob
