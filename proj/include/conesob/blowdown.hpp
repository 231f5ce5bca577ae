#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "conesob/catalog.hpp"
#include "conesob/error.hpp"
#include "conesob/model_cone.hpp"
#include "conesob/quadrature.hpp"
#include "conesob/spaces.hpp"

namespace conesob {

namespace detail {

// Worker count: CONE_SOBOLEV_THREADS if set, else the hardware count.
inline unsigned worker_count(std::size_t jobs)
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CONE_SOBOLEV_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// out[i] = f(i); results land in index order whatever the scheduling.
template <class F>
std::vector<double> parallel_map(std::size_t n, const F& f)
{
    std::vector<double> out(n);
    std::vector<std::exception_ptr> errs(n);
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

inline QuadratureSettings blowdown_settings(DecayClass d)
{
    QuadratureSettings q = precise_settings(d);
    if (q.tail_cut_strategy == TailCut::exponential_tail_bound) q.abs_tol = 1e-18;
    return q;
}

inline std::vector<double> merged_breakpoints(const RadialSpace& s, const ExtremalProfile& h)
{
    std::vector<double> b = h.breakpoints;
    b.insert(b.end(), s.breakpoints.begin(), s.breakpoints.end());
    return b;
}

} // namespace detail

// Integration by parts: int h(d) dm = lim_{t -> R0} h(t) V(t) - int_0^{R0} V dh,
// where dh carries h' plus the jumps of h at its declared breakpoints.
[[nodiscard]] inline double radial_integral(const RadialSpace& s, const ExtremalProfile& h,
                                            std::optional<double> R0 = {})
{
    const double R = R0 ? *R0 : h.support;
    if (!(R > 0.0)) throw DomainError("radial_integral: R0 must be positive");
    double boundary = 0.0;
    if (std::isfinite(R)) {
        boundary = h.value(R) * s.V(R);
        if (!std::isfinite(boundary)) throw PreconditionError("radial_integral: h(t)V(t) diverges at R0");
    } else {
        double prev = infinity;
        double first = 0.0;
        bool first_set = false;
        for (double t : {1e4, 1e6, 1e8, 1e10}) {
            const double hv = std::abs(h.value(t) * s.V(t));
            if (!std::isfinite(hv) || hv > prev)
                throw PreconditionError("radial_integral: h(t)V(t) does not vanish as t -> infinity");
            if (!first_set) {
                first = hv;
                first_set = true;
            }
            prev = hv;
        }
        if (prev > 1e-4 * first && prev > 1e-300)
            throw PreconditionError("radial_integral: h(t)V(t) does not vanish as t -> infinity");
    }
    const auto f = [&](double t) {
        const double d = h.derivative(t);
        return d == 0.0 ? 0.0 : d * s.V(t);
    };
    double body = integrate_value(f, 0.0, R, detail::blowdown_settings(h.decay), detail::merged_breakpoints(s, h));
    for (double b : h.breakpoints) {
        if (!(b > 0.0) || !(b < R)) continue;
        const double jump = h.value(std::nextafter(b, infinity)) - h.value(std::nextafter(b, 0.0));
        body += jump * s.V(b);
    }
    return boundary - body;
}

// Direct route: int_0^{R0} h(t) V'(t) dt.
[[nodiscard]] inline double weighted_integral(const RadialSpace& s, const ExtremalProfile& h,
                                              std::optional<double> R0 = {})
{
    const double R = R0 ? *R0 : h.support;
    const auto f = [&](double t) {
        const double v = h.value(t);
        return v == 0.0 ? 0.0 : v * s.v(t);
    };
    return integrate_value(f, 0.0, R, detail::blowdown_settings(h.decay), detail::merged_breakpoints(s, h));
}

namespace detail {

// V_R(rho) = V(R rho) / R^N, the measure seen by u0(d/R) after rescaling.
inline RadialSpace scaled_space(const RadialSpace& s, double R)
{
    RadialSpace out = s;
    const double N = s.N;
    const double RN = std::pow(R, N);
    out.V = [V = s.V, R, RN](double rho) { return V(R * rho) / RN; };
    out.v = [v = s.v, R, RN](double rho) { return v(R * rho) * R / RN; };
    for (double& b : out.breakpoints) b /= R;
    return out;
}

// |u|^q with its derivative.
inline ExtremalProfile power_profile(const ExtremalProfile& u, double q)
{
    ExtremalProfile h = u;
    h.value = [v = u.value, q](double t) { return std::pow(std::abs(v(t)), q); };
    h.derivative = [v = u.value, d = u.derivative, q](double t) {
        const double x = v(t);
        if (x == 0.0) return 0.0;
        return q * std::pow(std::abs(x), q - 1.0) * (x < 0.0 ? -1.0 : 1.0) * d(t);
    };
    h.second = nullptr;
    return h;
}

// |u'|^p with its derivative.
inline ExtremalProfile gradient_power_profile(const ExtremalProfile& u, double p)
{
    ExtremalProfile h = u;
    h.value = [d = u.derivative, p](double t) { return std::pow(std::abs(d(t)), p); };
    h.derivative = [u, p](double t) {
        const double x = u.derivative(t);
        if (x == 0.0) return 0.0;
        return p * std::pow(std::abs(x), p - 1.0) * (x < 0.0 ? -1.0 : 1.0) * u.d2u(t);
    };
    h.second = nullptr;
    return h;
}

// |u|^p log |u|^p with its derivative.
inline ExtremalProfile entropy_profile(const ExtremalProfile& u, double p)
{
    ExtremalProfile h = u;
    h.value = [v = u.value, p](double t) {
        const double w = std::pow(std::abs(v(t)), p);
        return w > 0.0 ? w * std::log(w) : 0.0;
    };
    h.derivative = [v = u.value, d = u.derivative, p](double t) {
        const double x = v(t);
        if (x == 0.0) return 0.0;
        const double w = std::pow(std::abs(x), p);
        const double dw = p * std::pow(std::abs(x), p - 1.0) * (x < 0.0 ? -1.0 : 1.0) * d(t);
        return dw * (std::log(w) + 1.0);
    };
    h.second = nullptr;
    return h;
}

} // namespace detail

[[nodiscard]] inline std::vector<double> default_blowdown_radii()
{
    std::vector<double> r;
    for (int j = 0; j <= 12; ++j) r.push_back(std::ldexp(1.0, j));
    return r;
}

struct Extrapolation {
    double limit = nan;
    bool converged = false;
    std::vector<double> extrapolants;
    std::vector<double> residuals;
};

// Richardson on consecutive radii: the O(1/R) term is removed first, then
// the O(1/R^2) term (Neville in h = 1/R). Residuals are differences of the
// final column.
[[nodiscard]] inline Extrapolation extrapolate_limit(const std::vector<double>& R, const std::vector<double>& y)
{
    if (R.size() != y.size() || R.size() < 4) throw DomainError("extrapolate_limit: need at least four samples");
    Extrapolation e;
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    std::vector<double> first;
    for (std::size_t i = 0; i + 1 < R.size(); ++i) first.push_back((R[i + 1] * y[i + 1] - R[i] * y[i]) / (R[i + 1] - R[i]));
    for (std::size_t i = 0; i + 1 < first.size(); ++i) {
        const double hi = 1.0 / R[i], hk = 1.0 / R[i + 2];
        e.extrapolants.push_back((hi * first[i + 1] - hk * first[i]) / (hi - hk));
    }
    for (std::size_t i = 0; i + 1 < e.extrapolants.size(); ++i)
        e.residuals.push_back(std::abs(e.extrapolants[i + 1] - e.extrapolants[i]));
    e.limit = e.extrapolants.back();
    const double r0 = e.residuals.front();
    const double r1 = e.residuals.back();
    e.converged = std::isfinite(e.limit) && (r0 <= 1e-12 * scale || r1 < r0 / 10.0);
    if (e.converged || R.size() < 6) return e;

    // Fractional decay rates (|u0'|^p singular at the origin) defeat the
    // 1/R table; two passes of Aitken's delta-squared estimate the rate.
    const auto aitken = [](const std::vector<double>& v) {
        std::vector<double> out;
        for (std::size_t i = 0; i + 2 < v.size(); ++i) {
            const double d1 = v[i + 1] - v[i], d2 = v[i + 2] - v[i + 1];
            out.push_back(d2 == d1 ? v[i + 2] : v[i + 2] - d2 * d2 / (d2 - d1));
        }
        return out;
    };
    Extrapolation a;
    a.extrapolants = aitken(aitken(y));
    for (std::size_t i = 0; i + 1 < a.extrapolants.size(); ++i)
        a.residuals.push_back(std::abs(a.extrapolants[i + 1] - a.extrapolants[i]));
    a.limit = a.extrapolants.back();
    const double a0 = a.residuals.front();
    const double a1 = a.residuals.back();
    a.converged = std::isfinite(a.limit) && (a0 <= 1e-12 * scale || a1 < a0 / 10.0);
    return a.converged ? a : e;
}

struct BlowdownReport {
    std::string family;
    std::string space;
    std::vector<double> radii;
    std::vector<double> ratio_q;        // ||u_R||_q^q / R^N (sup |u_R| for MORREY)
    std::vector<double> ratio_r;        // ||u_R||_r^r / R^N, empty when theta = 1
    std::vector<double> ratio_p;        // R^{-N} int |u0'|^p(d/R) dm, the gradient upper bound
    std::vector<double> ratio_support;  // m(supp u_R) / R^N for support-measure families
    std::vector<double> ratio_entropy;  // R^{-N} int u_R^p log u_R^p dm (log-Sobolev)
    double q_exponent = nan;
    double limit_q = nan, limit_r = nan, limit_p = nan, limit_support = nan, limit_entropy = nan;
    double cone_q = nan, cone_r = nan, cone_p = nan, cone_support = nan, cone_entropy = nan;
    bool converged = false;
    std::vector<std::string> notes;

    double attained_avr = nan;    // limit_q / cone_q (support ratio for MORREY)
    double limit_quotient = nan;  // the family quotient assembled from the limits
    double k_realized = nan;      // model-cone constant realized by u0
    double constant = nan;        // the assumed constant c
    double avr_bound = nan;
    double declared_avr = nan;
    std::optional<double> liminf_l, limsup_L;
    std::string verdict;
};

namespace detail {

inline void check_radii(const std::vector<double>& radii)
{
    if (radii.size() < 5) throw DomainError("blowdown: need at least 5 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw DomainError("blowdown: radii must be strictly increasing");
    if (!(radii.front() > 0.0) || radii.back() / radii.front() < 1e3 * (1.0 - 1e-12))
        throw DomainError("blowdown: radii must be positive and span at least 3 decades");
}

template <class Fn>
std::vector<double> ratio_sequence(const RadialSpace& s, const std::vector<double>& radii, const Fn& fn)
{
    return parallel_map(radii.size(), [&](std::size_t i) { return fn(scaled_space(s, radii[i])); });
}

inline bool is_support_family(Family f) { return has_support_measure(f); }

// Exponent e in AVR >= (K/C)^{N/e}.
inline double bound_exponent(const InequalitySpec& s)
{
    if (s.family == Family::log_sobolev) return s.p;
    if (is_support_family(s.family)) return 1.0;
    return s.theta;
}

// Constant realized by u0 on the model cone.
inline double realized_constant(const InequalitySpec& s, const ExtremalProfile& u0)
{
    if (s.family == Family::moser_trudinger) throw DomainError("realized_constant: use mt_blowdown for MOSER_TRUDINGER");
    const double v = quotient(s, u0);
    if (s.family == Family::log_sobolev) return log_sobolev_constant(s.p, s.N) * std::exp(-(s.p / s.N) * v);
    return v;
}

} // namespace detail

// (k_opt / c)^{N / theta}.
[[nodiscard]] inline double avr_lower_bound(double k_opt, double c, double theta, double N)
{
    if (!(c > 0.0)) throw DomainError("avr_lower_bound: c must be positive");
    if (!(k_opt > 0.0)) throw DomainError("avr_lower_bound: k_opt must be positive");
    if (!(theta > 0.0) || theta > 1.0) throw DomainError("avr_lower_bound: theta must lie in (0, 1]");
    if (!(N > 1.0)) throw DomainError("avr_lower_bound: N must exceed 1");
    return std::pow(k_opt / c, N / theta);
}

// L (L/l)^{(N(p-1)+1)/(q(p-1))} - (k_opt/c)^N; non-negative when the
// inequality with constant c is compatible with the measured (l, L).
[[nodiscard]] inline double liminf_limsup_bound(double l, double L, double p, double q, double N, double k_opt,
                                                double c)
{
    if (!(l > 0.0) || L < l) throw DomainError("liminf_limsup_bound: need 0 < l <= L");
    if (!(p > 1.0) || !(q > 0.0) || !(N > 1.0)) throw DomainError("liminf_limsup_bound: bad exponents");
    if (!(c > 0.0) || !(k_opt > 0.0)) throw DomainError("liminf_limsup_bound: constants must be positive");
    const double e = (N * (p - 1.0) + 1.0) / (q * (p - 1.0));
    return L * std::pow(L / l, e) - std::pow(k_opt / c, N);
}

[[nodiscard]] inline BlowdownReport scaled_family_ratios(const RadialSpace& space, const InequalitySpec& spec,
                                                         const ExtremalProfile& u0,
                                                         const std::vector<double>& radii = default_blowdown_radii())
{
    if (std::abs(space.N - spec.N) > 1e-12) throw DomainError("blowdown: space and spec dimensions differ");
    if (spec.family == Family::moser_trudinger) throw DomainError("blowdown: use mt_blowdown for MOSER_TRUDINGER");
    detail::check_radii(radii);
    const AsymptoticsReport asym = check_extremal_asymptotics(u0, spec);
    if (!asym.ok) {
        // An unbounded |u0'|^p at the origin leaves every integral finite;
        // the run goes ahead with a note. Anything else is fatal.
        if (asym.failed_clause != "|u'|^p locally BV")
            throw PreconditionError("blowdown: profile fails " + asym.failed_clause);
        // h V must still vanish at the origin.
        const double tiny = 1e-12 * (u0.compact() ? u0.support : 1.0);
        const double hv = std::pow(std::abs(u0.du(tiny)), spec.p) * cone_volume(ModelCone::make(spec.N), tiny);
        if (!std::isfinite(hv) || hv > 1.0)
            throw PreconditionError("blowdown: profile fails " + asym.failed_clause);
    }

    BlowdownReport rep;
    rep.family = to_string(spec.family);
    rep.space = space.label;
    rep.radii = radii;
    rep.declared_avr = space.avr;
    if (!asym.ok) rep.notes.push_back("|u0'|^p is unbounded at the origin (not locally BV); integrals still converge");

    const ModelCone cone = ModelCone::make(spec.N);
    const RadialSpace cone_space_ = euclidean_space(spec.N);
    const double p = spec.p;
    const Family f = spec.family;

    std::optional<double> qexp;
    if (f == Family::faber_krahn_1)
        qexp = 1.0;
    else if (f == Family::faber_krahn_2)
        qexp = p;
    else if (f != Family::morrey)
        qexp = spec.q;
    if (!qexp && f != Family::morrey) throw DomainError("blowdown: family without an integral numerator");

    const ExtremalProfile hp = detail::gradient_power_profile(u0, p);
    rep.ratio_p = detail::ratio_sequence(space, radii, [&](const RadialSpace& s) { return radial_integral(s, hp); });
    rep.cone_p = radial_integral(cone_space_, hp);
    const Extrapolation ep = extrapolate_limit(radii, rep.ratio_p);
    rep.limit_p = ep.limit;
    bool ok = ep.converged;

    if (qexp) {
        rep.q_exponent = *qexp;
        const ExtremalProfile hq = detail::power_profile(u0, *qexp);
        rep.ratio_q = detail::ratio_sequence(space, radii, [&](const RadialSpace& s) { return radial_integral(s, hq); });
        rep.cone_q = radial_integral(cone_space_, hq);
        const Extrapolation eq = extrapolate_limit(radii, rep.ratio_q);
        rep.limit_q = eq.limit;
        ok = ok && eq.converged;
    } else {
        const double S = detail::sup_abs(u0);
        rep.q_exponent = infinity;
        rep.ratio_q.assign(radii.size(), S);
        rep.cone_q = S;
        rep.limit_q = S;
    }
    if (spec.theta < 1.0 && !detail::is_support_family(f)) {
        const ExtremalProfile hr = detail::power_profile(u0, *spec.r);
        rep.ratio_r = detail::ratio_sequence(space, radii, [&](const RadialSpace& s) { return radial_integral(s, hr); });
        rep.cone_r = radial_integral(cone_space_, hr);
        const Extrapolation er = extrapolate_limit(radii, rep.ratio_r);
        rep.limit_r = er.limit;
        ok = ok && er.converged;
    }
    if (detail::is_support_family(f)) {
        if (!u0.compact()) throw PreconditionError("blowdown: support-measure family needs a compact profile");
        const double R0 = u0.support;
        for (double R : radii) rep.ratio_support.push_back(space.V(R * R0) / std::pow(R, spec.N));
        rep.cone_support = cone_volume(cone, R0);
        const Extrapolation es = extrapolate_limit(radii, rep.ratio_support);
        rep.limit_support = es.limit;
        ok = ok && es.converged;
    }
    rep.converged = ok;

    // Apparent AVR from the exactly computable (non-gradient) terms.
    rep.attained_avr = f == Family::morrey ? rep.limit_support / rep.cone_support : rep.limit_q / rep.cone_q;

    const double th = spec.theta;
    switch (f) {
    case Family::morrey:
        rep.limit_quotient = rep.limit_q / (std::pow(rep.limit_p, 1.0 / p) *
                                            std::pow(rep.limit_support, 1.0 / spec.N - 1.0 / p));
        break;
    case Family::faber_krahn_1:
        rep.limit_quotient =
            rep.limit_q / (std::pow(rep.limit_p, 1.0 / p) * std::pow(rep.limit_support, 1.0 - 1.0 / spec.p_star()));
        break;
    case Family::faber_krahn_2:
        rep.limit_quotient =
            std::pow(rep.limit_q, 1.0 / p) / (std::pow(rep.limit_p, 1.0 / p) * std::pow(rep.limit_support, 1.0 / spec.N));
        break;
    default: {
        double den = std::pow(rep.limit_p, th / p);
        if (th < 1.0) den *= std::pow(rep.limit_r, (1.0 - th) / *spec.r);
        rep.limit_quotient = std::pow(rep.limit_q, 1.0 / *qexp) / den;
    }
    }
    return rep;
}

namespace detail {

inline void finish_verdict(BlowdownReport& rep, const RadialSpace& space, double k_realized, double c, double e,
                           double N, std::optional<double> q_theta1, double p)
{
    rep.constant = c;
    rep.k_realized = k_realized;
    rep.avr_bound = std::pow(k_realized / c, N / e);
    if (rep.converged) {
        rep.verdict = space.avr >= rep.avr_bound - 1e-6 ? "consistent" : "violated";
        return;
    }
    // No limit: fall back to the liminf/limsup form (theta = 1 only).
    const AvrEstimate est = estimate_avr(space, default_avr_schedule());
    rep.liminf_l = est.l;
    rep.limsup_L = est.L;
    if (q_theta1 && est.l > 0.0) {
        const double res = liminf_limsup_bound(est.l, est.L, p, *q_theta1, N, k_realized, c);
        rep.verdict = res >= -1e-6 ? "consistent (liminf/limsup)" : "violated";
    } else {
        rep.verdict = "inconclusive";
    }
    rep.notes.push_back("extrapolation did not converge; liminf/limsup of the volume ratio reported");
}

} // namespace detail

// Full chain for one assumed constant c: ratios, limits, and the check
// space.avr >= (K/c)^{N/theta}.
[[nodiscard]] inline BlowdownReport end_to_end_blowdown(const RadialSpace& space, const InequalitySpec& spec,
                                                        const ExtremalProfile& u0, double c,
                                                        const std::vector<double>& radii = default_blowdown_radii());

struct MtBlowdownReport {
    std::string space;
    int n = 2;
    double constant = nan;
    double threshold = nan;  // avr^{1/(n-1)} alpha_n
    double eps = nan;
    double avr_bound = nan;  // (c / alpha_n)^{n-1}
    std::vector<int> ks;
    std::vector<double> values;      // R -> infinity limit of I_{R,eps,k}
    std::vector<double> log_values;
    std::vector<double> energies;    // ||grad u_{R,eps,k}||_n^n at the largest radius
    bool normalized = false;         // every energy <= 1
    double last_over_first = nan;
    double tail_spread = nan;        // max / min over the final four values
    double tail_exponent = nan;      // d log I / d log k over the final four values
    std::string verdict;             // divergent, bounded or inconclusive
};

[[nodiscard]] inline std::vector<int> default_moser_schedule()
{
    std::vector<int> k;
    for (int j = 1; j <= 12; ++j) k.push_back(1 << j);
    return k;
}

[[nodiscard]] inline double mt_threshold(double avr, int n)
{
    return std::pow(avr, 1.0 / (n - 1.0)) * mt_critical_exponent(n);
}

// I_{R,eps,k} = m(B_R)^{-1} int_{B_R} exp(c |u|^{n/(n-1)}) dm with
// u = (avr + eps)^{-1/n} w_k(d/R); divergence along k certifies that c
// cannot be an admissible Moser-Trudinger exponent on the space.
[[nodiscard]] inline MtBlowdownReport mt_blowdown(const RadialSpace& space, int n, double c,
                                                  std::vector<int> k_schedule = default_moser_schedule(),
                                                  const std::vector<double>& radii = default_blowdown_radii(),
                                                  std::optional<double> eps = {})
{
    if (n < 2) throw DomainError("mt_blowdown: n must be an integer >= 2");
    if (std::abs(space.N - n) > 1e-12) throw DomainError("mt_blowdown: space dimension must equal n");
    if (!(space.avr > 0.0)) throw PreconditionError("mt_blowdown: needs avr > 0");
    if (!(c > 0.0)) throw DomainError("mt_blowdown: c must be positive");
    if (k_schedule.size() < 4) throw DomainError("mt_blowdown: need at least four k values");
    detail::check_radii(radii);
    MtBlowdownReport rep;
    rep.space = space.label;
    rep.n = n;
    rep.constant = c;
    rep.threshold = mt_threshold(space.avr, n);
    rep.eps = eps ? *eps : 0.05 * space.avr;
    rep.avr_bound = std::pow(c / mt_critical_exponent(n), n - 1.0);
    rep.ks = k_schedule;
    const double amp = std::pow(space.avr + rep.eps, -1.0 / n);
    const double e = n / (n - 1.0);
    const double beta = c * std::pow(amp, e);
    rep.normalized = true;

    for (int k : k_schedule) {
        const ExtremalProfile w = moser_function(n, k);
        const double M = beta * std::pow(w.u(0.0), e);
        ExtremalProfile h = w;
        h.value = [=](double t) { return std::exp(beta * std::pow(std::abs(w.value(t)), e) - M); };
        h.derivative = [=](double t) {
            const double x = w.value(t);
            const double d = w.derivative(t);
            if (d == 0.0 || x == 0.0) return 0.0;
            return std::exp(beta * std::pow(std::abs(x), e) - M) * beta * e * std::pow(std::abs(x), e - 1.0) * d;
        };
        h.second = nullptr;
        const std::vector<double> logs = detail::parallel_map(radii.size(), [&](std::size_t i) {
            const RadialSpace s = detail::scaled_space(space, radii[i]);
            return M + std::log(radial_integral(s, h, 1.0) / s.V(1.0));
        });
        std::vector<double> vals;
        for (double l : logs) vals.push_back(std::exp(l - M));
        const Extrapolation ex = extrapolate_limit(radii, vals);
        const double logI = M + std::log(ex.limit);
        rep.log_values.push_back(logI);
        rep.values.push_back(std::exp(logI));

        const ExtremalProfile g = detail::gradient_power_profile(w, n);
        const double energy = std::pow(amp, n) * radial_integral(detail::scaled_space(space, radii.back()), g);
        rep.energies.push_back(energy);
        if (energy > 1.0 + 1e-12) rep.normalized = false;
    }

    const std::size_t m = rep.values.size();
    rep.last_over_first = rep.values.back() / rep.values.front();
    const auto tail = std::vector<double>(rep.values.end() - 4, rep.values.end());
    rep.tail_spread = *std::max_element(tail.begin(), tail.end()) / *std::min_element(tail.begin(), tail.end());
    rep.tail_exponent = (rep.log_values[m - 1] - rep.log_values[m - 4]) /
                        (std::log(static_cast<double>(rep.ks[m - 1])) - std::log(static_cast<double>(rep.ks[m - 4])));
    const bool increasing = std::is_sorted(tail.begin(), tail.end()) &&
                            std::adjacent_find(tail.begin(), tail.end(), std::equal_to<>()) == tail.end();
    if (increasing && rep.last_over_first >= 10.0)
        rep.verdict = "divergent";
    else if (rep.tail_spread <= 1.5)
        rep.verdict = "bounded";
    else
        rep.verdict = "inconclusive";
    return rep;
}

// Log-Sobolev blow-down with the normalized Gaussian; bound (L/c)^{N/p}.
[[nodiscard]] inline BlowdownReport log_sobolev_blowdown(const RadialSpace& space, double p, double N, double c,
                                                         const std::vector<double>& radii = default_blowdown_radii())
{
    if (std::abs(space.N - N) > 1e-12) throw DomainError("log_sobolev_blowdown: space dimension must equal N");
    if (!(c > 0.0)) throw DomainError("log_sobolev_blowdown: c must be positive");
    detail::check_radii(radii);
    const InequalitySpec spec = make_spec(Family::log_sobolev, {.N = N, .p = p});
    const ExtremalProfile u0 = extremizer(spec);
    BlowdownReport rep;
    rep.family = to_string(spec.family);
    rep.space = space.label;
    rep.radii = radii;
    rep.declared_avr = space.avr;
    rep.q_exponent = p;
    const RadialSpace flat = euclidean_space(N);
    const ExtremalProfile hq = detail::power_profile(u0, p);
    const ExtremalProfile hp = detail::gradient_power_profile(u0, p);
    const ExtremalProfile he = detail::entropy_profile(u0, p);
    rep.ratio_q = detail::ratio_sequence(space, radii, [&](const RadialSpace& s) { return radial_integral(s, hq); });
    rep.ratio_p = detail::ratio_sequence(space, radii, [&](const RadialSpace& s) { return radial_integral(s, hp); });
    rep.ratio_entropy = detail::ratio_sequence(space, radii, [&](const RadialSpace& s) { return radial_integral(s, he); });
    rep.cone_q = radial_integral(flat, hq);
    rep.cone_p = radial_integral(flat, hp);
    rep.cone_entropy = radial_integral(flat, he);
    const Extrapolation a = extrapolate_limit(radii, rep.ratio_q);
    const Extrapolation b = extrapolate_limit(radii, rep.ratio_p);
    const Extrapolation d = extrapolate_limit(radii, rep.ratio_entropy);
    rep.limit_q = a.limit;
    rep.limit_p = b.limit;
    rep.limit_entropy = d.limit;
    rep.converged = a.converged && b.converged && d.converged;
    rep.attained_avr = rep.limit_q / rep.cone_q;
    // Smallest C with Ent(u/||u||_p) <= (N/p) log(C ||u'||_p^p / ||u||_p^p)
    // along the family; the R^N factors cancel.
    const double ent = rep.limit_entropy / rep.limit_q - std::log(rep.limit_q);
    rep.limit_quotient = std::exp((p / N) * ent) * rep.limit_q / rep.limit_p;
    detail::finish_verdict(rep, space, detail::realized_constant(spec, u0), c, p, N, std::nullopt, p);
    return rep;
}

[[nodiscard]] inline BlowdownReport end_to_end_blowdown(const RadialSpace& space, const InequalitySpec& spec,
                                                        const ExtremalProfile& u0, double c,
                                                        const std::vector<double>& radii)
{
    if (!(c > 0.0)) throw DomainError("end_to_end_blowdown: c must be positive");
    if (spec.family == Family::log_sobolev) return log_sobolev_blowdown(space, spec.p, spec.N, c, radii);
    BlowdownReport rep = scaled_family_ratios(space, spec, u0, radii);
    const double e = detail::bound_exponent(spec);
    std::optional<double> q1;
    if (e == 1.0 && spec.q && !detail::is_support_family(spec.family)) q1 = spec.q;
    detail::finish_verdict(rep, space, detail::realized_constant(spec, u0), c, e, spec.N, q1, spec.p);
    return rep;
}

struct CknBound {
    double D = nan;  // (1-theta) gamma + theta (1+beta) - alpha
    bool degenerate = false;
    double bound = nan;
    std::string statement;
};

[[nodiscard]] inline CknBound ckn_avr_bound(double k_opt, double c, double theta, double N, double alpha, double beta,
                                            double gamma_)
{
    if (!(c > 0.0) || !(k_opt > 0.0)) throw DomainError("ckn_avr_bound: constants must be positive");
    CknBound b;
    b.D = (1.0 - theta) * gamma_ + theta * (1.0 + beta) - alpha;
    if (std::abs(b.D) > 1e-12) {
        b.bound = std::pow(k_opt / c, N / b.D);
        b.statement = "AVR >= (K/C)^{N/D}";
    } else {
        b.degenerate = true;
        b.statement = "degenerate: only C >= K follows";
    }
    return b;
}

struct LocalDensityBound {
    double density = nan;
    bool converged = false;
    double bound = nan;
    bool ok = false;
};

// r -> 0 mirror of the blow-down: the local density must dominate (K/c)^{N/theta}.
[[nodiscard]] inline LocalDensityBound local_density_bound(const RadialSpace& space, const InequalitySpec& spec,
                                                           const ExtremalProfile& u0, double c)
{
    if (!(c > 0.0)) throw DomainError("local_density_bound: c must be positive");
    const LocalDensity d = local_density(space);
    LocalDensityBound out;
    out.density = d.value;
    out.converged = d.converged;
    if (!d.converged) throw ConvergenceError("local_density_bound: local density of " + space.label + " does not converge");
    out.bound = std::pow(detail::realized_constant(spec, u0) / c, spec.N / detail::bound_exponent(spec));
    out.ok = out.density >= out.bound - 1e-6;
    return out;
}

} // namespace conesob
