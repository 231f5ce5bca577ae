#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "conesob/error.hpp"

namespace conesob {

[[nodiscard]] inline double gamma(double x)
{
    if (!(x > 0.0)) throw DomainError("gamma: argument must be positive, got " + std::to_string(x));
    return std::tgamma(x);
}

[[nodiscard]] inline double log_gamma(double x)
{
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    return std::lgamma(x);
}

[[nodiscard]] inline double beta(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
    if (a + b < 170.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Volume of the unit ball for real dimension N.
[[nodiscard]] inline double unit_ball_volume(double N)
{
    return std::pow(std::numbers::pi, 0.5 * N) / gamma(0.5 * N + 1.0);
}

namespace detail {

// sum_k (-x^2/4)^k / (k! (nu+1)_k), i.e. J_nu(x) / ((x/2)^nu / Gamma(nu+1)).
inline double bessel_series_core(double nu, double x)
{
    const double y = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= y / (k * (nu + k));
        sum += term;
        // Terms alternate and decrease in magnitude once k > |y|, so the
        // first omitted term bounds the remainder.
        if (k > -y && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Steed's method: CF1 for J'/J at order nu, downward recurrence to the
// fractional order mu, CF2 for (J'+iY')/(J+iY) at mu, Wronskian to fix scale.
// Valid for x >= 2.
inline std::pair<double, double> bessel_steed(double nu, double x)
{
    constexpr double eps = 1e-16;
    constexpr double fpmin = 1e-300;
    constexpr int maxit = 100000;
    const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
    const double mu = nu - nl;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / std::numbers::pi;

    int isign = 1;
    double h = nu * xi;
    if (h < fpmin) h = fpmin;
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 0;
    for (; i < maxit; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b - 1.0 / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= eps) break;
    }
    if (i == maxit) throw ConvergenceError("bessel_j: CF1 did not converge");

    double rjl = isign * 1e-150;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    const double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = eps;
    const double f = rjpl / rjl;

    double a = 0.25 - mu * mu;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    fact = a * xi / (p * p + q * q);
    double cr = br + q * fact;
    double ci = bi + p * fact;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (i = 1; i < maxit; ++i) {
        a += 2 * i;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1.0) + std::abs(dli) <= eps) break;
    }
    if (i == maxit) throw ConvergenceError("bessel_j: CF2 did not converge");

    const double gam = (p - f) / q;
    double rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    const double scale = rjmu / rjl;
    return {rjl1 * scale, rjp1 * scale};
}

} // namespace detail

// J_nu(x) / x^nu, finite at x = 0 where it equals 1 / (2^nu Gamma(nu+1)).
[[nodiscard]] inline double bessel_j_scaled(double nu, double x)
{
    if (nu < 0.0) throw DomainError("bessel_j: order must be >= 0");
    if (x < 0.0) throw DomainError("bessel_j: argument must be >= 0");
    const double lead = std::exp(-nu * std::numbers::ln2 - std::lgamma(nu + 1.0));
    if (x < 2.0) return lead * detail::bessel_series_core(nu, x);
    return detail::bessel_steed(nu, x).first / std::pow(x, nu);
}

[[nodiscard]] inline double bessel_j(double nu, double x)
{
    if (nu < 0.0) throw DomainError("bessel_j: order must be >= 0");
    if (x < 0.0) throw DomainError("bessel_j: argument must be >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x < 2.0) {
        const double lead = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
        return lead * detail::bessel_series_core(nu, x);
    }
    return detail::bessel_steed(nu, x).first;
}

// dJ_nu/dx.
[[nodiscard]] inline double bessel_j_derivative(double nu, double x)
{
    if (x < 0.0) throw DomainError("bessel_j_derivative: argument must be >= 0");
    if (x == 0.0) {
        if (nu == 0.0 || nu > 1.0) return 0.0;
        if (nu == 1.0) return 0.5;
        return std::numeric_limits<double>::infinity();
    }
    if (x >= 2.0) return detail::bessel_steed(nu, x).second;
    return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

// k-th positive zero j_{nu,k}. Consecutive zeros are more than 3 apart for
// nu >= 0, so a unit-step scan from nu cannot skip a sign change.
[[nodiscard]] inline double bessel_zero(double nu, int k)
{
    if (nu < 0.0) throw DomainError("bessel_zero: order must be >= 0");
    if (k < 1) throw DomainError("bessel_zero: index must be >= 1");

    // McMahon expansion, used as the secant seed inside the bracket.
    const double b = (k + 0.5 * nu - 0.25) * std::numbers::pi;
    const double m = 4.0 * nu * nu;
    const double mcmahon = b - (m - 1.0) / (8.0 * b) - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * std::pow(8.0 * b, 3));

    double lo = std::max(nu, 1e-3);
    double flo = bessel_j(nu, lo);
    int found = 0;
    double hi = lo;
    double fhi = flo;
    const double limit = nu + 4.0 * k + 10.0 + k * std::numbers::pi;
    while (hi < limit) {
        const double x = hi + 1.0;
        const double fx = bessel_j(nu, x);
        if (fx == 0.0 || std::signbit(fx) != std::signbit(fhi)) {
            if (++found == k) {
                lo = hi;
                flo = fhi;
                hi = x;
                fhi = fx;
                break;
            }
        }
        hi = x;
        fhi = fx;
    }
    if (found < k) throw ConvergenceError("bessel_zero: no bracket found up to x=" + std::to_string(limit));
    if (fhi == 0.0) return hi;

    // Bisection/secant hybrid: take the secant point when it falls in the
    // inner part of the bracket, bisect otherwise.
    double x = (mcmahon > lo && mcmahon < hi) ? mcmahon : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = bessel_j(nu, x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= 4e-16 * hi) return 0.5 * (lo + hi);
        const double sec = hi - fhi * (hi - lo) / (fhi - flo);
        const double width = hi - lo;
        if (sec > lo + 0.05 * width && sec < hi - 0.05 * width && it % 4 != 3)
            x = sec;
        else
            x = 0.5 * (lo + hi);
    }
    throw ConvergenceError("bessel_zero: no convergence, last bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
}

struct BesselInequalityReport {
    bool holds = false;
    double worst_margin = 0.0;
    double worst_t = 0.0;
};

// Checks J_nu(j t)/J_nu(j) <= t^nu on a uniform grid of [0,1], j = j_{nu+1,1}.
[[nodiscard]] inline BesselInequalityReport bessel_inequality_check(double nu, int samples)
{
    if (samples < 2) throw DomainError("bessel_inequality_check: need at least 2 samples");
    const double j = bessel_zero(nu + 1.0, 1);
    const double jnu_at_j = bessel_j(nu, j);
    BesselInequalityReport rep{.holds = true, .worst_margin = std::numeric_limits<double>::infinity()};
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double lhs = bessel_j(nu, j * t) / jnu_at_j;
        const double margin = std::pow(t, nu) - lhs;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_t = t;
        }
    }
    rep.holds = rep.worst_margin >= -1e-12;
    return rep;
}

} // namespace conesob
