#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "conesob/error.hpp"
#include "conesob/specfun.hpp"

namespace conesob {

// Radially symmetric metric measure space reduced to its ball-volume
// function around the basepoint.
struct RadialSpace {
    double N = 0.0;
    std::function<double(double)> V;
    std::function<double(double)> v;  // V'
    double avr = 0.0;
    std::string label;
    bool cd_flag = false;
    std::vector<double> breakpoints;  // radii where v is not smooth

    [[nodiscard]] double omega() const { return unit_ball_volume(N); }
    [[nodiscard]] double volume_ratio(double r) const { return V(r) / (omega() * std::pow(r, N)); }
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int per_decade)
{
    std::vector<double> g;
    const int n = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
    for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
    return g;
}

// Bishop-Gromov on a grid: largest relative increase of V(r)/r^N.
inline double bishop_gromov_violation(const RadialSpace& s, const std::vector<double>& grid)
{
    double worst = 0.0;
    double prev = s.V(grid.front()) / std::pow(grid.front(), s.N);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = s.V(grid[i]) / std::pow(grid[i], s.N);
        worst = std::max(worst, (cur - prev) / prev);
        prev = cur;
    }
    return worst;
}

inline void validate(const RadialSpace& s)
{
    if (!(s.N > 1.0)) throw DomainError("RadialSpace: N must exceed 1");
    if (s.V(0.0) != 0.0) throw DomainError("RadialSpace " + s.label + ": V(0) must be 0");
    const std::vector<double> grid = log_grid(1e-3, 1e6, 20);
    double prev = 0.0;
    for (double r : grid) {
        const double V = s.V(r);
        const double v = s.v(r);
        if (!std::isfinite(V) || !std::isfinite(v)) throw DomainError("RadialSpace " + s.label + ": non-finite V");
        if (V < prev) throw DomainError("RadialSpace " + s.label + ": V decreasing at r=" + std::to_string(r));
        if (v < 0.0) throw DomainError("RadialSpace " + s.label + ": negative density at r=" + std::to_string(r));
        prev = V;
    }
    if (s.cd_flag && bishop_gromov_violation(s, grid) > 1e-12)
        throw DomainError("RadialSpace " + s.label + ": cd_flag set but Bishop-Gromov fails");
}

// Fritsch-Carlson monotone cubic through (x_i, y_i).
struct MonotoneCubic {
    std::vector<double> x, y, m;

    MonotoneCubic(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys))
    {
        const std::size_t n = x.size();
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        m.assign(n, 0.0);
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) m[i] = d[i - 1] * d[i] <= 0.0 ? 0.0 : 0.5 * (d[i - 1] + d[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) {
                m[i] = m[i + 1] = 0.0;
                continue;
            }
            const double a = m[i] / d[i];
            const double b = m[i + 1] / d[i];
            const double h = a * a + b * b;
            if (h > 9.0) {
                const double t = 3.0 / std::sqrt(h);
                m[i] = t * a * d[i];
                m[i + 1] = t * b * d[i];
            }
        }
    }

    [[nodiscard]] std::size_t segment(double t) const
    {
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        return std::min(i, x.size() - 2);
    }

    [[nodiscard]] double value(double t) const
    {
        const std::size_t i = segment(t);
        const double h = x[i + 1] - x[i];
        const double s = (t - x[i]) / h;
        return (1 + 2 * s) * (1 - s) * (1 - s) * y[i] + s * (1 - s) * (1 - s) * h * m[i] +
               s * s * (3 - 2 * s) * y[i + 1] + s * s * (s - 1) * h * m[i + 1];
    }

    [[nodiscard]] double derivative(double t) const
    {
        const std::size_t i = segment(t);
        const double h = x[i + 1] - x[i];
        const double s = (t - x[i]) / h;
        return (6 * s * s - 6 * s) * (y[i] - y[i + 1]) / h + (3 * s * s - 4 * s + 1) * m[i] + (3 * s * s - 2 * s) * m[i + 1];
    }
};

} // namespace detail

[[nodiscard]] inline RadialSpace euclidean_space(double n)
{
    const double w = unit_ball_volume(n);
    RadialSpace s{n, [=](double r) { return w * std::pow(r, n); }, [=](double r) { return n * w * std::pow(r, n - 1.0); },
                  1.0, "euclidean(" + std::to_string(n).substr(0, 4) + ")", true, {}};
    detail::validate(s);
    return s;
}

[[nodiscard]] inline RadialSpace cone_space(double N, double a)
{
    if (!(a > 0.0) || a > 1.0) throw DomainError("cone: a must lie in (0, 1]");
    const double w = unit_ball_volume(N);
    RadialSpace s{N,
                  [=](double r) { return a * w * std::pow(r, N); },
                  [=](double r) { return a * N * w * std::pow(r, N - 1.0); },
                  a,
                  "cone(N=" + std::to_string(N).substr(0, 4) + ",a=" + std::to_string(a).substr(0, 6) + ")",
                  true,
                  {}};
    detail::validate(s);
    return s;
}

// V = omega r^N (a + (b-a)/(1+r)): density b near the tip, AVR a.
[[nodiscard]] inline RadialSpace interpolated_space(double N, double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("interpolated: a and b must be positive");
    const double w = unit_ball_volume(N);
    RadialSpace s{N,
                  [=](double r) { return w * std::pow(r, N) * (a + (b - a) / (1.0 + r)); },
                  [=](double r) {
                      const double f = a + (b - a) / (1.0 + r);
                      return w * std::pow(r, N - 1.0) * (N * f - r * (b - a) / ((1.0 + r) * (1.0 + r)));
                  },
                  a,
                  "interpolated(N=" + std::to_string(N).substr(0, 4) + ",a=" + std::to_string(a).substr(0, 6) +
                      ",b=" + std::to_string(b).substr(0, 6) + ")",
                  b >= a,
                  {}};
    detail::validate(s);
    return s;
}

// Ball volume frozen beyond r0: zero AVR.
[[nodiscard]] inline RadialSpace capped_space(double N, double r0)
{
    if (!(r0 > 0.0)) throw DomainError("capped: r0 must be positive");
    const double w = unit_ball_volume(N);
    RadialSpace s{N,
                  [=](double r) { return w * std::pow(std::min(r, r0), N); },
                  [=](double r) { return r < r0 ? N * w * std::pow(r, N - 1.0) : 0.0; },
                  0.0,
                  "capped(N=" + std::to_string(N).substr(0, 4) + ",r0=" + std::to_string(r0).substr(0, 6) + ")",
                  true,
                  {r0}};
    detail::validate(s);
    return s;
}

// V = omega r^N (mean + amp sin(log r)): the volume ratio has no limit.
// The declared avr is the liminf.
[[nodiscard]] inline RadialSpace oscillating_space(double N, double mean, double amp)
{
    if (!(amp >= 0.0) || !(mean - amp > 0.0)) throw DomainError("oscillating: need mean > amp >= 0");
    const double w = unit_ball_volume(N);
    RadialSpace s{N,
                  [=](double r) { return r == 0.0 ? 0.0 : w * std::pow(r, N) * (mean + amp * std::sin(std::log(r))); },
                  [=](double r) {
                      if (r == 0.0) return 0.0;
                      const double L = std::log(r);
                      return w * std::pow(r, N - 1.0) * (N * (mean + amp * std::sin(L)) + amp * std::cos(L));
                  },
                  mean - amp,
                  "oscillating(N=" + std::to_string(N).substr(0, 4) + ",mean=" + std::to_string(mean).substr(0, 6) +
                      ",amp=" + std::to_string(amp).substr(0, 6) + ")",
                  false,
                  {}};
    detail::validate(s);
    return s;
}

// Monotone cubic through the table in the variables (log r, log(V/r^N)),
// so a Bishop-Gromov table stays Bishop-Gromov after interpolation. Outside
// the tabulated range V is extended as a cone. The declared avr is the
// ratio at the last row.
[[nodiscard]] inline RadialSpace user_space(double N, std::vector<double> r, std::vector<double> V,
                                            std::string label = "user")
{
    if (r.size() != V.size() || r.size() < 2) throw DomainError("user space: need at least two (r, V) rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || !std::isfinite(V[i]) || !(V[i] > 0.0))
            throw DomainError("user space: radii and volumes must be positive");
        if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("user space: radii must be strictly increasing");
        if (i > 0 && V[i] < V[i - 1]) throw DomainError("user space: volumes must be non-decreasing");
    }
    const double w = unit_ball_volume(N);
    std::vector<double> x, z;
    for (std::size_t i = 0; i < r.size(); ++i) {
        x.push_back(std::log(r[i]));
        z.push_back(std::log(V[i]) - N * x.back());
    }
    const double x0 = x.front(), x1 = x.back(), z0 = z.front(), z1 = z.back();
    auto cubic = std::make_shared<detail::MonotoneCubic>(x, z);
    const auto zf = [=](double lr) { return lr <= x0 ? z0 : lr >= x1 ? z1 : cubic->value(lr); };
    const auto dz = [=](double lr) { return lr <= x0 || lr >= x1 ? 0.0 : cubic->derivative(lr); };
    RadialSpace s;
    s.N = N;
    s.V = [=](double t) { return t == 0.0 ? 0.0 : std::pow(t, N) * std::exp(zf(std::log(t))); };
    s.v = [=](double t) {
        if (t == 0.0) return 0.0;
        const double lr = std::log(t);
        return std::max(0.0, std::pow(t, N - 1.0) * std::exp(zf(lr)) * (N + dz(lr)));
    };
    s.avr = std::exp(z1) / w;
    s.label = std::move(label);
    s.breakpoints = r;
    s.cd_flag = detail::bishop_gromov_violation(s, detail::log_grid(1e-3, 1e6, 20)) <= 1e-12;
    detail::validate(s);
    return s;
}

[[nodiscard]] inline RadialSpace load_volume_csv(const std::string& path, double N)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open volume table " + path);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("volume table " + path + " is empty");
    std::vector<double> r, V;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) throw DomainError(path + ": malformed row " + std::to_string(row));
        r.push_back(a);
        V.push_back(b);
    }
    return user_space(N, std::move(r), std::move(V), "csv:" + path);
}

// Parses "kind:key=value,..." descriptors, e.g. "cone:N=3,a=0.5" or
// "csv:vol.csv,N=3".
[[nodiscard]] inline RadialSpace parse_space(const std::string& descriptor)
{
    const auto colon = descriptor.find(':');
    const std::string kind = descriptor.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
    std::map<std::string, double> kv;
    std::string path;
    std::stringstream ss(rest);
    std::string item;
    bool first = true;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            if (kind == "csv" && first) {
                path = item;
                first = false;
                continue;
            }
            throw DomainError("space descriptor: expected key=value, got '" + item + "'");
        }
        first = false;
        const std::string key = item.substr(0, eq);
        try {
            kv[key] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw DomainError("space descriptor: bad number for " + key);
        }
    }
    const auto take = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, _] : kv) {
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end())
                throw DomainError("space descriptor: unknown key '" + k + "' for " + kind);
        }
    };
    const auto get = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw DomainError(std::string("space descriptor: missing ") + key + " for " + kind);
        return it->second;
    };
    if (kind == "euclid" || kind == "euclidean") {
        take({"n", "N"});
        return euclidean_space(kv.count("n") ? kv["n"] : get("N"));
    }
    if (kind == "cone") {
        take({"N", "a"});
        return cone_space(get("N"), get("a"));
    }
    if (kind == "interpolated") {
        take({"N", "a", "b"});
        return interpolated_space(get("N"), get("a"), get("b"));
    }
    if (kind == "capped") {
        take({"N", "r0"});
        return capped_space(get("N"), kv.count("r0") ? kv["r0"] : 1.0);
    }
    if (kind == "oscillating") {
        take({"N", "mean", "amp"});
        return oscillating_space(get("N"), get("mean"), get("amp"));
    }
    if (kind == "csv") {
        take({"N"});
        if (path.empty()) throw DomainError("space descriptor: csv needs a path");
        return load_volume_csv(path, get("N"));
    }
    throw DomainError("space descriptor: unknown kind '" + kind + "'");
}

struct AvrEstimate {
    double value = 0.0;  // extrapolated limit (last Richardson value)
    bool converged = false;
    double l = 0.0;  // min of the raw ratio over the tail half of the schedule
    double L = 0.0;  // max of the raw ratio over the tail half
    std::vector<double> radii;
    std::vector<double> ratios;
    std::vector<double> extrapolated;
    std::vector<double> residuals;
};

[[nodiscard]] inline std::vector<double> default_avr_schedule() { return detail::log_grid(1e1, 1e8, 20); }

// Richardson extrapolation of V(r)/(omega r^N) assuming an O(1/r)
// correction: e_i = (r_{i+1} f_{i+1} - r_i f_i)/(r_{i+1} - r_i).
[[nodiscard]] inline AvrEstimate estimate_avr(const RadialSpace& s, const std::vector<double>& radii)
{
    if (radii.size() < 4) throw DomainError("estimate_avr: need at least 4 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw DomainError("estimate_avr: radii must be increasing");
    AvrEstimate e;
    e.radii = radii;
    for (double r : radii) e.ratios.push_back(s.volume_ratio(r));
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        e.extrapolated.push_back((radii[i + 1] * e.ratios[i + 1] - radii[i] * e.ratios[i]) / (radii[i + 1] - radii[i]));
    for (std::size_t i = 0; i + 1 < e.extrapolated.size(); ++i)
        e.residuals.push_back(std::abs(e.extrapolated[i + 1] - e.extrapolated[i]));
    e.value = e.extrapolated.back();
    const auto tail = e.ratios.begin() + static_cast<std::ptrdiff_t>(e.ratios.size() / 2);
    e.l = *std::min_element(tail, e.ratios.end());
    e.L = *std::max_element(tail, e.ratios.end());
    const double first = e.residuals.front();
    const double last = e.residuals.back();
    const double scale = std::max(std::abs(e.value), 1e-300);
    // Monotone decay of the residual envelope: the tail-half maximum must
    // also shrink, which rejects oscillating ratios sampled at lucky radii.
    const double tail_max = *std::max_element(e.residuals.begin() + static_cast<std::ptrdiff_t>(e.residuals.size() / 2),
                                              e.residuals.end());
    e.converged = first <= 1e-14 * scale || (last < first / 10.0 && tail_max < first / 10.0);
    return e;
}

struct IsoperimetricReport {
    double worst_margin = 0.0;    // min over radii of v - rhs
    double worst_relative = 0.0;  // the same divided by v
    double at = 0.0;
    bool ok = false;
};

// Ball boundaries against the sharp isoperimetric profile
// v(r) >= N omega^{1/N} avr^{1/N} V(r)^{(N-1)/N}.
[[nodiscard]] inline IsoperimetricReport isoperimetric_check(const RadialSpace& s, const std::vector<double>& radii)
{
    if (!s.cd_flag) throw PreconditionError("isoperimetric_check: space " + s.label + " does not claim CD(0,N)");
    if (s.avr < 0.0) throw PreconditionError("isoperimetric_check: avr must be non-negative");
    IsoperimetricReport rep{.worst_margin = std::numeric_limits<double>::infinity(),
                            .worst_relative = std::numeric_limits<double>::infinity()};
    const double k = s.N * std::pow(s.omega(), 1.0 / s.N) * std::pow(s.avr, 1.0 / s.N);
    for (double r : radii) {
        const double lhs = s.v(r);
        const double rhs = k * std::pow(s.V(r), (s.N - 1.0) / s.N);
        const double m = lhs - rhs;
        const double rel = lhs > 0.0 ? m / lhs : (m >= 0.0 ? 0.0 : -std::numeric_limits<double>::infinity());
        if (rel < rep.worst_relative) {
            rep.worst_relative = rel;
            rep.worst_margin = m;
            rep.at = r;
        }
    }
    rep.ok = rep.worst_relative >= -1e-8;
    return rep;
}

struct BishopGromovReport {
    double worst_increase = 0.0;  // max relative increase of V(r)/r^N along r
    bool ok = false;
};

[[nodiscard]] inline BishopGromovReport bishop_gromov_check(const RadialSpace& s, const std::vector<double>& radii)
{
    BishopGromovReport rep;
    rep.worst_increase = detail::bishop_gromov_violation(s, radii);
    rep.ok = rep.worst_increase <= 1e-12;
    return rep;
}

// Density ratio V(r)/(omega r^N) at r -> 0, Richardson with an O(r) term.
struct LocalDensity {
    double value = 0.0;
    bool converged = false;
    std::vector<double> radii, ratios;
};

[[nodiscard]] inline LocalDensity local_density(const RadialSpace& s)
{
    LocalDensity d;
    d.radii = {1e-1, 1e-2, 1e-3, 1e-4};
    for (double r : d.radii) d.ratios.push_back(s.volume_ratio(r));
    std::vector<double> ext;
    for (std::size_t i = 0; i + 1 < d.radii.size(); ++i) {
        const double r1 = d.radii[i], r2 = d.radii[i + 1];
        ext.push_back((d.ratios[i + 1] * r1 - d.ratios[i] * r2) / (r1 - r2));
    }
    d.value = ext.back();
    const double first = std::abs(ext[1] - ext[0]);
    const double last = std::abs(ext[2] - ext[1]);
    d.converged = first <= 1e-13 * std::abs(d.value) || last < first / 10.0;
    return d;
}

} // namespace conesob
