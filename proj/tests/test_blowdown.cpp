#include <cmath>
#include <cstdlib>
#include <numbers>

#include <gtest/gtest.h>

#include "conesob/blowdown.hpp"

using namespace conesob;

namespace {

constexpr double pi = std::numbers::pi;

ExtremalProfile smooth(std::function<double(double)> v, std::function<double(double)> d, double support,
                       DecayClass decay)
{
    ExtremalProfile h;
    h.value = std::move(v);
    h.derivative = std::move(d);
    h.support = support;
    h.decay = decay;
    return h;
}

double relative_spread(const std::vector<double>& v)
{
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return (*hi - *lo) / std::abs(*hi);
}

} // namespace

TEST(RadialIntegral, BoundaryTermOnly)
{
    const ExtremalProfile one = smooth([](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, DecayClass::compact);
    for (const RadialSpace& s : {euclidean_space(3.0), cone_space(2.0, 0.3), interpolated_space(3.0, 0.4, 1.0)})
        EXPECT_NEAR(radial_integral(s, one), s.V(1.0), 1e-14 * s.V(1.0)) << s.label;
}

TEST(RadialIntegral, ExponentialOnEuclidean)
{
    const ExtremalProfile h = smooth([](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); },
                                     infinity, DecayClass::gaussian);
    EXPECT_NEAR(radial_integral(euclidean_space(3.0), h), 8.0 * pi, 1e-10 * 8.0 * pi);
}

TEST(RadialIntegral, BothRoutesAgreeOnTruncatedSquare)
{
    const ExtremalProfile h = smooth([](double t) { return (1.0 - t) * (1.0 - t); },
                                     [](double t) { return -2.0 * (1.0 - t); }, 1.0, DecayClass::compact);
    const RadialSpace s = cone_space(2.0, 0.5);
    const double a = radial_integral(s, h);
    const double b = weighted_integral(s, h);
    EXPECT_NEAR(a, pi / 12.0, 1e-13);
    EXPECT_NEAR(a, b, 1e-10 * std::abs(b));
}

TEST(RadialIntegral, JumpsAtBreakpointsAreCounted)
{
    ExtremalProfile h = smooth([](double t) { return t < 0.5 ? 2.0 : 1.0; }, [](double) { return 0.0; }, 1.0,
                               DecayClass::compact);
    h.breakpoints = {0.5};
    const RadialSpace s = euclidean_space(2.0);
    EXPECT_NEAR(radial_integral(s, h), 2.0 * s.V(0.5) + (s.V(1.0) - s.V(0.5)), 1e-13);
}

TEST(RadialIntegral, RejectsNonVanishingBoundary)
{
    const ExtremalProfile h = smooth([](double t) { return 1.0 / (1.0 + t); },
                                     [](double t) { return -1.0 / ((1.0 + t) * (1.0 + t)); }, infinity,
                                     DecayClass::power);
    EXPECT_THROW((void)radial_integral(euclidean_space(3.0), h), PreconditionError);
}

TEST(Extrapolation, OneOverRCorrection)
{
    std::vector<double> R, y;
    for (int j = 0; j <= 12; ++j) {
        R.push_back(std::ldexp(1.0, j));
        y.push_back(0.4 + 0.3 / R.back() + 0.2 / (R.back() * R.back()) + 0.1 / std::pow(R.back(), 3.0));
    }
    const Extrapolation e = extrapolate_limit(R, y);
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.limit, 0.4, 1e-10);
}

TEST(Extrapolation, FractionalRateFallsBackToAitken)
{
    std::vector<double> R, y;
    for (int j = 0; j <= 12; ++j) {
        R.push_back(std::ldexp(1.0, j));
        y.push_back(0.2 + 0.3 * std::pow(R.back(), -1.0 / 3.0) - 0.1 * std::pow(R.back(), -2.0 / 3.0));
    }
    const Extrapolation e = extrapolate_limit(R, y);
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.limit, 0.2, 1e-4);
}

TEST(ScaledRatios, ExactConeIsRadiusIndependent)
{
    const InequalitySpec spec = make_spec(Family::sobolev, {.N = 3.0, .p = 2.0});
    const ExtremalProfile u0 = extremizer(spec);
    const BlowdownReport r = scaled_family_ratios(cone_space(3.0, 0.6), spec, u0);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(relative_spread(r.ratio_q), 1e-12);
    EXPECT_LE(relative_spread(r.ratio_p), 1e-12);
    EXPECT_TRUE(r.ratio_r.empty());
    const double oracle = std::pow(lp_norm(u0, *spec.q, ModelCone::make(3.0)), *spec.q);
    EXPECT_NEAR(r.limit_q / (0.6 * oracle), 1.0, 1e-4);
    EXPECT_NEAR(r.attained_avr, 0.6, 1e-10);
}

TEST(ScaledRatios, EuclideanNashMatchesConeNorms)
{
    const InequalitySpec spec = make_spec(Family::nash, {.N = 2.0});
    const ExtremalProfile u0 = extremizer(spec);
    const BlowdownReport r = scaled_family_ratios(euclidean_space(2.0), spec, u0);
    const ModelCone c = ModelCone::make(2.0);
    EXPECT_NEAR(r.limit_q, std::pow(lp_norm(u0, *spec.q, c), *spec.q), 1e-10);
    EXPECT_NEAR(r.limit_r, std::pow(lp_norm(u0, *spec.r, c), *spec.r), 1e-10);
    EXPECT_NEAR(r.limit_p, std::pow(gradient_norm(u0, 2.0, c), 2.0), 1e-9);
}

TEST(ScaledRatios, InterpolatedSpaceGns1)
{
    const InequalitySpec spec = make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0});
    const ExtremalProfile u0 = extremizer(spec);
    const BlowdownReport r = scaled_family_ratios(interpolated_space(3.0, 0.4, 1.0), spec, u0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.limit_q / (0.4 * r.cone_q), 1.0, 1e-3);
    EXPECT_NEAR(r.limit_r / (0.4 * r.cone_r), 1.0, 1e-3);
    EXPECT_LE(r.limit_p, 0.4 * r.cone_p + 1e-6);
}

TEST(ScaledRatios, GradientLimitBoundedOnCdSpaces)
{
    const InequalitySpec spec = make_spec(Family::nash, {.N = 3.0});
    const ExtremalProfile u0 = extremizer(spec);
    for (const RadialSpace& s : {euclidean_space(3.0), cone_space(3.0, 0.5), interpolated_space(3.0, 0.4, 1.0),
                                 interpolated_space(3.0, 0.7, 0.9)}) {
        const BlowdownReport r = scaled_family_ratios(s, spec, u0);
        EXPECT_LE(r.limit_p, s.avr * r.cone_p + 1e-6) << s.label;
    }
}

TEST(ScaledRatios, RejectsThinSchedules)
{
    const InequalitySpec spec = make_spec(Family::nash, {.N = 3.0});
    const ExtremalProfile u0 = extremizer(spec);
    EXPECT_THROW((void)scaled_family_ratios(euclidean_space(3.0), spec, u0, {1, 2, 4, 8}), DomainError);
    EXPECT_THROW((void)scaled_family_ratios(euclidean_space(3.0), spec, u0, {1, 2, 4, 8, 16}), DomainError);
    EXPECT_THROW((void)scaled_family_ratios(euclidean_space(2.0), spec, u0), DomainError);
}

TEST(ScaledRatios, ThreadCountDoesNotChangeResults)
{
    const InequalitySpec spec = make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0});
    const ExtremalProfile u0 = extremizer(spec);
    const RadialSpace s = interpolated_space(3.0, 0.4, 1.0);
    ::setenv("CONE_SOBOLEV_THREADS", "1", 1);
    const BlowdownReport a = scaled_family_ratios(s, spec, u0);
    ::setenv("CONE_SOBOLEV_THREADS", "4", 1);
    const BlowdownReport b = scaled_family_ratios(s, spec, u0);
    ::unsetenv("CONE_SOBOLEV_THREADS");
    EXPECT_EQ(a.ratio_q, b.ratio_q);
    EXPECT_EQ(a.ratio_p, b.ratio_p);
    EXPECT_EQ(a.ratio_r, b.ratio_r);
}

TEST(AvrLowerBound, Arithmetic)
{
    EXPECT_DOUBLE_EQ(avr_lower_bound(1.3, 1.3, 0.5, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(avr_lower_bound(1.0, 2.0, 1.0, 4.0), 1.0 / 16.0);
    const InequalitySpec nash = make_spec(Family::nash, {.N = 3.0});
    const double cl = optimal_constant(nash).value;
    EXPECT_NEAR(avr_lower_bound(cl, std::pow(2.0, 0.2) * cl, nash.theta, 3.0), 0.5, 1e-14);
    EXPECT_THROW((void)avr_lower_bound(1.0, 0.0, 1.0, 3.0), DomainError);
}

TEST(EndToEnd, SelfConsistencyExamples)
{
    const InequalitySpec sob = make_spec(Family::sobolev, {.N = 4.0, .p = 2.0});
    const double at = optimal_constant(sob).value;
    const BlowdownReport a =
        end_to_end_blowdown(cone_space(4.0, 0.25), sob, extremizer(sob), std::pow(0.25, -0.25) * at);
    EXPECT_NEAR(a.avr_bound, 0.25, 1e-6);
    EXPECT_EQ(a.verdict, "consistent");

    const InequalitySpec nash = make_spec(Family::nash, {.N = 3.0});
    const BlowdownReport b =
        end_to_end_blowdown(euclidean_space(3.0), nash, extremizer(nash), optimal_constant(nash).value);
    EXPECT_NEAR(b.avr_bound, 1.0, 1e-5);
    EXPECT_EQ(b.verdict, "consistent");

    const InequalitySpec g = make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0});
    const BlowdownReport c = end_to_end_blowdown(cone_space(3.0, 0.5), g, extremizer(g), 0.9 * cd_constant(g, 0.5));
    EXPECT_GT(c.avr_bound, 0.5);
    EXPECT_EQ(c.verdict, "violated");
}

TEST(EndToEnd, SupportFamilies)
{
    for (Family f : {Family::morrey, Family::faber_krahn_1, Family::faber_krahn_2}) {
        const double p = f == Family::morrey ? 4.0 : 2.0;
        const InequalitySpec s = make_spec(f, {.N = 3.0, .p = p});
        const BlowdownReport r = end_to_end_blowdown(cone_space(3.0, 0.25), s, extremizer(s), cd_constant(s, 0.25));
        EXPECT_NEAR(r.avr_bound, 0.25, 1e-4) << to_string(f);
        EXPECT_NEAR(r.attained_avr, 0.25, 1e-10) << to_string(f);
        EXPECT_NEAR(r.limit_quotient / cd_constant(s, 0.25), 1.0, 1e-4) << to_string(f);
    }
}

TEST(EndToEnd, OscillatingSpaceUsesLiminfLimsup)
{
    const RadialSpace s = oscillating_space(3.0, 0.5, 0.2);
    const InequalitySpec spec = make_spec(Family::sobolev, {.N = 3.0, .p = 2.0});
    const BlowdownReport r = end_to_end_blowdown(s, spec, extremizer(spec), cd_constant(spec, 0.3));
    EXPECT_FALSE(r.converged);
    ASSERT_TRUE(r.liminf_l.has_value());
    EXPECT_NEAR(*r.liminf_l, 0.3, 1e-3);
    EXPECT_NEAR(*r.limsup_L, 0.7, 1e-3);
    EXPECT_EQ(r.verdict, "consistent (liminf/limsup)");
}

TEST(LiminfLimsup, Examples)
{
    EXPECT_NEAR(liminf_limsup_bound(0.5, 0.5, 2.0, 6.0, 3.0, 1.0, 1.25),
                0.5 - avr_lower_bound(1.0, 1.25, 1.0, 3.0), 1e-15);
    EXPECT_NEAR(liminf_limsup_bound(0.3, 0.7, 2.0, 4.0, 4.0, 1.0, 1e9), 0.7 * std::pow(7.0 / 3.0, 1.25), 1e-12);
    EXPECT_THROW((void)liminf_limsup_bound(0.7, 0.3, 2.0, 4.0, 4.0, 1.0, 1.0), DomainError);
}

TEST(LocalDensityBound, Examples)
{
    const InequalitySpec spec = make_spec(Family::sobolev, {.N = 3.0, .p = 2.0});
    const ExtremalProfile u0 = extremizer(spec);
    const double k = optimal_constant(spec).value;
    const LocalDensityBound e = local_density_bound(euclidean_space(3.0), spec, u0, k);
    EXPECT_NEAR(e.density, 1.0, 1e-12);
    EXPECT_TRUE(e.ok);
    EXPECT_FALSE(local_density_bound(euclidean_space(3.0), spec, u0, 0.99 * k).ok);
    EXPECT_NEAR(local_density_bound(cone_space(3.0, 0.3), spec, u0, k).density, 0.3, 1e-12);
    EXPECT_NEAR(local_density_bound(interpolated_space(3.0, 0.4, 1.0), spec, u0, k).density, 1.0, 1e-6);
}

TEST(LogSobolevBlowdown, Examples)
{
    const double L = log_sobolev_constant(2.0, 3.0);
    const BlowdownReport a = log_sobolev_blowdown(cone_space(3.0, 0.5), 2.0, 3.0, std::pow(0.5, -2.0 / 3.0) * L);
    EXPECT_NEAR(a.avr_bound, 0.5, 1e-6);
    EXPECT_EQ(a.verdict, "consistent");
    const BlowdownReport b = log_sobolev_blowdown(euclidean_space(3.0), 2.0, 3.0, L);
    EXPECT_NEAR(b.avr_bound, 1.0, 1e-6);
    const InequalitySpec spec = make_spec(Family::log_sobolev, {.N = 3.0, .p = 2.0});
    const EntropyParts parts = entropy_parts(extremizer(spec), 2.0, ModelCone::make(3.0));
    EXPECT_NEAR(b.limit_entropy, parts.E, 1e-4 * std::abs(parts.E));
    EXPECT_NEAR(b.limit_quotient / L, 1.0, 1e-6);
}

TEST(MtBlowdown, BelowAndAtThresholdStaysBounded)
{
    for (double a : {0.5, 1.0}) {
        const RadialSpace s = cone_space(2.0, a);
        const double thr = mt_threshold(a, 2);
        EXPECT_NEAR(thr, a * 4.0 * pi, 1e-12);
        for (double f : {0.9, 1.0}) {
            const MtBlowdownReport r = mt_blowdown(s, 2, f * thr);
            EXPECT_EQ(r.verdict, "bounded") << a << " " << f;
            EXPECT_TRUE(r.normalized);
        }
    }
}

TEST(MtBlowdown, AboveThresholdDiverges)
{
    const MtBlowdownReport r = mt_blowdown(cone_space(2.0, 0.5), 2, 1.3 * mt_threshold(0.5, 2));
    EXPECT_EQ(r.verdict, "divergent");
    EXPECT_GE(r.last_over_first, 10.0);
    EXPECT_GT(r.tail_exponent, 0.0);
}

TEST(MtBlowdown, FixedKMatchesConeOracle)
{
    // R -> infinity limit with k = 2 on any space with positive AVR.
    const double avr = 0.5;
    const double eps = 0.05 * avr;
    const double c = 4.0 * pi * avr;
    const double beta = c / (avr + eps);
    const ExtremalProfile w = moser_function(2, 2);
    const double oracle = integrate_value(
        [&](double rho) { return 2.0 * rho * std::exp(beta * w.u(rho) * w.u(rho)); }, 0.0, 1.0, {}, {0.5});
    for (const RadialSpace& s : {cone_space(2.0, avr), interpolated_space(2.0, avr, 1.0)}) {
        const MtBlowdownReport r = mt_blowdown(s, 2, c, {2, 4, 8, 16});
        EXPECT_NEAR(r.values[0] / oracle, 1.0, 1e-3) << s.label;
    }
}

TEST(MtBlowdown, EnergyNormalization)
{
    const MtBlowdownReport r = mt_blowdown(cone_space(2.0, 0.5), 2, 1.0);
    for (double e : r.energies) EXPECT_NEAR(e, 0.5 / 0.525, 1e-10);
    EXPECT_THROW((void)mt_blowdown(capped_space(2.0, 1.0), 2, 1.0), PreconditionError);
}

TEST(Ckn, DegenerateAndReducingCases)
{
    const CknBound plain = ckn_avr_bound(1.0, 2.0, 0.5, 3.0, 0.0, 0.0, 0.0);
    EXPECT_FALSE(plain.degenerate);
    EXPECT_DOUBLE_EQ(plain.bound, avr_lower_bound(1.0, 2.0, 0.5, 3.0));
    EXPECT_TRUE(ckn_avr_bound(1.0, 2.0, 0.5, 3.0, 0.0, 0.0, -1.0).degenerate);
    EXPECT_TRUE(ckn_avr_bound(1.0, 2.0, 1.0, 4.0, 1.0, 0.0, 0.0).degenerate);
}
