#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "conesob/catalog.hpp"
#include "conesob/rearrange.hpp"

using namespace conesob;

namespace {

ExtremalProfile exp_decay()
{
    ExtremalProfile g;
    g.value = [](double t) { return std::exp(-t); };
    g.derivative = [](double t) { return -std::exp(-t); };
    g.decay = DecayClass::gaussian;
    return g;
}

ExtremalProfile tent()
{
    ExtremalProfile g;
    g.value = [](double t) { return 1.0 - t; };
    g.derivative = [](double) { return -1.0; };
    g.support = 1.0;
    return g;
}

// Smoothed indicator of [0, 1): quintic ramp on [1 - w, 1].
ExtremalProfile soft_indicator(double w)
{
    ExtremalProfile g;
    g.value = [w](double t) {
        if (t <= 1.0 - w) return 1.0;
        const double x = (t - (1.0 - w)) / w;
        return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    };
    g.derivative = [w](double t) {
        if (t <= 1.0 - w) return 0.0;
        const double x = (t - (1.0 - w)) / w;
        return -30.0 * x * x * (1.0 - x) * (1.0 - x) / w;
    };
    g.support = 1.0;
    g.breakpoints = {1.0 - w};
    return g;
}

// Rises then falls: not monotone.
ExtremalProfile bump_off_center()
{
    ExtremalProfile g;
    g.value = [](double t) { return t * t * (1.0 - t) * (1.0 - t) * 16.0; };
    g.derivative = [](double t) { return 32.0 * t * (1.0 - t) * (1.0 - 2.0 * t); };
    g.support = 1.0;
    return g;
}

} // namespace

TEST(Rearrangement, ExactConeIsRescaling)
{
    for (double a : {0.3, 0.5, 1.0}) {
        const RadialSpace s = cone_space(3.0, a);
        const ModelCone c = ModelCone::make(3.0);
        const ExtremalProfile g = exp_decay();
        const SampledProfile u = rearrangement(g, s, c);
        EXPECT_TRUE(u.monotone_flag);
        for (std::size_t i = 0; i < u.grid.size(); i += 97)
            EXPECT_NEAR(u.values[i], g.u(std::pow(a, -1.0 / 3.0) * u.grid[i]), 1e-8);
    }
}

TEST(Rearrangement, IndicatorOnCone)
{
    ExtremalProfile ind;
    ind.value = [](double) { return 1.0; };
    ind.derivative = [](double) { return 0.0; };
    ind.support = 2.0;
    const double a = 0.25;
    const SampledProfile u = rearrangement(ind, cone_space(2.0, a), ModelCone::make(2.0));
    EXPECT_NEAR(u.grid.back(), std::sqrt(a) * 2.0, 1e-12);
    EXPECT_EQ(u(0.5 * std::sqrt(a) * 2.0), 1.0);
    EXPECT_EQ(u(1.1 * std::sqrt(a) * 2.0), 0.0);
}

TEST(Rearrangement, NonMonotoneLevelInversion)
{
    const RadialSpace s = cone_space(2.0, 0.5);
    const ModelCone c = ModelCone::make(2.0);
    const ExtremalProfile g = bump_off_center();
    const SampledProfile u = rearrangement(g, s, c);
    for (std::size_t i = 1; i < u.values.size(); ++i) EXPECT_LE(u.values[i], u.values[i - 1]);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> lev(0.01, 0.99);
    for (int i = 0; i < 20; ++i) {
        const double t = lev(rng);
        const double mu = superlevel_measure(g, s, t);
        // measure of {u* > t} on the cone from the sampled inverse
        double sx = 0.0;
        for (std::size_t k = 0; k + 1 < u.grid.size(); ++k) {
            if (u.values[k] > t && u.values[k + 1] <= t) {
                const double w = (u.values[k] - t) / (u.values[k] - u.values[k + 1]);
                sx = u.grid[k] + w * (u.grid[k + 1] - u.grid[k]);
            }
        }
        EXPECT_NEAR(c.omega * std::pow(sx, 2.0), mu, 2e-3 * mu) << t;
    }
}

TEST(Rearrangement, EquimeasurableForMonotoneProfiles)
{
    const RadialSpace s = interpolated_space(3.0, 0.4, 1.0);
    const ExtremalProfile g = extremizer(make_spec(Family::nash, {.N = 3.0}));
    const ExtremalProfile u = rearranged_profile(g, s);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> lev(0.0, g.u(0.0));
    for (int i = 0; i < 20; ++i) {
        const double t = lev(rng);
        const double lhs = superlevel_measure(g, s, t);
        const double rhs = superlevel_measure(u, cone_space(3.0, 1.0), t);
        EXPECT_NEAR(rhs, lhs, 1e-6 * lhs) << t;
    }
}

TEST(Cavalieri, Examples)
{
    const ModelCone c3 = ModelCone::make(3.0);
    const CavalieriReport a = cavalieri_check(exp_decay(), euclidean_space(3.0), [](double x) { return x * x; }, c3);
    EXPECT_LE(a.residual, 1e-6);

    const ModelCone c2 = ModelCone::make(2.0);
    const CavalieriReport b = cavalieri_check(tent(), cone_space(2.0, 0.5), [](double x) { return x; }, c2);
    const double exact = 0.5 * 2.0 * std::numbers::pi / 6.0;
    EXPECT_NEAR(b.space_side, exact, 1e-12);
    EXPECT_NEAR(b.cone_side, exact, 1e-10);

    const ExtremalProfile nash = extremizer(make_spec(Family::nash, {.N = 2.0}));
    const CavalieriReport d = cavalieri_check(nash, cone_space(2.0, 0.25), [](double x) { return x * x * x; }, c2);
    EXPECT_LE(d.residual, 1e-6);
}

TEST(Cavalieri, NormPreservation)
{
    const RadialSpace s = interpolated_space(3.0, 0.4, 1.0);
    const ModelCone c = ModelCone::make(3.0);
    const ExtremalProfile g = extremizer(make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0}));
    for (double p : {2.0, 3.0, 4.0}) {
        const CavalieriReport r = cavalieri_check(g, s, [p](double x) { return std::pow(x, p); }, c);
        EXPECT_LE(r.residual, 1e-6) << p;
    }
}

TEST(Cavalieri, NonMonotoneProfileApproximately)
{
    const CavalieriReport r =
        cavalieri_check(bump_off_center(), cone_space(2.0, 0.5), [](double x) { return x * x; }, ModelCone::make(2.0));
    EXPECT_LE(r.residual, 1e-3);
}

TEST(PolyaSzego, EqualityOnExactCones)
{
    const ModelCone c = ModelCone::make(3.0);
    for (const RadialSpace& s : {euclidean_space(3.0), cone_space(3.0, 0.5)}) {
        for (const ExtremalProfile& g : {exp_decay(), tent()}) {
            const PolyaSzegoReport r = polya_szego_check(g, s, 2.0, c);
            EXPECT_NEAR(r.margin, 0.0, 1e-5 * std::max(1.0, r.lhs)) << s.label;
        }
    }
}

TEST(PolyaSzego, StrictOffCones)
{
    // V = omega r^2 (0.5 + 0.5 / (1 + r))
    const PolyaSzegoReport r = polya_szego_check(tent(), interpolated_space(2.0, 0.5, 1.0), 2.0, ModelCone::make(2.0));
    EXPECT_GT(r.margin, 1e-3 * r.lhs);
    EXPECT_GT(r.relative_margin, 0.0);
}

TEST(PolyaSzego, ZeroAvrRightSideVanishes)
{
    const PolyaSzegoReport r = polya_szego_check(exp_decay(), capped_space(3.0, 2.0), 2.0, ModelCone::make(3.0));
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_GT(r.lhs, 0.0);
}

TEST(PolyaSzego, SoftIndicator)
{
    const PolyaSzegoReport r =
        polya_szego_check(soft_indicator(0.05), interpolated_space(3.0, 0.4, 1.0), 2.0, ModelCone::make(3.0));
    EXPECT_GE(r.margin, -1e-5);
}

TEST(PolyaSzego, RejectsBadExponent)
{
    EXPECT_THROW((void)polya_szego_check(tent(), euclidean_space(2.0), 1.0, ModelCone::make(2.0)), DomainError);
}

TEST(ProfileSamples, CsvRoundTripAndCavalieri)
{
    const std::string path = ::testing::TempDir() + "profile.csv";
    {
        std::ofstream out(path);
        out << "t,u\n";
        for (int i = 0; i <= 40; ++i) {
            const double t = 0.05 * i;
            out << t << "," << (1.0 - t / 2.0) * (1.0 - t / 2.0) << "\n";
        }
    }
    const ExtremalProfile g = load_profile_csv(path);
    EXPECT_NEAR(g.u(0.7), (1.0 - 0.35) * (1.0 - 0.35), 1e-4);
    EXPECT_EQ(g.u(2.5), 0.0);
    EXPECT_TRUE(is_non_increasing(g));
    const CavalieriReport r = cavalieri_check(g, cone_space(3.0, 0.5), [](double x) { return x * x; }, ModelCone::make(3.0));
    EXPECT_LE(r.residual, 1e-8);
}

TEST(ProfileSamples, RejectsBadTables)
{
    EXPECT_THROW((void)profile_from_samples({0.0, 1.0}, {1.0, 0.0}), DomainError);
    EXPECT_THROW((void)profile_from_samples({0.0, 1.0, 1.0}, {1.0, 0.5, 0.0}), DomainError);
    EXPECT_THROW((void)load_profile_csv("/nonexistent/profile.csv"), DomainError);
}
