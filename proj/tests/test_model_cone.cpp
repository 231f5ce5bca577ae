#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "conesob/catalog.hpp"
#include "conesob/model_cone.hpp"

using namespace conesob;

namespace {

ExtremalProfile constant_on_unit()
{
    ExtremalProfile u;
    u.value = [](double) { return 1.0; };
    u.derivative = [](double) { return 0.0; };
    u.support = 1.0;
    return u;
}

ExtremalProfile identity_on_unit()
{
    ExtremalProfile u;
    u.value = [](double t) { return t; };
    u.derivative = [](double) { return 1.0; };
    u.support = 1.0;
    return u;
}

ExtremalProfile gaussian(double s)
{
    ExtremalProfile u;
    u.value = [s](double t) { return std::exp(-t * t / s); };
    u.derivative = [s](double t) { return -2.0 * t / s * std::exp(-t * t / s); };
    u.decay = DecayClass::gaussian;
    return u;
}

} // namespace

TEST(ModelCone, Volumes)
{
    EXPECT_NEAR(cone_volume(ModelCone::make(2.0), 1.0), std::numbers::pi, 1e-15);
    EXPECT_NEAR(cone_volume(ModelCone::make(3.0), 2.0), 32.0 * std::numbers::pi / 3.0, 1e-13);
    EXPECT_NEAR(cone_volume(ModelCone::make(2.5), 1.0), std::pow(std::numbers::pi, 1.25) / std::tgamma(2.25), 1e-14);
    EXPECT_THROW((void)ModelCone::make(1.0), DomainError);
    EXPECT_THROW((void)cone_volume(ModelCone::make(2.0), -1.0), DomainError);
}

TEST(ModelCone, VolumeIsExactCone)
{
    const ModelCone c = ModelCone::make(3.7);
    for (double r : {0.01, 1.0, 17.0, 1e4}) EXPECT_NEAR(cone_volume(c, r) / std::pow(r, 3.7), c.omega, 1e-12 * c.omega);
}

TEST(LpNorm, Monomials)
{
    const ModelCone c2 = ModelCone::make(2.0);
    EXPECT_NEAR(lp_norm(constant_on_unit(), 1.0, c2), std::numbers::pi, 1e-13);
    EXPECT_NEAR(lp_norm(identity_on_unit(), 2.0, c2), std::sqrt(std::numbers::pi / 2.0), 1e-13);
    EXPECT_THROW((void)lp_norm(constant_on_unit(), 0.0, c2), DomainError);
}

TEST(LpNorm, LogSobolevGaussianIsNormalized)
{
    const InequalitySpec s = make_spec(Family::log_sobolev, {.N = 3.0, .p = 2.0});
    EXPECT_NEAR(lp_norm(extremizer(s), 2.0, ModelCone::make(3.0)), 1.0, 1e-12);
}

TEST(LpNorm, ScalingLaw)
{
    const ModelCone c = ModelCone::make(3.0);
    const InequalitySpec s = make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0});
    const ExtremalProfile u = extremizer(s);
    for (double p : {2.0, 4.0}) {
        const double base = lp_norm(u, p, c);
        for (double lambda : {0.5, 2.0, 10.0})
            EXPECT_NEAR(lp_norm(rescaled(u, lambda), p, c) / base, std::pow(lambda, 3.0 / p), 1e-8 * std::pow(lambda, 3.0 / p));
    }
}

TEST(LpNorm, TriangleInequality)
{
    const ModelCone c = ModelCone::make(2.5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.2, 3.0);
    for (int i = 0; i < 10; ++i) {
        const double s1 = d(rng), s2 = d(rng), a = d(rng);
        const ExtremalProfile f = gaussian(s1);
        const ExtremalProfile g = multiplied(gaussian(s2), a);
        ExtremalProfile sum = f;
        sum.value = [f, g](double t) { return f.value(t) + g.value(t); };
        sum.derivative = [f, g](double t) { return f.derivative(t) + g.derivative(t); };
        for (double p : {1.0, 2.0, 3.5}) EXPECT_LE(lp_norm(sum, p, c), lp_norm(f, p, c) + lp_norm(g, p, c) + 1e-12);
    }
}

TEST(Asymptotics, BarenblattPassesAllClauses)
{
    const InequalitySpec s = make_spec(Family::gns1, {.N = 3.0, .p = 2.0, .alpha = 2.0});
    const ExtremalProfile u = extremizer(s);
    ASSERT_TRUE(u.convexity_onset.has_value());
    EXPECT_NEAR(*u.convexity_onset, std::sqrt(1.0 / 3.0), 1e-15);
    const AsymptoticsReport r = check_extremal_asymptotics(u, s);
    EXPECT_TRUE(r.ok) << r.failed_clause << " at " << r.witness;
}

TEST(Asymptotics, NashCompactProfile)
{
    const InequalitySpec s = make_spec(Family::nash, {.N = 3.0});
    const AsymptoticsReport r = check_extremal_asymptotics(extremizer(s), s);
    EXPECT_TRUE(r.ok) << r.failed_clause;
    ASSERT_FALSE(r.notes.empty());
}

TEST(Asymptotics, SlowDecayFailsLimitClause)
{
    ExtremalProfile u;
    u.value = [](double t) { return 1.0 / (1.0 + t); };
    u.derivative = [](double t) { return -1.0 / ((1.0 + t) * (1.0 + t)); };
    u.second = [](double t) { return 2.0 / std::pow(1.0 + t, 3); };
    u.decay = DecayClass::power;
    u.convexity_onset = 0.0;
    const AsymptoticsReport r = check_extremal_asymptotics(u, 3.0, {.p = 2.0, .q = 2.0, .r = {}});
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failed_clause, "u0^q rho^N -> 0");
}

TEST(Asymptotics, MorreyGradientIsNotLocallyBounded)
{
    // |u0'|^p blows up at the origin for the Morrey profile.
    const InequalitySpec s = make_spec(Family::morrey, {.N = 2.0, .p = 4.0});
    const AsymptoticsReport r = check_extremal_asymptotics(extremizer(s), s);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failed_clause, "|u'|^p locally BV");
}

TEST(Asymptotics, CatalogProfilesPass)
{
    const std::vector<InequalitySpec> specs = {
        make_spec(Family::sobolev, {.N = 3.0, .p = 2.0}),
        make_spec(Family::sobolev, {.N = 5.0, .p = 3.0}),
        make_spec(Family::gns1, {.N = 4.0, .p = 2.0, .alpha = 1.5}),
        make_spec(Family::gns2, {.N = 3.0, .p = 2.0, .alpha = 0.5}),
        make_spec(Family::faber_krahn_1, {.N = 3.0, .p = 2.0}),
        make_spec(Family::faber_krahn_2, {.N = 3.0, .p = 2.0}),
        make_spec(Family::log_sobolev, {.N = 3.0, .p = 2.0}),
        make_spec(Family::hpw, {.N = 3.0}),
        make_spec(Family::nash, {.N = 5.5}),
    };
    for (const InequalitySpec& s : specs) {
        const AsymptoticsReport r = check_extremal_asymptotics(extremizer(s), s);
        EXPECT_TRUE(r.ok) << to_string(s.family) << ": " << r.failed_clause << " at " << r.witness;
    }
}
