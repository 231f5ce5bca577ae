#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "conesob/model_cone.hpp"
#include "conesob/spaces.hpp"

using namespace conesob;

namespace {

std::vector<RadialSpace> cd_builtins()
{
    return {euclidean_space(3.0),          cone_space(2.5, 0.3),   cone_space(3.0, 0.7),
            interpolated_space(3.0, 0.4, 1.0), interpolated_space(2.0, 0.7, 0.9), capped_space(3.0, 1.0)};
}

} // namespace

TEST(Spaces, EuclideanMatchesModelCone)
{
    const RadialSpace e = euclidean_space(3.0);
    EXPECT_EQ(e.avr, 1.0);
    const ModelCone c = ModelCone::make(3.0);
    for (double r : {0.5, 1.0, 7.0}) EXPECT_NEAR(e.V(r), cone_volume(c, r), 1e-12 * cone_volume(c, r));
}

TEST(Spaces, ExactConeRatio)
{
    const RadialSpace s = cone_space(2.5, 0.3);
    EXPECT_NEAR(s.volume_ratio(2.0), 0.3, 1e-15);
    EXPECT_THROW((void)cone_space(3.0, 1.5), DomainError);
}

TEST(Spaces, DensityIsDerivativeOfVolume)
{
    for (const RadialSpace& s : cd_builtins()) {
        for (double r : {0.3, 2.0, 40.0}) {
            if (!s.breakpoints.empty() && std::abs(r - s.breakpoints[0]) < 1e-3) continue;
            const double h = 1e-6 * r;
            const double fd = (s.V(r + h) - s.V(r - h)) / (2.0 * h);
            EXPECT_NEAR(s.v(r), fd, 1e-6 * std::max(1.0, std::abs(fd))) << s.label << " r=" << r;
        }
    }
}

TEST(Spaces, CdFlags)
{
    EXPECT_TRUE(interpolated_space(3.0, 0.4, 1.0).cd_flag);
    EXPECT_FALSE(interpolated_space(3.0, 0.8, 0.4).cd_flag);
    EXPECT_FALSE(oscillating_space(3.0, 0.5, 0.2).cd_flag);
    EXPECT_TRUE(capped_space(3.0, 2.0).cd_flag);
    EXPECT_EQ(capped_space(3.0, 2.0).avr, 0.0);
}

TEST(EstimateAvr, ExactCone)
{
    const AvrEstimate e = estimate_avr(cone_space(3.0, 0.7), {1e2, 1e3, 1e4, 1e5});
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.value, 0.7, 1e-14);
    for (double f : e.ratios) EXPECT_NEAR(f, 0.7, 1e-14);
}

TEST(EstimateAvr, Interpolated)
{
    const RadialSpace s = interpolated_space(3.0, 0.4, 1.0);
    const AvrEstimate e = estimate_avr(s, {1e2, 1e3, 1e4, 1e5});
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.value, 0.4, 1e-4);
    EXPECT_NEAR(s.volume_ratio(1e5), 0.4, 1e-4);
    const AvrEstimate d = estimate_avr(s, default_avr_schedule());
    EXPECT_TRUE(d.converged);
    EXPECT_NEAR(d.value, 0.4, 1e-10);
}

TEST(EstimateAvr, OscillatingIsFlagged)
{
    const AvrEstimate e = estimate_avr(oscillating_space(3.0, 0.5, 0.2), default_avr_schedule());
    EXPECT_FALSE(e.converged);
    EXPECT_NEAR(e.l, 0.3, 1e-3);
    EXPECT_NEAR(e.L, 0.7, 1e-3);
}

TEST(EstimateAvr, RejectsShortSchedules)
{
    EXPECT_THROW((void)estimate_avr(euclidean_space(3.0), {1.0, 2.0, 3.0}), DomainError);
    EXPECT_THROW((void)estimate_avr(euclidean_space(3.0), {1.0, 3.0, 2.0, 4.0}), DomainError);
}

TEST(Isoperimetric, EqualityOnConesAndPositiveOnInterpolated)
{
    const std::vector<double> radii = detail::log_grid(1e-3, 1e5, 10);
    for (const RadialSpace& s : {euclidean_space(3.0), cone_space(2.5, 0.3), cone_space(4.0, 0.25)}) {
        const IsoperimetricReport r = isoperimetric_check(s, radii);
        EXPECT_TRUE(r.ok) << s.label;
        EXPECT_NEAR(r.worst_relative, 0.0, 1e-12) << s.label;
    }
    const IsoperimetricReport i = isoperimetric_check(interpolated_space(3.0, 0.4, 1.0), radii);
    EXPECT_TRUE(i.ok);
    EXPECT_GT(i.worst_margin, 0.0);
    EXPECT_THROW((void)isoperimetric_check(oscillating_space(3.0, 0.5, 0.2), radii), PreconditionError);
}

TEST(BishopGromov, RandomPairsOnCdSpaces)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lg(-3.0, 6.0);
    for (const RadialSpace& s : cd_builtins()) {
        for (int i = 0; i < 100; ++i) {
            double r1 = std::pow(10.0, lg(rng)), r2 = std::pow(10.0, lg(rng));
            if (r1 > r2) std::swap(r1, r2);
            EXPECT_LE(s.V(r2) / std::pow(r2, s.N), s.V(r1) / std::pow(r1, s.N) * (1.0 + 1e-14)) << s.label;
            if (s.avr > 0.0) {
                EXPECT_LE(s.avr, s.volume_ratio(r1) * (1.0 + 1e-14));
            }
        }
    }
}

TEST(UserSpace, CsvRoundTripIsMonotone)
{
    const std::string path = ::testing::TempDir() + "vol_table.csv";
    {
        std::ofstream out(path);
        out << "r,V\n";
        const RadialSpace ref = interpolated_space(3.0, 0.5, 1.0);
        for (double r : detail::log_grid(1e-2, 1e4, 8)) out << r << "," << ref.V(r) << "\n";
    }
    const RadialSpace s = parse_space("csv:" + path + ",N=3");
    EXPECT_NEAR(s.avr, 0.5, 1e-3);
    EXPECT_TRUE(s.cd_flag);
    double prev = 0.0;
    for (double r : detail::log_grid(1e-3, 1e5, 50)) {
        EXPECT_GE(s.V(r), prev);
        EXPECT_GE(s.v(r), 0.0);
        prev = s.V(r);
    }
    const RadialSpace ref = interpolated_space(3.0, 0.5, 1.0);
    EXPECT_NEAR(s.V(3.3) / ref.V(3.3), 1.0, 1e-3);
    std::remove(path.c_str());
}

TEST(UserSpace, RejectsBadTables)
{
    EXPECT_THROW((void)user_space(3.0, {1.0, 1.0}, {1.0, 2.0}), DomainError);
    EXPECT_THROW((void)user_space(3.0, {1.0, 2.0}, {2.0, 1.0}), DomainError);
    EXPECT_THROW((void)parse_space("csv:/nonexistent/file.csv,N=3"), DomainError);
}

TEST(ParseSpace, Descriptors)
{
    EXPECT_EQ(parse_space("euclid:n=2").N, 2.0);
    EXPECT_EQ(parse_space("cone:N=3,a=0.5").avr, 0.5);
    EXPECT_EQ(parse_space("interpolated:N=3,a=0.4,b=1").avr, 0.4);
    EXPECT_EQ(parse_space("oscillating:N=3,mean=0.5,amp=0.2").cd_flag, false);
    EXPECT_THROW((void)parse_space("cone:N=3,a=0.5,z=1"), DomainError);
    EXPECT_THROW((void)parse_space("cone:N=3"), DomainError);
    EXPECT_THROW((void)parse_space("torus:N=3"), DomainError);
}

TEST(LocalDensity, Limits)
{
    EXPECT_NEAR(local_density(euclidean_space(3.0)).value, 1.0, 1e-12);
    EXPECT_NEAR(local_density(cone_space(3.0, 0.3)).value, 0.3, 1e-12);
    const LocalDensity d = local_density(interpolated_space(3.0, 0.4, 1.0));
    EXPECT_TRUE(d.converged);
    EXPECT_NEAR(d.value, 1.0, 1e-6);
}
