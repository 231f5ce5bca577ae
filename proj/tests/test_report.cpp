#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "conesob/report.hpp"

using namespace conesob;

namespace {

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

BlowdownReport nash_report()
{
    const InequalitySpec spec = make_spec(Family::nash, {.N = 3.0});
    return end_to_end_blowdown(cone_space(3.0, 0.5), spec, extremizer(spec), cd_constant(spec, 0.5));
}

} // namespace

TEST(Report, DocumentsCarryTheSchema)
{
    const Json d = criteria_document(run_criteria({.seed = 7, .only = {"ckn"}}), 7);
    EXPECT_EQ(d["schema"], "cone-sobolev/1");
    EXPECT_EQ(d["kind"], "acceptance");
    EXPECT_EQ(d["seed"], 7);
    EXPECT_EQ(to_json(nash_report())["schema"], "cone-sobolev/1");
}

TEST(Report, SameSeedGivesIdenticalBytes)
{
    const SuiteOptions opt{.seed = 11, .only = {"sweeps"}};
    const std::string a = render_json(criteria_document(run_criteria(opt), opt.seed));
    const std::string b = render_json(criteria_document(run_criteria(opt), opt.seed));
    EXPECT_EQ(a, b);
    const SuiteOptions other{.seed = 12, .only = {"sweeps"}};
    EXPECT_NE(a, render_json(criteria_document(run_criteria(other), other.seed)));
}

TEST(Report, OnlyFilterSelectsSections)
{
    const std::vector<Criterion> cs = run_criteria({.seed = 7, .only = {"constants", "ckn"}});
    ASSERT_EQ(cs.size(), 2u);
    EXPECT_EQ(cs[0].section, "constants");
    EXPECT_EQ(cs[1].section, "ckn");
    EXPECT_THROW((void)run_criteria({.seed = 7, .only = {"nope"}}), DomainError);
}

TEST(Report, CriterionFields)
{
    const Json d = criteria_document(run_criteria({.seed = 7, .only = {"constants"}}), 7);
    const Json& c = d["rows"][0];
    for (const char* k : {"id", "section", "title", "measured", "tolerance", "comparison", "pass", "details"})
        EXPECT_TRUE(c.contains(k)) << k;
    EXPECT_EQ(c["tolerance"], 1e-8);
    EXPECT_EQ(d["passed"], 1);
}

TEST(Report, BlowdownJsonKeys)
{
    const Json d = to_json(nash_report());
    for (const char* k : {"radii", "ratio_q", "ratio_r", "ratio_p", "limit_q", "limit_r", "limit_p", "avr_bound",
                          "verdict", "attained_avr", "constant"})
        EXPECT_TRUE(d.contains(k)) << k;
    EXPECT_EQ(d["verdict"], "consistent");
    EXPECT_EQ(d["radii"].size(), default_blowdown_radii().size());
}

TEST(Report, BlowdownCsvHasOneRowPerRadius)
{
    const BlowdownReport r = nash_report();
    const std::string csv = render_csv(to_json(r));
    EXPECT_EQ(line_count(csv), r.radii.size() + 1);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "radius,ratio_q,ratio_r,ratio_p");
}

TEST(Report, JsonNumbersRoundTrip)
{
    const BlowdownReport r = nash_report();
    const Json back = Json::parse(render_json(to_json(r)));
    EXPECT_EQ(back["limit_q"].get<double>(), r.limit_q);
    EXPECT_EQ(back["ratio_p"][5].get<double>(), r.ratio_p[5]);
}

TEST(Report, NonFiniteBecomesNull)
{
    BlowdownReport r = nash_report();
    r.limit_r = std::numeric_limits<double>::quiet_NaN();
    EXPECT_TRUE(to_json(r)["limit_r"].is_null());
}

TEST(Report, MtRowsFollowTheSchedule)
{
    const MtBlowdownReport r = mt_blowdown(cone_space(2.0, 1.0), 2, mt_threshold(1.0, 2));
    const Json d = to_json(r);
    EXPECT_EQ(d["rows"].size(), r.ks.size());
    EXPECT_EQ(line_count(render_csv(d)), r.ks.size() + 1);
}

TEST(Report, ConstantsTable)
{
    const InequalitySpec s = make_spec(Family::faber_krahn_2, {.N = 3.0, .p = 2.0});
    const Json d = constants_document({{"faber_krahn_2", {{"N", 3.0}, {"p", 2.0}}, optimal_constant(s)}});
    EXPECT_EQ(d["rows"][0]["provenance"], "shooting");
    EXPECT_TRUE(d["rows"][0].contains("eigenvalue"));
    const std::string text = render_text(d);
    EXPECT_NE(text.find("faber_krahn_2"), std::string::npos);
}

TEST(Report, CsvQuotesFieldsWithCommas)
{
    Json d = make_document("test");
    d["rows"] = Json::array({Json{{"a", "x,y"}, {"b", 1.5}}});
    EXPECT_EQ(render_csv(d), "a,b\n\"x,y\",1.5\n");
}

TEST(Report, FormatNames)
{
    EXPECT_EQ(format_from_string("csv"), Format::csv);
    EXPECT_FALSE(format_from_string("xml").has_value());
}
