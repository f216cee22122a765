#include <random>

#include "doctest.h"
#include "tsb/adams/scenario.hpp"
#include "tsb/module/dsl.hpp"

using namespace tsb;
using adams::AbelianGroup;

namespace {

std::string scenario_path(const std::string& name) { return std::string(TSB_SOURCE_DIR) + "/data/scenarios/" + name; }

const std::string kHeader = "scenario \"t\"\nwindow stem 12 s 10\ndegrees 11\n";
const std::string kQ = "summand Q = sum(builtin:M2, builtin:M4, builtin:M5, builtin:M7)\n"
                       "alias p1 = (0,1,0)\nalias a = (0,8,0)\nalias c = (0,9,0)\nalias b = (2,10,0)\n"
                       "alias e = (0,12,0)\n";

long long det(std::vector<std::vector<long long>> m)
{
    // fraction-free Bareiss elimination
    const std::size_t n = m.size();
    long long sign = 1;
    long long prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::size_t rank_mod2(const std::vector<std::vector<long long>>& m, std::size_t cols)
{
    f2::F2Matrix a(m.size(), cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (m[i][j] & 1)
                a.set(i, j);
    return a.rank();
}

}  // namespace

TEST_CASE("cokernel agrees with determinant and mod 2 rank on random unimodular conjugates")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        std::vector<int> exps(n);
        for (auto& e : exps)
            e = static_cast<int>(rng() % 4);
        std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            m[i][i] = 1LL << exps[i];
        // row and column operations with small multipliers
        for (int op = 0; op < 6; ++op) {
            const std::size_t i = rng() % n;
            const std::size_t j = rng() % n;
            if (i == j)
                continue;
            const long long k = static_cast<long long>(rng() % 3) - 1;
            for (std::size_t c = 0; c < n; ++c)
                m[i][c] += k * m[j][c];
            for (std::size_t r = 0; r < n; ++r)
                m[r][j] += k * m[r][i];
        }
        const AbelianGroup g = adams::cokernel(m, n);
        CHECK(g.free_rank == 0);
        CHECK((1LL << g.torsion_log_order()) == std::llabs(det(m)));
        CHECK(g.torsion.size() == n - rank_mod2(m, n));
    }
}

TEST_CASE("cokernel of the Z/4 extension pattern")
{
    CHECK(adams::cokernel({{4, 0}, {0, 2}}, 2).to_string() == "Z/2 (+) Z/2^{2}");
    CHECK(adams::cokernel({{2, -1}, {0, 2}}, 2).to_string() == "Z/2^{2}");
    CHECK(adams::cokernel({{2, 0}}, 2).to_string() == "Z (+) Z/2");
    CHECK_THROWS_AS(adams::cokernel({{3}}, 1), adams::AdamsError);
}

TEST_CASE("group text round trips")
{
    for (const std::string s : {"0", "Z", "Z^3 (+) Z/2 (+) Z/2", "Z/2^{3} (+) Z/2^{3}", "Z (+) Z/2^{6}"}) {
        const auto g = AbelianGroup::parse(s);
        CHECK(g.to_string() == s);
    }
    CHECK(AbelianGroup::parse("Z^3 (+) Z/2 (+) Z/2^{4}").to_short_string() == "Z^3 + Z/2 + Z/16");
}

TEST_CASE("scan is empty when every class sits in an even stem")
{
    auto f2 = module::restrict(module::builtin_module("F2"), 0);
    auto m = std::make_shared<module::GradedModule>(module::direct_sum(f2, module::suspend(f2, 2)));
    ext::Resolution r(m, {9, 16});
    auto chart = std::make_shared<ext::ExtChart>(ext::ExtChart::from_resolution(r));
    const adams::Page p(chart, {4, 8});
    CHECK(adams::ambiguity_scan(p).empty());
}

TEST_CASE("page homology drops dimensions by the ranks of d2 in and out")
{
    const auto res = adams::run_scenario(adams::parse_scenario(
        kHeader + kQ + "assert d2 a -> h2^2 p1 because \"given\"\nassert survive e because \"given\"\n"
                       "assert vanish d2 c because \"given\"\nassert vanish d2 h0 a because \"given\"\n"));
    const auto& br = res.summands[0].branches.at(0);
    const auto& e2 = br.pages[0];
    const auto& e3 = br.pages[1];
    CHECK(e3.r() == 3);
    CHECK(e3.dim(0, 8) + 1 == e2.dim(0, 8));
    CHECK(e3.dim(2, 9) + 1 == e2.dim(2, 9));
    for (const auto& [s, t] : e2.support())
        if (std::make_pair(s, t) != std::make_pair(0, 8) && std::make_pair(s, t) != std::make_pair(2, 9) &&
            t - s <= 11)
            CHECK(e3.dim(s, t) == e2.dim(s, t));
}

TEST_CASE("d2(h0 a) is derived from d2(a) by h0-linearity")
{
    const auto res = adams::run_scenario(adams::parse_scenario(
        kHeader + kQ + "assert d2 a -> h2^2 p1 because \"given\"\nassert vanish d2 h0 a because \"h0-linearity\"\n"
                       "assert survive e because \"given\"\nassert vanish d2 c because \"given\"\n"));
    const auto& st = res.summands[0].status;
    CHECK(st.at(10).find("imposed") == 0);
    CHECK(st.at(11).find("derived") == 0);
    CHECK(res.summands[0].branches.size() == 1);
}

TEST_CASE("contradictory assertions report both provenances")
{
    const auto sc = adams::parse_scenario(kHeader + kQ + "assert d2 a -> h2^2 p1 because \"first\"\n"
                                                         "assert vanish d2 a because \"second\"\n");
    try {
        adams::run_scenario(sc);
        FAIL("expected a contradiction");
    }
    catch (const adams::Contradiction& e) {
        const auto& p = e.provenance();
        REQUIRE(p.size() == 2);
        CHECK(p[0].find("first") != std::string::npos);
        CHECK(p[1].find("second") != std::string::npos);
    }
}

TEST_CASE("assertions on classes that no longer exist are stale")
{
    const auto sc = adams::parse_scenario(kHeader + kQ + "assert d2 a -> h2^2 p1 because \"given\"\n"
                                                         "assert vanish d3 a because \"given\"\n");
    CHECK_THROWS_AS(adams::run_scenario(sc), adams::StaleLocation);
}

TEST_CASE("values in the wrong bidegree are rejected")
{
    const auto sc = adams::parse_scenario(kHeader + kQ + "assert d2 a -> b because \"given\"\n");
    CHECK_THROWS_AS(adams::run_scenario(sc), adams::ScenarioError);
}

TEST_CASE("scenario syntax errors carry line numbers")
{
    try {
        adams::parse_scenario(kHeader + kQ + "assert d2 a -> h2^2 p1\n");
        FAIL("expected a parse error");
    }
    catch (const adams::ScenarioError& e) {
        CHECK(e.line() == 10);
    }
    CHECK_THROWS_AS(adams::parse_scenario("window stem 4 s 4\n"), adams::ScenarioError);
    CHECK_THROWS_AS(adams::parse_scenario(kHeader + "frobnicate\n"), adams::ScenarioError);
    CHECK_THROWS_AS(adams::parse_scenario(kHeader + kQ + "assert order c 3 via x c because \"y\"\n"),
                    adams::ScenarioError);
}

TEST_CASE("a witness that vanishes mod 2 is refused")
{
    const auto sc = adams::parse_scenario(kHeader + kQ + "assert survive e witness hp2xs4 \"2*y*x^2\"\n");
    CHECK_THROWS_AS(adams::run_scenario(sc), adams::Contradiction);
}

TEST_CASE("towers need an assertion once they reach the top of the window")
{
    const std::string head = "scenario \"t\"\nwindow stem 4 s 6\ndegrees 3\nsummand k = restrict(0, builtin:F2)\n"
                             "assert collapse because \"no room\"\n";
    const auto open = adams::run_scenario(adams::parse_scenario(head));
    CHECK(open.report.degree(0)->under_resolved);
    const auto closed = adams::run_scenario(adams::parse_scenario(head + "assert tower x0_0_0\n"));
    CHECK_FALSE(closed.report.degree(0)->under_resolved);
    CHECK(closed.report.degree(0)->entries.at(0).candidates.at(0).to_string() == "Z");
    CHECK(closed.report.degree(1)->entries.at(0).candidates.at(0).to_string() == "0");
}

TEST_CASE("spin scenario gives the 2-primary spin bordism groups")
{
    const auto rep = adams::run_scenario_file(scenario_path("spin.scn")).report;
    const std::vector<std::string> expect{"Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0", "Z^2"};
    for (int n = 0; n <= 8; ++n) {
        const auto* d = rep.degree(n);
        REQUIRE(d);
        REQUIRE(d->entries.size() == 1);
        CHECK(d->entries[0].candidates.size() == 1);
        CHECK(d->entries[0].candidates[0].to_string() == expect[n]);
    }
}

TEST_CASE("replaying a scenario gives an identical report that survives a JSON round trip")
{
    const auto a = adams::run_scenario_file(scenario_path("het.scn"));
    const auto b = adams::run_scenario_file(scenario_path("het.scn"));
    CHECK(a.report == b.report);
    CHECK(a.report.to_text() == b.report.to_text());
    CHECK(a.report.to_json() == b.report.to_json());
    CHECK(a.artifacts == b.artifacts);
    const auto back = adams::AbutmentReport::from_json(a.report.to_json());
    CHECK(back == a.report);
    CHECK_THROWS_AS(adams::AbutmentReport::from_json("{\"title\": 3}"), adams::AdamsError);
}

TEST_CASE("without the comparison the degree 9 extension stays open")
{
    const std::string text = kHeader + kQ +
                             "alias h0a = (1,9,1)\n"
                             "assert d2 a -> h2^2 p1 because \"given\"\nassert survive e because \"given\"\n"
                             "assert tower h0a\n";
    const auto rep = adams::run_scenario(adams::parse_scenario(text)).report;
    const auto* d9 = rep.degree(9);
    REQUIRE(d9);
    CHECK(d9->extension_open);
}
