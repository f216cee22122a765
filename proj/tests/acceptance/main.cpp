// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "tsb/adams/scenario.hpp"
#include "tsb/cohomology/models.hpp"
#include "tsb/ext/les.hpp"
#include "tsb/module/dsl.hpp"
#include "tsb/steenrod/subalgebra.hpp"

using namespace tsb;
using ext::ExtChart;
using ext::Resolution;
using f2::F2Matrix;
using module::GradedModule;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

std::string source_path(const std::string& rel) { return std::string(TSB_SOURCE_DIR) + "/" + rel; }

std::shared_ptr<const GradedModule> share(GradedModule m) { return std::make_shared<const GradedModule>(std::move(m)); }

GradedModule builtin(const std::string& name, int n = -1)
{
    auto m = module::builtin_module(name);
    return n >= 0 && n < m.algebra() ? module::restrict(m, n) : m;
}

ExtChart chart_of(const GradedModule& m, int s_max, int t_max)
{
    Resolution r(share(m), {s_max, t_max});
    return ExtChart::from_resolution(r);
}

std::string bideg(int s, int t)
{
    return "(" + std::to_string(s) + "," + std::to_string(t) + ")";
}

/// Dimension of the part of Ext^{s,t} not in the image of h0, h1, h2.
std::size_t indecomposables(const ExtChart& c, int s, int t)
{
    const std::size_t n = c.dim(s, t);
    if (n == 0 || s == 0)
        return n;
    std::vector<f2::BitVector> cols;
    for (int i = 0; i <= 2; ++i) {
        const int t0 = t - (1 << i);
        if (t0 < 0)
            continue;
        const auto h = c.h(i, s - 1, t0);
        for (std::size_t k = 0; k < h.cols(); ++k)
            cols.push_back(h.column(k));
    }
    if (cols.empty())
        return n;
    return n - F2Matrix::from_columns(n, cols).rank();
}

/// Criterion 1: algebra sanity.
Outcome algebra_sanity()
{
    Outcome o;
    const std::size_t dims[] = {2, 8, 64};
    for (int n = 0; n <= 2; ++n)
        o.expect(steenrod::SubAlgebra::get(n).dimension() == dims[n],
                 "dim A(" + std::to_string(n) + ") = " + std::to_string(steenrod::SubAlgebra::get(n).dimension()));

    std::mt19937 rng(20261019);
    const auto full = steenrod::AlgebraSpec::full_algebra(40);
    int bad_words = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> w;
        const int len = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < len; ++i)
            w.push_back(1 + static_cast<int>(rng() % 8));
        auto acc = steenrod::SteenrodElement::unit(full);
        for (int a : w)
            acc = steenrod::multiply(acc, steenrod::SteenrodElement(full, a, steenrod::sq(a)));
        if (!(steenrod::adem_reduce(w, full) == acc))
            ++bad_words;
    }
    o.expect(bad_words == 0, std::to_string(bad_words) + " of 1000 words disagree with Milnor multiplication");

    const auto& a2 = steenrod::SubAlgebra::get(2);
    auto el = [&](std::size_t g) { return steenrod::SteenrodElement(a2.spec(), a2.degree_of(g), a2.monomial(g)); };
    int bad_triples = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t x = rng() % 64, y = rng() % 64, z = rng() % 64;
        if (!(steenrod::multiply(steenrod::multiply(el(x), el(y)), el(z)) ==
              steenrod::multiply(el(x), steenrod::multiply(el(y), el(z)))))
            ++bad_triples;
    }
    o.expect(bad_triples == 0, std::to_string(bad_triples) + " of 1000 triples fail associativity");
    return o;
}

/// Criterion 2: change of rings.
Outcome change_of_rings()
{
    Outcome o;
    const auto a = chart_of(module::induce(builtin("F2", 0), 2), 12, 24);
    for (int s = 0; s <= 12; ++s)
        for (int t = 0; t <= 24; ++t)
            if (t - s <= 12 && a.dim(s, t) != (s == t ? 1u : 0u))
                o.expect(false, "A(2) (x)_A(0) F2: dim at " + bideg(s, t) + " is " + std::to_string(a.dim(s, t)));
    for (int s = 0; s < 12; ++s)
        o.expect(a.h(0, s, s).rank() == 1, "h0 is not an isomorphism from " + bideg(s, s));

    const auto direct = chart_of(builtin("F2", 1), 12, 24);
    const auto induced = chart_of(module::induce(builtin("F2", 1), 2), 12, 24);
    for (int s = 0; s <= 12; ++s)
        for (int t = s; t <= 24 && t - s <= 12; ++t) {
            if (direct.dim(s, t) != induced.dim(s, t)) {
                o.expect(false, "A(1) induction: dims differ at " + bideg(s, t));
                continue;
            }
            for (int i = 0; i <= 1; ++i)
                if (t + (1 << i) <= 24 && s < 12 && !(direct.h(i, s, t) == induced.h(i, s, t)))
                    o.expect(false, "A(1) induction: h" + std::to_string(i) + " differs at " + bideg(s, t));
        }
    return o;
}

/// Expected per-degree dimensions of the seven summands through degree 12.
const std::vector<std::map<int, std::size_t>>& expected_block_dims()
{
    static const std::vector<std::map<int, std::size_t>> blocks = {
        {{0, 1}, {4, 1}, {6, 1}, {7, 1}, {10, 1}, {11, 1}},
        {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}, {9, 1}, {10, 1}, {11, 1}, {12, 1}},
        {{8, 1}, {12, 1}},
        {{8, 1}, {10, 1}, {11, 1}, {12, 1}},
        {{9, 1}, {10, 1}, {11, 1}, {12, 1}},
        {{10, 1}, {11, 1}, {12, 1}},
        {{12, 1}},
    };
    return blocks;
}

/// Criterion 3: the twist theorem and the seven-summand decomposition.
Outcome twist_theorem()
{
    Outcome o;
    const auto t = cohomology::named_model("wreath-kz4", 14).twisted("c1 + c2");
    const auto act = t.verify_action();
    o.expect(act.ok, "verify_action: " + act.to_string());
    const auto m = module::truncate_above(t, 13);
    const std::vector<std::vector<std::string>> gens = {{"U"},         {"Ux", "Ux^3", "Ux^7"}, {"UN(D^2,1)"},
                                                        {"UP(D)"},     {"UP(D)x", "UP(D)x^3"}, {"UN(DF,1)"},
                                                        {"UN(D^2,D)"}};
    std::vector<std::vector<module::ModuleVector>> parts;
    for (const auto& g : gens) {
        parts.emplace_back();
        for (const auto& s : g)
            parts.back().push_back(module::parse_vector(m, s));
    }
    const auto dec = module::verify_decomposition(m, parts);
    o.expect(dec.ok, "decomposition: " + dec.failure);
    if (!dec.ok)
        return o;
    const auto& expect = expected_block_dims();
    for (std::size_t b = 0; b < expect.size(); ++b) {
        std::map<int, std::size_t> got;
        for (const auto& [d, n] : dec.blocks[b].dims())
            if (n && d <= 12)
                got[d] = n;
        o.expect(got == expect[b], "summand " + std::to_string(b + 1) + " dimensions differ");
    }
    return o;
}

/// Criterion 4: the heterotic E2 page of Q.
Outcome heterotic_e2()
{
    Outcome o;
    const auto sc = adams::load_scenario(source_path("data/scenarios/het.scn"));
    const adams::SummandSpec* q = nullptr;
    for (const auto& s : sc.summands)
        if (s.name == "Q")
            q = &s;
    if (!q) {
        o.expect(false, "het.scn has no summand Q");
        return o;
    }
    const auto qm = adams::build_module(q->module_expr);
    const auto c = chart_of(qm, 10, 23);

    const std::vector<std::pair<std::string, adams::Bidegree>> generators = {
        {"p1", {0, 1}}, {"p3", {0, 3}}, {"p7", {0, 7}},  {"a", {0, 8}},
        {"b", {2, 10}}, {"c", {0, 9}},  {"d", {0, 11}}, {"e", {0, 12}}};
    std::set<adams::Bidegree> gen_at;
    for (const auto& [name, at] : generators) {
        gen_at.insert(at);
        try {
            const auto r = adams::evaluate_element(c, q->aliases, name);
            o.expect(r.at == at, name + " is not in Ext^" + bideg(at.first, at.second));
            o.expect(indecomposables(c, at.first, at.second) >= 1, name + " is h-decomposable");
        }
        catch (const std::exception& e) {
            o.expect(false, name + ": " + e.what());
        }
    }

    // products named in the differential ledger are nonzero, with h1^2 c = h0^2 d
    for (const std::string p : {"h2^2 p1", "h0^2 p7", "h0^3 p7", "h0 a", "h1 p7", "h1 c", "h1 b", "h1^2 c", "h0^2 d"}) {
        try {
            const auto r = adams::evaluate_element(c, q->aliases, p);
            o.expect(!r.v.is_zero(), p + " vanishes");
        }
        catch (const std::exception& e) {
            o.expect(false, p + ": " + e.what());
        }
    }
    try {
        const auto l = adams::evaluate_element(c, q->aliases, "h1^2 c");
        const auto r = adams::evaluate_element(c, q->aliases, "h0^2 d");
        o.expect(l.at == r.at && l.v == r.v, "h1^2 c differs from h0^2 d");
        const auto x = adams::evaluate_element(c, q->aliases, "h2^2 p1");
        const auto y = adams::evaluate_element(c, q->aliases, "h0^2 p7");
        o.expect(x.v != y.v && c.dim(2, 9) == 2, "h2^2 p1 and h0^2 p7 do not span Ext^{2,9}");
    }
    catch (const std::exception& e) {
        o.expect(false, e.what());
    }

    // generation by the eight classes: every other h-indecomposable sits where
    // c0 (3,11) or the periodicity class (4,12) of Ext(F2) acts on a generator
    for (const auto& [s, t] : c.support()) {
        if (t - s > 12 || s > 9)
            continue;
        std::size_t extra = indecomposables(c, s, t) - (gen_at.count({s, t}) ? 1 : 0);
        if (extra == 0)
            continue;
        bool explained = false;
        for (const auto& g : gen_at)
            for (const auto& off : {adams::Bidegree{3, 11}, adams::Bidegree{4, 12}})
                if (g.first + off.first == s && g.second + off.second == t && c.dim(g.first, g.second))
                    explained = true;
        o.expect(explained, "unexplained indecomposable class at " + bideg(s, t));
    }

    // M4 is one h0 tower (change of rings), M7 agrees with Sigma^12 C-eta
    const auto m4 = chart_of(builtin("M4"), 10, 23);
    for (int s = 0; s <= 10; ++s)
        for (int t = s; t <= 23 && t - s <= 12; ++t)
            o.expect(m4.dim(s, t) == (t - s == 8 ? 1u : 0u), "M4 is not an h0 tower at " + bideg(s, t));
    const auto m7 = chart_of(builtin("M7"), 10, 23);
    const auto ce = chart_of(module::suspend(builtin("Ceta"), 12), 10, 23);
    for (int s = 0; s <= 10; ++s)
        for (int t = s; t <= 23 && t - s <= 12; ++t)
            o.expect(m7.dim(s, t) == ce.dim(s, t), "M7 and Sigma^12 C-eta differ at " + bideg(s, t));
    return o;
}

/// The differentials left open on the heterotic E2 page, as (r, source) pairs.
std::set<std::pair<int, adams::Bidegree>> ledger_sources()
{
    return {
        {2, {0, 8}},  {2, {1, 9}},  {2, {0, 9}}, {2, {1, 11}}, {2, {0, 12}},
        {3, {0, 8}},  {5, {0, 12}}, {5, {1, 13}}, {6, {0, 12}},
    };
}

/// Criterion 5: the ambiguity scan on the heterotic E2 page.
Outcome differential_ledger(const adams::ScenarioResult& het)
{
    Outcome o;
    const adams::SummandResult* q = nullptr;
    for (const auto& s : het.summands)
        if (s.name == "Q")
            q = &s;
    if (!q) {
        o.expect(false, "no summand Q");
        return o;
    }
    std::set<std::pair<int, adams::Bidegree>> found;
    for (const auto& e : q->scan)
        found.insert({e.r, e.source});
    const auto expect = ledger_sources();
    for (const auto& k : expect)
        o.expect(found.count(k) == 1, "missing d" + std::to_string(k.first) + " from " + bideg(k.second.first, k.second.second));
    for (const auto& e : q->scan)
        if (!expect.count({e.r, e.source}))
            o.expect(false, "extra: " + e.to_string());
    return o;
}

std::string group_text(const std::string& g) { return adams::AbelianGroup::parse(g).to_string(); }

/// Criterion 6: the heterotic abutment.
Outcome heterotic_abutment(const adams::ScenarioResult& het)
{
    Outcome o;
    const auto& rep = het.report;
    const std::vector<std::string> fixed = {"Z", "Z/2 (+) Z/2", "Z/2 (+) Z/2", "Z/2^{3}", "Z (+) Z/2", "0", "Z/2",
                                            "Z/2^{4}"};
    for (int n = 0; n < 8; ++n) {
        const auto* d = rep.degree(n);
        const bool single = d && d->entries.size() == 1 && d->entries[0].candidates.size() == 1;
        o.expect(single && d->entries[0].candidates[0].to_string() == group_text(fixed[n]),
                 "degree " + std::to_string(n) + " differs");
    }

    // degrees 8-10: the two branches give (i, j, k) = (1, 4, 4) and (2, 6, 5)
    std::map<std::vector<std::string>, std::vector<std::string>> per_branch;
    for (int n = 8; n <= 10; ++n) {
        const auto* d = rep.degree(n);
        if (!d) {
            o.expect(false, "degree " + std::to_string(n) + " missing");
            continue;
        }
        for (const auto& e : d->entries) {
            o.expect(e.candidates.size() == 1, "degree " + std::to_string(n) + " has an open extension");
            if (!e.candidates.empty())
                per_branch[e.assumptions].push_back(e.candidates[0].to_string());
        }
    }
    std::set<std::vector<std::string>> triples;
    for (const auto& [a, gs] : per_branch)
        triples.insert(gs);
    const std::set<std::vector<std::string>> expect_triples = {
        {group_text("Z^3 (+) Z/2"), group_text("Z/2 (+) Z/2 (+) Z/2 (+) Z/2"),
         group_text("Z/2 (+) Z/2 (+) Z/2 (+) Z/2")},
        {group_text("Z^3 (+) Z/2 (+) Z/2"), group_text("Z/2 (+) Z/2 (+) Z/2 (+) Z/2 (+) Z/2 (+) Z/2"),
         group_text("Z/2 (+) Z/2 (+) Z/2 (+) Z/2 (+) Z/2")}};
    o.expect(triples == expect_triples, "degrees 8-10 do not split into the two branches");

    // degree 11: order 64, exactly the four candidates
    const auto* d11 = rep.degree(11);
    std::set<std::string> got;
    if (d11)
        for (const auto& e : d11->entries)
            for (const auto& g : e.candidates)
                got.insert(g.to_string());
    const std::set<std::string> expect11 = {group_text("Z/2^{3} (+) Z/2^{3}"), group_text("Z/2^{2} (+) Z/2^{4}"),
                                            group_text("Z/2 (+) Z/2^{5}"), group_text("Z/2^{6}")};
    o.expect(got == expect11, "degree 11 candidates differ");
    return o;
}

/// Criterion 7: the long exact sequence for M5.
Outcome les_solver()
{
    Outcome o;
    const auto m5 = share(builtin("M5"));
    const auto quot = share(module::truncate_above(module::suspend(builtin("M2"), 8), 13));
    const auto q = module::map_from_generators(
        m5, quot,
        {{module::parse_vector(*m5, "UP(D)x"), module::parse_vector(*quot, "Ux")},
         {module::parse_vector(*m5, "UP(D)x^3"), module::parse_vector(*quot, "Ux^3")}});
    o.expect(q.surjective(), "the quotient map is not onto");
    const auto i = module::kernel_inclusion(q, "K");
    o.expect(i.source().total_dim() == 1 && i.source().dim(13) == 1, "kernel is not Sigma^13 F2");

    const int S = 8;
    const int T = 22;
    Resolution rsub(i.source_ptr(), {S, T});
    Resolution rmid(m5, {S, T});
    Resolution rquot(quot, {S, T});
    const auto csub = ExtChart::from_resolution(rsub);
    const auto cmid = ExtChart::from_resolution(rmid);
    const auto cquot = ExtChart::from_resolution(rquot);
    const auto qs = ext::induced_ext_map(ext::lift_module_map(q, rmid, rquot, S, T), rmid, rquot);
    const auto is = ext::induced_ext_map(ext::lift_module_map(i, rsub, rmid, S, T), rsub, rmid);
    const auto les = ext::les_ranks(csub, cmid, cquot, qs, is);
    o.expect(les.rank(0, 13) && *les.rank(0, 13) == 1, "connecting rank at (0,13) is not forced to 1");
    o.expect(cmid.dim(0, 13) == 0, "Hom(M5, Sigma^13 F2) is nonzero");

    // rebuild Ext(M5) from the outer terms and the connecting ranks alone
    for (int s = 0; s < S; ++s)
        for (int t = s; t <= T && t - s <= 12; ++t) {
            // a connecting map with zero source or target carries no entry
            const auto conn = [&](int s0) -> std::optional<std::size_t> {
                if (s0 < 0 || csub.dim(s0, t) == 0 || cquot.dim(s0 + 1, t) == 0)
                    return 0;
                return les.rank(s0, t);
            };
            const auto r_in = conn(s - 1);
            const auto r_out = conn(s);
            if (!r_in || !r_out) {
                o.expect(false, "connecting rank undetermined near " + bideg(s, t));
                continue;
            }
            const std::size_t want = cquot.dim(s, t) - *r_in + csub.dim(s, t) - *r_out;
            o.expect(want == cmid.dim(s, t), "Ext(M5) at " + bideg(s, t) + ": sequence gives " +
                                                 std::to_string(want) + ", direct " +
                                                 std::to_string(cmid.dim(s, t)));
        }
    return o;
}

/// Criterion 8: the CHL computation.
Outcome chl_end_to_end()
{
    Outcome o;
    const auto r = cohomology::kz4(14);
    const auto tw = cohomology::twist(r, "-2c");
    const auto plain = cohomology::to_module(r);
    for (int d = 0; d <= 14; ++d)
        for (int i : {1, 2, 4})
            if (d + i <= 14 && !(tw.action(i, d) == plain.action(i, d)))
                o.expect(false, "T(-2c) differs from the untwisted module: Sq" + std::to_string(i) + " in degree " +
                                    std::to_string(d));

    // gray (F2) plus black (positive degrees) reproduce the whole chart
    const auto whole = chart_of(plain, 10, 22);
    const auto gray = chart_of(builtin("F2"), 10, 22);
    const auto black = chart_of(module::truncate_below(plain, 1), 10, 22);
    for (int s = 0; s <= 10; ++s)
        for (int t = s; t <= 22 && t - s <= 12; ++t)
            o.expect(whole.dim(s, t) == gray.dim(s, t) + black.dim(s, t), "E2 split fails at " + bideg(s, t));

    const auto res = adams::run_scenario_file(source_path("data/scenarios/chl.scn"));
    for (const auto& sm : res.summands)
        if (sm.name == "red") {
            std::size_t d2 = 0;
            for (const auto& e : sm.scan)
                d2 += e.r == 2;
            o.expect(sm.scan.size() == 2 && d2 == 2, "scan of the reduced summand has " +
                                                         std::to_string(sm.scan.size()) + " entries");
        }
    const std::vector<std::string> expect = {"Z",          "Z/2", "Z/2",         "Z/2^{3}",
                                             "Z",          "0",   "Z/2",         "0",
                                             "Z^2 (+) Z/2", "Z/2 (+) Z/2 (+) Z/2", "Z/2 (+) Z/2", "Z/2^{3}"};
    for (int n = 0; n <= 11; ++n) {
        const auto* d = res.report.degree(n);
        const bool single = d && d->entries.size() == 1 && d->entries[0].candidates.size() == 1;
        o.expect(single && d->entries[0].candidates[0].to_string() == group_text(expect[n]),
                 "degree " + std::to_string(n) + " differs");
    }
    return o;
}

/// Criterion 9: characteristic numbers.
Outcome witnesses()
{
    Outcome o;
    const long long v = cohomology::char_number(cohomology::witness_ring("hp2xs4"), "y*x^2 + x*y^2");
    o.expect(((v % 2) + 2) % 2 == 1, "HP^2 x S^4 number is " + std::to_string(v));
    const long long w =
        cohomology::char_number(cohomology::witness_ring("hp2"), "c(P) c(Q)", {{"c(P)", "2x"}, {"c(Q)", "-x"}});
    o.expect(w == 2, "HP^2 number c(P) c(Q) is " + std::to_string(w) + ", expected 2");
    return o;
}

/// Criterion 10: maps between charts.
Outcome comparison_maps()
{
    Outcome o;
    const auto m2 = builtin("M2");
    const auto over2 = share(m2);
    const auto over1 = share(module::restrict(m2, 1));
    Resolution r2(over2, {8, 20});
    Resolution r1(over1, {8, 20});
    const auto c2 = ExtChart::from_resolution(r2);
    const auto c1 = ExtChart::from_resolution(r1);
    const auto f = ext::induced_ext_map(ext::lift_restriction(r1, r2, 8, 20), r1, r2);

    const auto stem_total = [](const ExtChart& c, int n) {
        std::size_t k = 0;
        for (int s = 0; s <= 8; ++s)
            k += c.dim(s, n + s);
        return k;
    };
    const auto stem_rank = [&](int n) {
        std::size_t k = 0;
        for (int s = 0; s <= 8; ++s)
            k += ext::rank_at(f, s, n + s);
        return k;
    };
    // stem 7: Z/16 + Z/2 onto Z/16
    o.expect(stem_total(c1, 7) == 4 && stem_rank(7) == 4 && stem_total(c2, 7) == 5,
             "stem 7 does not map Z/16 + Z/2 onto Z/16");
    // stem 11: Z/8 injects as 16 times a generator of the A(1) tower
    const int bottom = [&] {
        for (int s = 0; s <= 8; ++s)
            if (c1.dim(s, 11 + s))
                return s;
        return -1;
    }();
    bool shifted = stem_total(c2, 11) == 3 && stem_rank(11) == 3;
    for (int s = 0; s <= 8; ++s)
        if (ext::rank_at(f, s, 11 + s))
            shifted = shifted && s >= bottom + 4;
    o.expect(shifted, "stem 11 image is not 16 times the bottom class");

    // frozen filled/unfilled pattern: (stem, s) -> rank of the map out of A(2)
    const std::map<std::pair<int, int>, std::size_t> filled = {
        {{1, 0}, 1}, {{2, 1}, 1}, {{3, 0}, 1}, {{3, 1}, 1}, {{3, 2}, 1}, {{4, 1}, 0}, {{6, 1}, 0},
        {{7, 0}, 1}, {{7, 1}, 1}, {{7, 2}, 1}, {{7, 3}, 1}, {{8, 1}, 0}, {{8, 2}, 0}, {{9, 2}, 0},
        {{9, 3}, 0}, {{9, 4}, 1}, {{10, 5}, 1}, {{11, 4}, 1}, {{11, 5}, 1}, {{11, 6}, 1}};
    for (int n = 0; n <= 11; ++n)
        for (int s = 0; s <= 8; ++s) {
            if (!c2.dim(s, n + s))
                continue;
            const auto it = filled.find({n, s});
            o.expect(it != filled.end() && it->second == ext::rank_at(f, s, n + s),
                     "pattern differs at stem " + std::to_string(n) + ", s = " + std::to_string(s));
        }

    // RP^2 -> RP^infinity in stem 8
    const auto rp2 = share(module::suspend(builtin("C2"), 1));
    const auto g = module::map_from_generators(over2, rp2,
                                               {{module::parse_vector(*over2, "Ux"), module::parse_vector(*rp2, "x0")},
                                                {module::parse_vector(*over2, "Ux^3"), module::parse_vector(*rp2, "0", 3)},
                                                {module::parse_vector(*over2, "Ux^7"), module::parse_vector(*rp2, "0", 7)}});
    Resolution rr(rp2, {8, 20});
    const auto cr = ExtChart::from_resolution(rr);
    const auto gm = ext::induced_ext_map(ext::lift_module_map(g, r2, rr, 8, 20), r2, rr);
    std::size_t rank8 = 0;
    for (int s = 0; s <= 8; ++s)
        rank8 += ext::rank_at(gm, s, 8 + s);
    o.expect(rank8 == stem_total(cr, 8), "RP^2 stem 8 map is not injective");
    o.expect(ext::rank_at(gm, 2, 10) == 1, "RP^2 stem 8 map misses the s = 2 class");
    o.expect(c2.dim(1, 9) == 1 && ext::rank_at(gm, 1, 9) == 0 && cr.dim(1, 9) == 0,
             "RP^2 stem 8 map hits the s = 1 class");
    return o;
}

/// Criterion 11: structural properties.
Outcome property_suite(const adams::ScenarioResult& het)
{
    Outcome o;
    for (const char* name : {"F2", "C2", "Ceta", "M2", "M5"}) {
        const auto m = share(builtin(name));
        Resolution a(m, {6, 20});
        Resolution b(m, {8, 24});
        o.expect(a.check().empty(), std::string(name) + ": " + a.check());
        o.expect(b.check().empty(), std::string(name) + ": " + b.check());
        o.expect(ExtChart::from_resolution(a) == ExtChart::from_resolution(b).truncated(6, 20),
                 std::string(name) + ": chart changes when the window grows");
    }
    Resolution unit(share(builtin("F2")), {8, 20});
    for (const char* name : {"F2", "C2", "Ceta"}) {
        Resolution r(share(builtin(name)), {7, 18});
        const auto c = ExtChart::from_resolution(r);
        for (int s = 0; s < 7; ++s)
            for (int t = 0; t - s <= 10 && t <= 18; ++t) {
                const auto gens = r.free(s).generators_in(t);
                for (int i = 0; i <= 2; ++i) {
                    if (t + (1 << i) > 18)
                        continue;
                    const auto h = c.h(i, s, t);
                    for (std::size_t k = 0; k < gens.size(); ++k)
                        if (!(ext::yoneda_h(r, unit, i, s, gens[k]) == h.column(k)))
                            o.expect(false, std::string(name) + ": h" + std::to_string(i) +
                                                " disagrees with lifting at " + bideg(s, t));
                }
            }
    }
    const auto again = adams::run_scenario_file(source_path("data/scenarios/het.scn"));
    o.expect(again.report.to_json() == het.report.to_json() && again.report.to_text() == het.report.to_text() &&
                 again.artifacts == het.artifacts,
             "replaying het.scn changes the report");
    return o;
}

}  // namespace

int main()
{
    const auto het = adams::run_scenario_file(source_path("data/scenarios/het.scn"));
    struct Criterion {
        std::string name;
        /// Runtime budget in seconds.
        double budget;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"algebra sanity", 5.0, algebra_sanity},
        {"change of rings", 30.0, change_of_rings},
        {"twist theorem and seven summands", 30.0, twist_theorem},
        {"heterotic E2 page", 120.0, heterotic_e2},
        {"differential ledger", 120.0, [&] { return differential_ledger(het); }},
        {"heterotic abutment", 60.0, [&] { return heterotic_abutment(het); }},
        {"long exact sequence for M5", 120.0, les_solver},
        {"CHL end to end", 120.0, chl_end_to_end},
        {"witness evaluator", 1.0, witnesses},
        {"comparison maps", 120.0, comparison_maps},
        {"property suite", 600.0, [&] { return property_suite(het); }},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].run();
        }
        catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > criteria[k].budget)
            o.expect(false, "over the runtime budget of " + std::to_string(criteria[k].budget) + " s");
        std::ostringstream line;
        line << "criterion " << k + 1 << " [" << criteria[k].name << "]: " << (o.ok ? "PASS" : "FAIL");
        line.precision(2);
        line << std::fixed << " (" << secs << " s)";
        std::cout << line.str() << "\n";
        for (const auto& n : o.notes)
            std::cout << "    " << n << "\n";
        failed += !o.ok;
    }
    std::cout << criteria.size() - failed << " of " << criteria.size() << " criteria pass\n";
    return failed ? 1 : 0;
}
