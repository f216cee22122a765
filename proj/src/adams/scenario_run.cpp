#include <algorithm>
#include <set>
#include <sstream>

#include "tsb/adams/scenario.hpp"
#include "tsb/cohomology/models.hpp"
#include "tsb/ext/lift.hpp"

namespace tsb::adams {

namespace {

using Kind = Statement::Kind;

constexpr std::size_t kMaxChoiceDim = 10;
constexpr std::size_t kMaxBranches = 64;

std::string bideg(const Bidegree& b) { return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")"; }

struct Located {
    ClassRef where;
    /// Value of a differential (E2 representative at the target).
    std::optional<ClassRef> value;
};

/// Failure of one branch on one page, with the statements responsible.
struct Failure {
    std::string what;
    std::vector<std::size_t> statements;
};

class SummandRunner {
public:
    SummandRunner(SummandResult& out, const Window& w, const std::vector<Statement>& statements)
        : out_(out), w_(w), st_(statements), names_(out.display_names())
    {
        for (std::size_t k = 0; k < st_.size(); ++k)
            locate(k);
    }

    void run()
    {
        check_witnesses();
        struct State {
            std::vector<std::string> assumptions;
            std::vector<std::string> diffs;
            std::vector<Page> pages;
        };
        std::vector<State> states;
        states.push_back({{}, {}, {Page(out_.e2, w_)}});
        for (int r = 2; r <= w_.s_max; ++r) {
            std::vector<State> next;
            std::vector<Failure> failures;
            for (const auto& state : states) {
                const Page& p = state.pages.back();
                std::optional<Failure> fail;
                auto sys = build(p, r, std::nullopt, fail);
                if (fail) {
                    failures.push_back(*fail);
                    continue;
                }
                const auto sol = sys->solve();
                if (!sol.consistent) {
                    Failure f{"assertions on E" + std::to_string(r) + " are incompatible with h-linearity", {}};
                    for (int tag : sys->conflict())
                        f.statements.push_back(static_cast<std::size_t>(tag));
                    failures.push_back(std::move(f));
                    continue;
                }
                update_status(p, r);
                struct Choice {
                    BitVector a;
                    Page page;
                };
                std::vector<Choice> valid;
                std::vector<std::size_t> killed;
                for (const auto& a : enumerate_affine(sol.particular, sol.null, kMaxChoiceDim)) {
                    std::map<Bidegree, F2Matrix> d;
                    for (const auto& b : sys->blocks())
                        d[b.source] = sys->matrix(a, b.source);
                    std::optional<Page> np;
                    try {
                        np.emplace(p.next(d));
                    }
                    catch (const InvariantBreach&) {
                        continue;
                    }
                    bool ok = true;
                    for (std::size_t k = 0; k < st_.size(); ++k) {
                        if (!must_survive(k))
                            continue;
                        const auto c = page_coords(*np, loc_[k]->where);
                        if (!c || c->is_zero()) {
                            ok = false;
                            killed.push_back(k);
                        }
                    }
                    if (ok)
                        valid.push_back({a, std::move(*np)});
                }
                if (valid.empty()) {
                    Failure f{"every choice of d" + std::to_string(r) + " kills an asserted survivor", {}};
                    std::sort(killed.begin(), killed.end());
                    killed.erase(std::unique(killed.begin(), killed.end()), killed.end());
                    f.statements = killed;
                    failures.push_back(std::move(f));
                    continue;
                }
                const auto varying = varying_columns(*sys, valid.size() > 1 ? collect(valid) : std::vector<BitVector>{});
                for (auto& ch : valid) {
                    State s = state;
                    for (const auto& [src, j] : varying)
                        s.assumptions.push_back(describe(p, *sys, ch.a, src, j));
                    for (const auto& b : sys->blocks()) {
                        const F2Matrix m = sys->matrix(ch.a, b.source);
                        for (std::size_t j = 0; j < b.cols; ++j)
                            if (!m.column(j).is_zero())
                                s.diffs.push_back(describe(p, *sys, ch.a, b.source, j) + " " + bideg(b.source) + " -> " +
                                                  bideg(b.target));
                    }
                    s.pages.push_back(std::move(ch.page));
                    next.push_back(std::move(s));
                }
            }
            if (next.empty())
                throw_failures(failures);
            if (next.size() > kMaxBranches)
                throw AdamsError(out_.name + ": more than " + std::to_string(kMaxBranches) +
                                 " open branches after d" + std::to_string(r));
            states = std::move(next);
        }
        for (auto& s : states)
            out_.branches.push_back({std::move(s.assumptions), std::move(s.diffs), std::move(s.pages)});
        for (std::size_t k = 0; k < st_.size(); ++k)
            if (!out_.status.count(st_[k].line))
                out_.status[st_[k].line] = default_status(k);
    }

private:
    bool must_survive(std::size_t k) const
    {
        const Kind kind = st_[k].kind;
        return kind == Kind::Survive || kind == Kind::Tower;
    }

    void locate(std::size_t k)
    {
        const Statement& s = st_[k];
        loc_.emplace_back();
        if (s.kind == Kind::Collapse)
            return;
        const ExtChart& c = *out_.e2;
        try {
            Located l{evaluate_element(c, out_.aliases, s.location), std::nullopt};
            if (l.where.v.is_zero())
                throw ScenarioError("'" + s.location + "' is zero in E2", s.line);
            if (l.where.at.second - l.where.at.first > w_.stem)
                throw ScenarioError("'" + s.location + "' lies outside the window", s.line);
            if (s.kind == Kind::Differential) {
                const Bidegree tgt{l.where.at.first + s.r, l.where.at.second + s.r - 1};
                l.value = evaluate_element(c, out_.aliases, s.value, tgt);
                if (l.value->at != tgt)
                    throw ScenarioError("'" + s.value + "' lies in " + bideg(l.value->at) + " but d" +
                                            std::to_string(s.r) + " of '" + s.location + "' lands in " + bideg(tgt),
                                        s.line);
            }
            loc_.back() = std::move(l);
        }
        catch (const ScenarioError& e) {
            if (e.line())
                throw;
            throw ScenarioError(e.what(), s.line);
        }
    }

    void check_witnesses()
    {
        for (const auto& s : st_) {
            if (s.kind != Kind::Survive || s.witness_ring.empty())
                continue;
            const auto ring = cohomology::witness_ring(s.witness_ring);
            const long long v = cohomology::char_number(ring, s.witness_expr);
            if (v % 2 == 0)
                throw Contradiction("line " + std::to_string(s.line) + ": witness " + s.witness_ring + " \"" +
                                        s.witness_expr + "\" evaluates to " + std::to_string(v) +
                                        ", which does not detect the class mod 2",
                                    {s.provenance});
            out_.status[s.line] = "witnessed: " + s.witness_ring + " \"" + s.witness_expr + "\" = " + std::to_string(v);
        }
    }

    /// DiffSystem for d_r on p with every applicable statement except `skip`.
    std::unique_ptr<DiffSystem> build(const Page& p, int r, std::optional<std::size_t> skip,
                                      std::optional<Failure>& fail) const
    {
        auto sys = std::make_unique<DiffSystem>(p, r);
        for (std::size_t k = 0; k < st_.size(); ++k) {
            if (skip && *skip == k)
                continue;
            const Statement& s = st_[k];
            const int tag = static_cast<int>(k);
            if (s.kind == Kind::Collapse) {
                for (const auto& b : sys->blocks())
                    sys->add_zero(b.source, tag);
                continue;
            }
            const Located& l = *loc_[k];
            const auto x = page_coords(p, l.where);
            const bool live = x && !x->is_zero();
            if (s.kind == Kind::Differential || s.kind == Kind::Vanish) {
                if (s.r != r)
                    continue;
                if (!live)
                    throw StaleLocation("line " + std::to_string(s.line) + ": '" + s.location +
                                        "' is not a nonzero class of E" + std::to_string(r));
                const Bidegree tgt = p.target(l.where.at.first, l.where.at.second, r);
                BitVector y(p.dim(tgt.first, tgt.second));
                if (s.kind == Kind::Differential) {
                    if (!sys->block(l.where.at) && !l.value->v.is_zero() &&
                        (tgt.first > p.window().s_max || !p.reliable(tgt.first, tgt.second)))
                        throw ScenarioError("the target of d" + std::to_string(r) + " on '" + s.location +
                                                "' is outside the window",
                                            s.line);
                    const auto yc = page_coords(p, *l.value);
                    if (!yc)
                        throw StaleLocation("line " + std::to_string(s.line) + ": '" + s.value +
                                            "' is not a cycle of E" + std::to_string(r));
                    if (yc->size() == y.size())
                        y = *yc;
                }
                sys->add_value(l.where.at, *x, y, tag);
            }
            else if (must_survive(k)) {
                if (!live) {
                    fail = Failure{"'" + s.location + "' does not survive to E" + std::to_string(r), {k}};
                    return sys;
                }
                sys->add_value(l.where.at, *x, BitVector(p.dim(p.target(l.where.at.first, l.where.at.second, r).first,
                                                               p.target(l.where.at.first, l.where.at.second, r).second)),
                               tag);
            }
        }
        return sys;
    }

    /// Marks differential and vanishing statements as imposed or derived.
    void update_status(const Page& p, int r)
    {
        for (std::size_t k = 0; k < st_.size(); ++k) {
            const Statement& s = st_[k];
            if ((s.kind != Kind::Differential && s.kind != Kind::Vanish) || s.r != r)
                continue;
            std::optional<Failure> fail;
            const auto without = build(p, r, k, fail);
            std::string status;
            const auto* b = without->block(loc_[k]->where.at);
            if (!b) {
                status = "trivially satisfied on E" + std::to_string(r);
            }
            else {
                const auto wsol = without->solve();
                const BitVector x = *page_coords(p, loc_[k]->where);
                auto value = [&](const BitVector& a) {
                    const F2Matrix m = without->matrix(a, loc_[k]->where.at);
                    return m * x;
                };
                bool forced = wsol.consistent;
                if (forced)
                    for (const auto& n : wsol.null)
                        forced = forced && value(n).is_zero();
                status = forced ? "derived from h-linearity and the other assertions on E" + std::to_string(r)
                                : "imposed on E" + std::to_string(r);
            }
            auto& cur = out_.status[s.line];
            if (cur.empty() || status.rfind("imposed", 0) == 0)
                cur = status;
        }
    }

    static std::vector<BitVector> collect(const auto& valid)
    {
        std::vector<BitVector> out;
        for (const auto& c : valid)
            out.push_back(c.a);
        return out;
    }

    /// (source, column) pairs whose d_r value differs across the choices.
    std::vector<std::pair<Bidegree, std::size_t>> varying_columns(const DiffSystem& sys,
                                                                  const std::vector<BitVector>& choices) const
    {
        std::vector<std::pair<Bidegree, std::size_t>> out;
        if (choices.size() < 2)
            return out;
        for (const auto& b : sys.blocks()) {
            const F2Matrix m0 = sys.matrix(choices[0], b.source);
            for (std::size_t j = 0; j < b.cols; ++j) {
                bool differs = false;
                for (std::size_t c = 1; c < choices.size() && !differs; ++c)
                    differs = !(sys.matrix(choices[c], b.source).column(j) == m0.column(j));
                if (differs)
                    out.emplace_back(b.source, j);
            }
        }
        return out;
    }

    std::string describe(const Page& p, const DiffSystem& sys, const BitVector& a, const Bidegree& src,
                         std::size_t j) const
    {
        const auto* b = sys.block(src);
        const Cell& sc = p.cell(src.first, src.second);
        const Cell& tc = p.cell(b->target.first, b->target.second);
        const std::string sname = vector_name(p.e2(), src.first, src.second, sc.reps()[j], names_);
        const BitVector v = sys.matrix(a, src).column(j);
        const std::string vname =
            v.is_zero() ? "0" : vector_name(p.e2(), b->target.first, b->target.second, tc.lift(v), names_);
        return "d" + std::to_string(sys.r()) + "(" + sname + ") = " + vname;
    }

    std::string default_status(std::size_t k) const
    {
        switch (st_[k].kind) {
        case Kind::Collapse:
            return "applied: all differentials vanish";
        case Kind::Survive:
            return "survives in every branch";
        case Kind::Tower:
            return "survives in every branch";
        case Kind::Order:
            return "pending comparison check";
        default:
            return "applied";
        }
    }

    [[noreturn]] void throw_failures(const std::vector<Failure>& failures) const
    {
        std::ostringstream os;
        os << out_.name << ": no consistent branch";
        std::vector<std::string> prov;
        std::set<std::size_t> seen;
        for (const auto& f : failures) {
            os << "; " << f.what;
            for (std::size_t k : f.statements) {
                os << " [line " << st_[k].line << "]";
                if (seen.insert(k).second)
                    prov.push_back("line " + std::to_string(st_[k].line) + ": " + st_[k].text +
                                   (st_[k].provenance.empty() ? "" : " (" + st_[k].provenance + ")"));
            }
        }
        throw Contradiction(os.str(), prov);
    }

    SummandResult& out_;
    Window w_;
    const std::vector<Statement>& st_;
    std::map<std::string, std::string> names_;
    std::vector<std::optional<Located>> loc_;
};

std::string join(const std::vector<std::string>& v, const std::string& sep)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? sep : "") + v[k];
    return out;
}

/// Block-diagonal module map from the parts of `src_expr` to those of `tgt_expr`.
module::ModuleMap comparison_map(const ComparisonSpec& cs, const std::string& src_expr,
                                 std::shared_ptr<const module::GradedModule> src,
                                 std::shared_ptr<const module::GradedModule> tgt)
{
    const auto sp = sum_parts(src_expr);
    const auto tp = sum_parts(cs.module_expr);
    if (sp.size() != tp.size())
        throw ScenarioError("comparison '" + cs.name + "' has " + std::to_string(tp.size()) + " parts, its summand " +
                                std::to_string(sp.size()),
                            cs.line);
    std::vector<std::shared_ptr<const module::GradedModule>> sm, tm;
    for (std::size_t k = 0; k < sp.size(); ++k) {
        sm.push_back(std::make_shared<module::GradedModule>(build_module(sp[k])));
        tm.push_back(std::make_shared<module::GradedModule>(build_module(tp[k])));
    }
    std::map<std::size_t, module::ModuleMap> part_maps;
    for (const auto& [k, spec] : cs.maps) {
        if (k >= sp.size())
            throw ScenarioError("map part " + std::to_string(k) + " out of range", cs.line);
        if (spec == "identity") {
            module::ModuleMap f(sm[k], tm[k]);
            for (int d : sm[k]->degrees()) {
                if (sm[k]->dim(d) != tm[k]->dim(d))
                    throw ScenarioError("identity map on part " + std::to_string(k) + " between modules of different size",
                                        cs.line);
                f.set_component(d, F2Matrix::identity(sm[k]->dim(d)));
            }
            part_maps[k] = f;
            continue;
        }
        std::vector<std::pair<module::ModuleVector, module::ModuleVector>> images;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ';')) {
            const auto arrow = item.find("->");
            if (arrow == std::string::npos)
                throw ScenarioError("map entries read 'gen -> image'", cs.line);
            const auto g = module::parse_vector(*sm[k], item.substr(0, arrow));
            images.emplace_back(g, module::parse_vector(*tm[k], item.substr(arrow + 2), g.degree));
        }
        part_maps[k] = module::map_from_generators(sm[k], tm[k], images);
    }
    module::ModuleMap f(src, tgt);
    for (int d : src->degrees()) {
        F2Matrix m(tgt->dim(d), src->dim(d));
        std::size_t row0 = 0;
        std::size_t col0 = 0;
        for (std::size_t k = 0; k < sp.size(); ++k) {
            if (const auto it = part_maps.find(k); it != part_maps.end()) {
                const F2Matrix c = it->second.component(d);
                for (std::size_t i = 0; i < c.rows(); ++i)
                    for (std::size_t j = 0; j < c.cols(); ++j)
                        if (c.get(i, j))
                            m.set(row0 + i, col0 + j);
            }
            row0 += tm[k]->dim(d);
            col0 += sm[k]->dim(d);
        }
        f.set_component(d, m);
    }
    if (const auto err = f.check(); !err.empty())
        throw ScenarioError("comparison '" + cs.name + "' map is not a module map: " + err, cs.line);
    return f;
}

/// Checks that the comparison class has order 2 in every comparison branch and
/// maps to the summand class; returns a description.
std::string verify_order(const Statement& st, const SummandResult& q, const SummandResult& cmp,
                         const ComparisonSpec& cs, const std::string& q_expr)
{
    const ClassRef c = evaluate_element(*q.e2, q.aliases, st.location);
    ClassRef cp;
    try {
        cp = evaluate_element(*cmp.e2, cmp.aliases, st.via_class);
    }
    catch (const ScenarioError& e) {
        throw ScenarioError(e.what(), st.line);
    }
    if (cp.at != c.at)
        throw ScenarioError("'" + st.via_class + "' and '" + st.location + "' lie in different bidegrees", st.line);
    const auto f = comparison_map(cs, q_expr, q.resolution->module_ptr(), cmp.resolution->module_ptr());
    const int s = c.at.first;
    const auto chain = ext::lift_module_map(f, *q.resolution, *cmp.resolution, s, c.at.second);
    const auto phi = ext::induced_ext_map(chain, *q.resolution, *cmp.resolution);
    const auto it = phi.find(c.at);
    const BitVector image = it == phi.end() ? BitVector(q.e2->dim(c.at.first, c.at.second)) : it->second * cp.v;
    if (!(image == c.v))
        throw Contradiction("line " + std::to_string(st.line) + ": the comparison map sends '" + st.via_class + "' to " +
                                vector_name(*q.e2, c.at.first, c.at.second, image) + ", not '" + st.location + "'",
                            {st.provenance});
    const int n = c.at.second - c.at.first;
    std::size_t surviving = 0;
    for (std::size_t bi = 0; bi < cmp.branches.size(); ++bi) {
        const Page& e = cmp.branches[bi].einf();
        const int top = e.window().s_max;
        const std::string where = cs.name + " branch " + std::to_string(bi + 1);
        const auto x = page_coords(e, cp);
        // branches killing the comparison class correspond to branches killing the class itself
        if (!x || x->is_zero())
            continue;
        ++surviving;
        const auto h0 = e.h(0, s, c.at.second);
        if (!h0 || !(*h0 * *x).is_zero())
            throw Contradiction("line " + std::to_string(st.line) + ": h0 '" + st.via_class + "' is nonzero in " +
                                    where,
                                {st.provenance});
        for (int s2 = s + 2; s2 <= top; ++s2) {
            const int t2 = n + s2;
            const std::size_t dim = e.dim(s2, t2);
            if (dim == 0)
                continue;
            if (s2 == top)
                throw Contradiction("line " + std::to_string(st.line) + ": stem " + std::to_string(n) +
                                        " of " + where + " reaches the top of the window",
                                    {st.provenance});
            const auto h1 = e.h(1, s2, t2);
            if (!h1 || h1->rank() != dim)
                throw Contradiction("line " + std::to_string(st.line) + ": h1 is not injective on E-infinity at " +
                                        bideg({s2, t2}) + " in " + where,
                                    {st.provenance});
        }
    }
    if (surviving == 0)
        throw Contradiction("line " + std::to_string(st.line) + ": '" + st.via_class + "' survives in no " + cs.name +
                                " branch",
                            {st.provenance});
    return "verified: " + cs.name + " maps " + st.via_class + " to " + st.location +
           "; in every " + cs.name + " branch where it survives, h0 " + st.via_class +
           " = 0 and h1 is injective on the classes above it";
}

}  // namespace

std::map<std::string, std::string> SummandResult::display_names() const
{
    std::map<std::string, std::string> out;
    for (const auto& a : aliases) {
        const auto& labels = e2->labels(a.s, a.t);
        if (a.index < labels.size())
            out[labels[a.index]] = a.name;
    }
    return out;
}

SummandResult run_summand(const std::string& name, const module::GradedModule& m, const Window& w,
                          const std::vector<Alias>& aliases, const std::vector<Statement>& statements)
{
    SummandResult out;
    out.name = name;
    out.aliases = aliases;
    auto mp = std::make_shared<module::GradedModule>(m);
    mp->validate();
    out.resolution = std::make_shared<ext::Resolution>(
        mp, ext::ResolutionLimits{w.s_max + 1, w.stem + w.s_max + 2});
    out.e2 = std::make_shared<ExtChart>(ExtChart::from_resolution(*out.resolution, name));
    for (const auto& a : aliases)
        if (!out.e2->complete(a.s, a.t) || a.index >= out.e2->dim(a.s, a.t))
            throw ScenarioError(name + ": alias '" + a.name + "' points to no class");
    out.scan = ambiguity_scan(Page(out.e2, w), out.display_names());
    SummandRunner(out, w, statements).run();
    return out;
}

ScenarioResult run_scenario(const Scenario& sc)
{
    ScenarioResult res;
    AbutmentReport& rep = res.report;
    rep.title = sc.title;
    rep.source = sc.source;
    auto run_one = [&](const std::string& name, const std::string& expr, const std::vector<Alias>& aliases,
                       const std::vector<Statement>& sts, const Window& w) {
        SummandResult r = run_summand(name, build_module(expr), w, aliases, sts);
        r.module_expr = expr;
        return r;
    };
    for (const auto& s : sc.summands)
        res.summands.push_back(run_one(s.name, s.module_expr, s.aliases, s.statements, sc.window));
    for (const auto& c : sc.comparisons)
        res.comparisons.push_back(run_one(c.name, c.module_expr, c.aliases, c.statements, c.window.value_or(sc.window)));

    // extension rules per summand
    std::vector<ExtensionRules> rules(sc.summands.size());
    for (std::size_t i = 0; i < sc.summands.size(); ++i) {
        const auto& spec = sc.summands[i];
        auto& sr = res.summands[i];
        for (const auto& st : spec.statements) {
            if (st.kind == Kind::Tower)
                rules[i].towers.push_back(evaluate_element(*sr.e2, sr.aliases, st.location));
            if (st.kind != Kind::Order)
                continue;
            std::size_t ci = sc.comparisons.size();
            for (std::size_t k = 0; k < sc.comparisons.size(); ++k)
                if (sc.comparisons[k].name == st.via)
                    ci = k;
            if (ci == sc.comparisons.size() || sc.comparisons[ci].of != spec.name)
                throw ScenarioError("no comparison '" + st.via + "' for summand " + spec.name, st.line);
            sr.status[st.line] =
                verify_order(st, sr, res.comparisons[ci], sc.comparisons[ci], spec.module_expr);
            rules[i].order_two.push_back(evaluate_element(*sr.e2, sr.aliases, st.location));
        }
    }

    auto record = [&](const SummandResult& r, const std::vector<Statement>& sts) {
        for (const auto& st : sts) {
            const auto it = r.status.find(st.line);
            rep.assertions.push_back({r.name, st.line, st.text, st.provenance, it == r.status.end() ? "" : it->second});
        }
    };
    for (std::size_t i = 0; i < sc.summands.size(); ++i)
        record(res.summands[i], sc.summands[i].statements);
    for (std::size_t i = 0; i < sc.comparisons.size(); ++i)
        record(res.comparisons[i], sc.comparisons[i].statements);

    auto artifacts = [&](const SummandResult& r) {
        const auto names = r.display_names();
        auto& scan = rep.scans[r.name];
        for (const auto& e : r.scan)
            scan.push_back(e.to_string());
        res.artifacts[r.name + ".e2.txt"] = r.e2->to_text();
        res.artifacts[r.name + ".e2.svg"] = r.e2->to_svg(sc.window.stem);
        for (std::size_t b = 0; b < r.branches.size(); ++b) {
            const auto& br = r.branches[b];
            const std::string key = r.branches.size() > 1 ? r.name + " branch " + std::to_string(b + 1) : r.name;
            rep.differentials[key] = br.differentials;
            if (r.branches.size() > 1)
                rep.branches.push_back(key + ": " + (br.assumptions.empty() ? "-" : join(br.assumptions, ", ")));
            const std::string stem = r.name + (r.branches.size() > 1 ? ".b" + std::to_string(b + 1) : "");
            for (std::size_t k = 1; k < br.pages.size(); ++k)
                if (br.pages[k].to_text(names) != br.pages[k - 1].to_text(names))
                    res.artifacts[stem + ".E" + std::to_string(br.pages[k].r()) + ".txt"] = br.pages[k].to_text(names);
            res.artifacts[stem + ".Einf.txt"] = br.einf().to_text(names);
        }
    };
    for (const auto& r : res.summands)
        artifacts(r);
    for (const auto& r : res.comparisons)
        artifacts(r);

    // abutment over the product of summand branches
    std::vector<std::size_t> idx(res.summands.size(), 0);
    struct Combo {
        std::vector<std::string> assumptions;
        std::vector<std::vector<AbelianGroup>> per_degree;
        std::vector<int> torsion;
        std::vector<bool> under;
    };
    std::vector<Combo> combos;
    // analyses per summand branch and degree
    std::vector<std::vector<std::vector<DegreeAnalysis>>> an(res.summands.size());
    for (std::size_t i = 0; i < res.summands.size(); ++i) {
        const auto names = res.summands[i].display_names();
        for (const auto& br : res.summands[i].branches) {
            an[i].emplace_back();
            for (int n = 0; n <= sc.max_degree; ++n)
                an[i].back().push_back(analyze_degree(br.einf(), n, rules[i], names));
        }
    }
    while (true) {
        Combo c;
        for (int n = 0; n <= sc.max_degree; ++n) {
            std::set<AbelianGroup> acc{AbelianGroup{}};
            int tor = 0;
            bool under = false;
            for (std::size_t i = 0; i < res.summands.size(); ++i) {
                const auto& d = an[i][idx[i]][n];
                std::set<AbelianGroup> nx;
                for (const auto& g : acc)
                    for (const auto& h : d.candidates)
                        nx.insert(g + h);
                acc = std::move(nx);
                for (const auto& ch : d.chains)
                    if (!ch.free)
                        tor += ch.length;
                under = under || d.under_resolved;
            }
            for (const auto& g : acc)
                if (g.torsion_log_order() != tor && !under)
                    throw InvariantBreach("degree " + std::to_string(n) + ": candidate " + g.to_string() +
                                          " does not have order 2^" + std::to_string(tor));
            c.per_degree.emplace_back(acc.begin(), acc.end());
            c.torsion.push_back(tor);
            c.under.push_back(under);
        }
        for (std::size_t i = 0; i < res.summands.size(); ++i)
            for (const auto& a : res.summands[i].branches[idx[i]].assumptions)
                c.assumptions.push_back(a);
        combos.push_back(std::move(c));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == res.summands[k].branches.size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size())
            break;
    }
    for (int n = 0; n <= sc.max_degree; ++n) {
        AbutmentReport::Degree d;
        d.degree = n;
        bool same = true;
        for (const auto& c : combos)
            same = same && c.per_degree[n] == combos[0].per_degree[n];
        for (const auto& c : combos) {
            if (same && !d.entries.empty())
                break;
            d.entries.push_back({same ? std::vector<std::string>{} : c.assumptions, c.per_degree[n]});
        }
        for (const auto& c : combos) {
            d.torsion_log_orders.push_back(c.torsion[n]);
            d.under_resolved = d.under_resolved || c.under[n];
        }
        for (const auto& e : d.entries)
            d.extension_open = d.extension_open || e.candidates.size() > 1;
        rep.degrees.push_back(std::move(d));
    }
    return res;
}

ScenarioResult run_scenario_file(const std::string& path) { return run_scenario(load_scenario(path)); }

}  // namespace tsb::adams
