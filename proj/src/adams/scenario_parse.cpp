#include <cctype>
#include <fstream>
#include <sstream>

#include "builtin_data.hpp"
#include "tsb/adams/scenario.hpp"
#include "tsb/cohomology/models.hpp"
#include "tsb/module/dsl.hpp"

namespace tsb::adams {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return line.substr(0, i);
    }
    return line;
}

/// Content of the quoted string starting at s[pos] == '"'; pos moves past it.
std::string take_quoted(const std::string& s, std::size_t& pos, int line)
{
    if (pos >= s.size() || s[pos] != '"')
        throw ScenarioError("expected a quoted string", line);
    const std::size_t end = s.find('"', pos + 1);
    if (end == std::string::npos)
        throw ScenarioError("unterminated string", line);
    std::string out = s.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return out;
}

std::string quoted_only(const std::string& s, int line)
{
    const std::string t = trim(s);
    std::size_t pos = 0;
    std::string out = take_quoted(t, pos, line);
    if (!trim(t.substr(pos)).empty())
        throw ScenarioError("unexpected text after string", line);
    return out;
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w)
        out.push_back(w);
    return out;
}

int parse_page(const std::string& w, int line)
{
    if (w.size() < 2 || w[0] != 'd')
        throw ScenarioError("expected d<r>, got '" + w + "'", line);
    int r = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(w[i])))
            throw ScenarioError("expected d<r>, got '" + w + "'", line);
        r = r * 10 + (w[i] - '0');
    }
    if (r < 2)
        throw ScenarioError("differentials start on E2", line);
    return r;
}

int parse_int(const std::string& w, int line)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(w, &used);
        if (used != w.size())
            throw std::invalid_argument(w);
        return v;
    }
    catch (const std::exception&) {
        throw ScenarioError("expected an integer, got '" + w + "'", line);
    }
}

Statement parse_assert(const std::string& body_in, int line)
{
    Statement st;
    st.line = line;
    st.text = trim(body_in);
    std::string body = st.text;
    bool has_prov = false;
    if (const auto pos = body.find("because"); pos != std::string::npos) {
        std::size_t q = body.find_first_not_of(' ', pos + 7);
        if (q == std::string::npos)
            throw ScenarioError("'because' needs a quoted provenance", line);
        st.provenance = take_quoted(body, q, line);
        if (!trim(body.substr(q)).empty())
            throw ScenarioError("unexpected text after provenance", line);
        body = trim(body.substr(0, pos));
        has_prov = true;
    }
    const auto ws = words(body);
    if (ws.empty())
        throw ScenarioError("empty assertion", line);
    const std::string& kind = ws[0];
    const std::string rest = trim(body.substr(kind.size()));
    if (kind == "vanish") {
        st.kind = Statement::Kind::Vanish;
        if (ws.size() < 3)
            throw ScenarioError("usage: assert vanish d<r> <class> because \"...\"", line);
        st.r = parse_page(ws[1], line);
        st.location = trim(rest.substr(ws[1].size()));
        st.value = "0";
    }
    else if (kind == "survive") {
        st.kind = Statement::Kind::Survive;
        const auto w = rest.find(" witness ");
        st.location = trim(rest.substr(0, w));
        if (w != std::string::npos) {
            const std::string wt = trim(rest.substr(w + 9));
            const auto sp = wt.find(' ');
            if (sp == std::string::npos)
                throw ScenarioError("usage: witness <ring> \"<expr>\"", line);
            st.witness_ring = wt.substr(0, sp);
            st.witness_expr = quoted_only(wt.substr(sp), line);
        }
        if (!has_prov && st.witness_ring.empty())
            throw ScenarioError("survival needs a witness or a provenance", line);
    }
    else if (kind == "tower") {
        st.kind = Statement::Kind::Tower;
        st.location = rest;
    }
    else if (kind == "collapse") {
        st.kind = Statement::Kind::Collapse;
        if (!rest.empty())
            throw ScenarioError("collapse takes no arguments", line);
    }
    else if (kind == "order") {
        st.kind = Statement::Kind::Order;
        const auto v = rest.find(" via ");
        const std::string left = trim(rest.substr(0, v));
        const auto lw = words(left);
        if (lw.size() < 2)
            throw ScenarioError("usage: assert order <class> <2^k> via <comparison> <class>", line);
        const int ord = parse_int(lw.back(), line);
        if (ord < 2 || (ord & (ord - 1)))
            throw ScenarioError("order must be a power of 2", line);
        st.order_log = 0;
        for (int o = ord; o > 1; o >>= 1)
            ++st.order_log;
        if (st.order_log != 1)
            throw ScenarioError("only order 2 assertions are supported", line);
        st.location = trim(left.substr(0, left.size() - lw.back().size()));
        if (v == std::string::npos)
            throw ScenarioError("order assertions need 'via <comparison> <class>'", line);
        const auto rw = words(rest.substr(v + 5));
        if (rw.size() != 2)
            throw ScenarioError("usage: via <comparison> <class>", line);
        st.via = rw[0];
        st.via_class = rw[1];
    }
    else {
        st.kind = Statement::Kind::Differential;
        st.r = parse_page(kind, line);
        const auto arrow = rest.find("->");
        if (arrow == std::string::npos)
            throw ScenarioError("usage: assert d<r> <class> -> <value> because \"...\"", line);
        st.location = trim(rest.substr(0, arrow));
        st.value = trim(rest.substr(arrow + 2));
    }
    if (st.kind != Statement::Kind::Tower && st.kind != Statement::Kind::Collapse && st.kind != Statement::Kind::Order &&
        st.location.empty())
        throw ScenarioError("missing class", line);
    if ((st.kind == Statement::Kind::Differential || st.kind == Statement::Kind::Vanish ||
         st.kind == Statement::Kind::Collapse || st.kind == Statement::Kind::Order) &&
        !has_prov)
        throw ScenarioError("assertion needs a provenance: because \"...\"", line);
    if (st.kind == Statement::Kind::Tower && st.location.empty())
        throw ScenarioError("tower needs a class", line);
    return st;
}

Alias parse_alias(const std::string& rest, int line)
{
    const auto eq = rest.find('=');
    if (eq == std::string::npos)
        throw ScenarioError("usage: alias <name> = (s,t,index)", line);
    Alias a;
    a.name = trim(rest.substr(0, eq));
    if (a.name.empty() || a.name.find(' ') != std::string::npos)
        throw ScenarioError("bad alias name", line);
    std::string tuple = trim(rest.substr(eq + 1));
    if (tuple.size() < 2 || tuple.front() != '(' || tuple.back() != ')')
        throw ScenarioError("usage: alias <name> = (s,t,index)", line);
    tuple = tuple.substr(1, tuple.size() - 2);
    std::vector<std::string> parts;
    std::stringstream ss(tuple);
    std::string p;
    while (std::getline(ss, p, ','))
        parts.push_back(trim(p));
    if (parts.size() != 3)
        throw ScenarioError("usage: alias <name> = (s,t,index)", line);
    a.s = parse_int(parts[0], line);
    a.t = parse_int(parts[1], line);
    const int k = parse_int(parts[2], line);
    if (k < 0)
        throw ScenarioError("negative alias index", line);
    a.index = static_cast<std::size_t>(k);
    return a;
}

/// Top-level comma split of "f(a, b(c, d))" arguments.
std::vector<std::string> split_args(const std::string& s)
{
    std::vector<std::string> out;
    int depth = 0;
    bool quoted = false;
    std::string cur;
    for (char ch : s) {
        if (ch == '"')
            quoted = !quoted;
        if (!quoted) {
            if (ch == '(')
                ++depth;
            else if (ch == ')')
                --depth;
            else if (ch == ',' && depth == 0) {
                out.push_back(trim(cur));
                cur.clear();
                continue;
            }
        }
        cur += ch;
    }
    if (!trim(cur).empty())
        out.push_back(trim(cur));
    return out;
}

struct Call {
    std::string name;
    std::vector<std::string> args;
};

std::optional<Call> as_call(const std::string& expr)
{
    const std::string e = trim(expr);
    const auto open = e.find('(');
    if (open == std::string::npos || e.back() != ')')
        return std::nullopt;
    const std::string name = trim(e.substr(0, open));
    for (char ch : name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return std::nullopt;
    return Call{name, split_args(e.substr(open + 1, e.size() - open - 2))};
}

std::string unquote(const std::string& s)
{
    const std::string t = trim(s);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
        return t.substr(1, t.size() - 2);
    return t;
}

int int_arg(const std::string& s)
{
    try {
        return std::stoi(trim(s));
    }
    catch (const std::exception&) {
        throw ScenarioError("expected an integer argument, got '" + s + "'");
    }
}

}  // namespace

module::GradedModule build_module(const std::string& expr_in)
{
    const std::string expr = trim(expr_in);
    if (expr.rfind("builtin:", 0) == 0)
        return module::builtin_module(expr.substr(8));
    if (expr.rfind("file:", 0) == 0)
        return module::load_module(expr.substr(5));
    const auto call = as_call(expr);
    if (!call)
        throw ScenarioError("cannot read module expression '" + expr + "'");
    const auto& a = call->args;
    auto need = [&](std::size_t n) {
        if (a.size() != n)
            throw ScenarioError(call->name + " takes " + std::to_string(n) + " arguments");
    };
    if (call->name == "sum") {
        if (a.empty())
            throw ScenarioError("sum needs at least one part");
        std::vector<module::GradedModule> parts;
        for (const auto& p : a)
            parts.push_back(build_module(p));
        auto m = module::direct_sum(parts);
        return m;
    }
    if (call->name == "shift") {
        need(2);
        const int k = int_arg(a[0]);
        auto m = module::suspend(build_module(a[1]), k);
        return m;
    }
    if (call->name == "restrict") {
        need(2);
        return module::restrict(build_module(a[1]), int_arg(a[0]));
    }
    if (call->name == "induce") {
        need(2);
        return module::induce(build_module(a[1]), int_arg(a[0]));
    }
    if (call->name == "truncate_above") {
        need(2);
        return module::truncate_above(build_module(a[1]), int_arg(a[0]));
    }
    if (call->name == "truncate_below") {
        need(2);
        return module::truncate_below(build_module(a[1]), int_arg(a[0]));
    }
    if (call->name == "model") {
        need(2);
        return cohomology::named_model(unquote(a[0]), int_arg(a[1])).module();
    }
    if (call->name == "twist") {
        need(3);
        return cohomology::named_model(unquote(a[0]), int_arg(a[1])).twisted(unquote(a[2]));
    }
    throw ScenarioError("unknown module function '" + call->name + "'");
}

std::vector<std::string> sum_parts(const std::string& expr)
{
    const auto call = as_call(expr);
    if (call && call->name == "sum")
        return call->args;
    return {trim(expr)};
}

ClassRef evaluate_element(const ExtChart& c, const std::vector<Alias>& aliases, const std::string& expr,
                          std::optional<Bidegree> zero_at)
{
    std::vector<std::string> terms;
    {
        std::stringstream ss(expr);
        std::string t;
        while (std::getline(ss, t, '+'))
            terms.push_back(trim(t));
    }
    std::optional<ClassRef> out;
    auto add = [&](const ClassRef& r) {
        if (!out)
            out = r;
        else if (out->at != r.at)
            throw ScenarioError("terms of '" + expr + "' lie in different bidegrees");
        else
            out->v ^= r.v;
    };
    for (const auto& term : terms) {
        const auto ws = words(term);
        if (ws.empty())
            throw ScenarioError("empty term in '" + expr + "'");
        if (ws.size() == 1 && ws[0] == "0") {
            if (!zero_at)
                continue;
            add({*zero_at, BitVector(c.dim(zero_at->first, zero_at->second))});
            continue;
        }
        const std::string& name = ws.back();
        std::optional<std::pair<Bidegree, std::size_t>> loc;
        for (const auto& a : aliases)
            if (a.name == name) {
                if (a.index >= c.dim(a.s, a.t))
                    throw ScenarioError("alias '" + name + "' points past Ext^{" + std::to_string(a.s) + "," +
                                        std::to_string(a.t) + "}");
                loc = std::make_pair(Bidegree{a.s, a.t}, a.index);
                break;
            }
        if (!loc)
            loc = c.find(name);
        if (!loc)
            throw ScenarioError("unknown class '" + name + "'");
        ClassRef cur{loc->first, BitVector::unit(c.dim(loc->first.first, loc->first.second), loc->second)};
        for (std::size_t k = ws.size() - 1; k-- > 0;) {
            const std::string& f = ws[k];
            if (f.size() < 2 || f[0] != 'h' || f[1] < '0' || f[1] > '2' ||
                (f.size() > 2 && (f[2] != '^' || f.size() == 3)))
                throw ScenarioError("bad factor '" + f + "' in '" + term + "'");
            const int i = f[1] - '0';
            const int pw = f.size() > 2 ? int_arg(f.substr(3)) : 1;
            for (int p = 0; p < pw; ++p) {
                const auto [s, t] = cur.at;
                const Bidegree nt{s + 1, t + (1 << i)};
                if (!c.complete(nt.first, nt.second))
                    throw ScenarioError("product '" + term + "' leaves the chart");
                cur = {nt, c.h(i, s, t) * cur.v};
                if (cur.v.size() == 0)
                    cur.v = BitVector(c.dim(nt.first, nt.second));
            }
        }
        add(cur);
    }
    if (!out) {
        if (!zero_at)
            throw ScenarioError("cannot place '" + expr + "' without a bidegree");
        return {*zero_at, BitVector(c.dim(zero_at->first, zero_at->second))};
    }
    return *out;
}

Scenario parse_scenario(const std::string& text)
{
    Scenario sc;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    enum class Ctx { None, Summand, Comparison } ctx = Ctx::None;
    bool have_window = false;
    while (std::getline(is, raw)) {
        ++line;
        const std::string l = trim(strip_comment(raw));
        if (l.empty())
            continue;
        const auto sp = l.find_first_of(" \t");
        const std::string head = l.substr(0, sp);
        const std::string rest = sp == std::string::npos ? "" : trim(l.substr(sp));
        if (head == "scenario") {
            sc.title = quoted_only(rest, line);
        }
        else if (head == "source") {
            sc.source = quoted_only(rest, line);
        }
        else if (head == "window") {
            const auto ws = words(rest);
            if (ws.size() != 4 || ws[0] != "stem" || ws[2] != "s")
                throw ScenarioError("usage: window stem <n> s <s_max>", line);
            const Window w{parse_int(ws[1], line), parse_int(ws[3], line)};
            if (w.stem < 0 || w.s_max < 2)
                throw ScenarioError("window limits out of range", line);
            if (ctx == Ctx::Comparison) {
                sc.comparisons.back().window = w;
            }
            else if (ctx == Ctx::None) {
                sc.window = w;
                have_window = true;
            }
            else {
                throw ScenarioError("window belongs before the first summand", line);
            }
        }
        else if (head == "degrees") {
            sc.max_degree = parse_int(rest, line);
        }
        else if (head == "summand") {
            const auto eq = rest.find('=');
            if (eq == std::string::npos)
                throw ScenarioError("usage: summand <name> = <module expression>", line);
            SummandSpec s;
            s.name = trim(rest.substr(0, eq));
            s.module_expr = trim(rest.substr(eq + 1));
            s.line = line;
            if (s.name.empty() || s.module_expr.empty())
                throw ScenarioError("usage: summand <name> = <module expression>", line);
            for (const auto& o : sc.summands)
                if (o.name == s.name)
                    throw ScenarioError("duplicate summand '" + s.name + "'", line);
            sc.summands.push_back(std::move(s));
            ctx = Ctx::Summand;
        }
        else if (head == "comparison") {
            const auto eq = rest.find('=');
            const auto ws = words(rest.substr(0, eq == std::string::npos ? rest.size() : eq));
            if (eq == std::string::npos || ws.size() != 3 || ws[1] != "of")
                throw ScenarioError("usage: comparison <name> of <summand> = <module expression>", line);
            ComparisonSpec c;
            c.name = ws[0];
            c.of = ws[2];
            c.module_expr = trim(rest.substr(eq + 1));
            c.line = line;
            sc.comparisons.push_back(std::move(c));
            ctx = Ctx::Comparison;
        }
        else if (head == "map") {
            if (ctx != Ctx::Comparison)
                throw ScenarioError("map outside a comparison", line);
            const auto sp2 = rest.find(' ');
            if (sp2 == std::string::npos)
                throw ScenarioError("usage: map <part> identity | map <part> \"gen -> image; ...\"", line);
            const int part = parse_int(rest.substr(0, sp2), line);
            const std::string spec = trim(rest.substr(sp2));
            if (part < 0)
                throw ScenarioError("negative part index", line);
            sc.comparisons.back().maps.emplace_back(static_cast<std::size_t>(part),
                                                    spec == "identity" ? spec : quoted_only(spec, line));
        }
        else if (head == "alias") {
            const Alias a = parse_alias(rest, line);
            if (ctx == Ctx::Summand)
                sc.summands.back().aliases.push_back(a);
            else if (ctx == Ctx::Comparison)
                sc.comparisons.back().aliases.push_back(a);
            else
                throw ScenarioError("alias outside a summand", line);
        }
        else if (head == "assert") {
            Statement st = parse_assert(rest, line);
            if (ctx == Ctx::Summand)
                sc.summands.back().statements.push_back(std::move(st));
            else if (ctx == Ctx::Comparison) {
                if (st.kind == Statement::Kind::Order)
                    throw ScenarioError("order assertions belong to summands", line);
                sc.comparisons.back().statements.push_back(std::move(st));
            }
            else
                throw ScenarioError("assertion outside a summand", line);
        }
        else {
            throw ScenarioError("unknown statement '" + head + "'", line);
        }
    }
    if (sc.summands.empty())
        throw ScenarioError("scenario has no summand");
    if (!have_window)
        throw ScenarioError("scenario needs a window line");
    if (sc.max_degree > sc.window.stem - 1)
        throw ScenarioError("degrees must be below the window stem (differentials from stem n+1 are needed)");
    for (const auto& c : sc.comparisons) {
        bool found = false;
        for (const auto& s : sc.summands)
            found = found || s.name == c.of;
        if (!found)
            throw ScenarioError("comparison '" + c.name + "' refers to unknown summand '" + c.of + "'", c.line);
    }
    return sc;
}

Scenario load_scenario(const std::string& path)
{
    if (path.rfind("builtin:", 0) == 0) {
        const auto& table = data::scenarios();
        const auto it = table.find(path.substr(8));
        if (it == table.end())
            throw ScenarioError("unknown builtin scenario '" + path.substr(8) + "'");
        return parse_scenario(it->second);
    }
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace tsb::adams
