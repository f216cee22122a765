#include "tsb/cohomology/models.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "tsb/steenrod/milnor.hpp"

namespace tsb::cohomology {

namespace {

void add_term(Poly& p, const Exps& e, long long c)
{
    if (c == 0)
        return;
    auto& v = p[e];
    v += c;
    if (v == 0)
        p.erase(e);
}

// Recursive-descent parser for polynomial expressions; names resolve through
// `lookup`, products through `mul`.
class ExprParser {
public:
    ExprParser(const std::string& text, std::function<std::optional<Poly>(const std::string&)> lookup,
               std::function<Poly(const Poly&, const Poly&)> mul, Poly one)
        : s_(text), lookup_(std::move(lookup)), mul_(std::move(mul)), one_(std::move(one))
    {
    }

    Poly run()
    {
        Poly p = expr();
        skip();
        if (i_ != s_.size())
            fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ModelError("in '" + s_ + "' at offset " + std::to_string(i_) + ": " + what);
    }
    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }
    Poly expr()
    {
        skip();
        int sign = 1;
        if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
            sign = s_[i_] == '-' ? -1 : 1;
            ++i_;
        }
        Poly acc = scale(term(), sign);
        for (;;) {
            skip();
            if (i_ >= s_.size() || (s_[i_] != '+' && s_[i_] != '-'))
                return acc;
            const int sg = s_[i_] == '-' ? -1 : 1;
            ++i_;
            for (const auto& [e, c] : term())
                add_term(acc, e, sg * c);
        }
    }
    static Poly scale(Poly p, long long k)
    {
        Poly out;
        for (const auto& [e, c] : p)
            add_term(out, e, c * k);
        return out;
    }
    Poly term()
    {
        Poly acc = power();
        for (;;) {
            skip();
            if (i_ >= s_.size())
                return acc;
            const char c = s_[i_];
            if (c == '*') {
                ++i_;
                acc = mul_(acc, power());
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_') {
                acc = mul_(acc, power());
            } else {
                return acc;
            }
        }
    }
    Poly power()
    {
        Poly base = primary();
        skip();
        if (i_ < s_.size() && s_[i_] == '^') {
            ++i_;
            skip();
            const long long k = integer();
            Poly out = one_;
            for (long long j = 0; j < k; ++j)
                out = mul_(out, base);
            return out;
        }
        return base;
    }
    long long integer()
    {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
            ++j;
        if (j == i_)
            fail("expected an integer");
        const long long v = std::stoll(s_.substr(i_, j - i_));
        i_ = j;
        return v;
    }
    Poly primary()
    {
        skip();
        if (i_ >= s_.size())
            fail("unexpected end");
        const char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)))
            return scale(one_, integer());
        if (c == '(') {
            ++i_;
            Poly p = expr();
            skip();
            if (i_ >= s_.size() || s_[i_] != ')')
                fail("expected ')'");
            ++i_;
            return p;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            std::string name = s_.substr(i_, j - i_);
            // names like c(P)
            if (j < s_.size() && s_[j] == '(') {
                auto close = s_.find(')', j);
                if (close != std::string::npos) {
                    const std::string longer = s_.substr(i_, close + 1 - i_);
                    if (auto p = lookup_(longer)) {
                        i_ = close + 1;
                        return *p;
                    }
                }
            }
            auto p = lookup_(name);
            if (!p) {
                // a run of single-letter names such as xy
                if (name.size() > 1) {
                    Poly acc = one_;
                    std::size_t k = 0;
                    while (k < name.size()) {
                        std::size_t len = 1;
                        while (k + len < name.size() && std::isdigit(static_cast<unsigned char>(name[k + len])))
                            ++len;
                        auto q = lookup_(name.substr(k, len));
                        if (!q)
                            fail("unknown name '" + name + "'");
                        acc = mul_(acc, *q);
                        k += len;
                    }
                    i_ = j;
                    return acc;
                }
                fail("unknown name '" + name + "'");
            }
            i_ = j;
            return *p;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t i_ = 0;
    std::function<std::optional<Poly>(const std::string&)> lookup_;
    std::function<Poly(const Poly&, const Poly&)> mul_;
    Poly one_;
};

}  // namespace

RingModel::RingModel(std::string name, std::vector<Generator> gens, int cap, bool integral)
    : name_(std::move(name)), gens_(std::move(gens)), cap_(cap), integral_(integral)
{
    basis_.resize(cap_ + 1);
    Exps cur(gens_.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t g, int d) {
        if (g == gens_.size()) {
            basis_[d].push_back(cur);
            return;
        }
        for (int k = 0;; ++k) {
            const int dd = d + k * gens_[g].degree;
            if (dd > cap_ || (gens_[g].nilpotence && k >= gens_[g].nilpotence))
                break;
            cur[g] = k;
            rec(g + 1, dd);
            if (gens_[g].degree == 0)
                break;
        }
        cur[g] = 0;
    };
    rec(0, 0);
    for (auto& v : basis_)
        std::sort(v.begin(), v.end(), std::greater<>());
}

std::optional<std::size_t> RingModel::generator_index(const std::string& name) const
{
    for (std::size_t g = 0; g < gens_.size(); ++g)
        if (gens_[g].name == name)
            return g;
    return std::nullopt;
}

const std::vector<Exps>& RingModel::basis(int d) const
{
    static const std::vector<Exps> empty;
    if (d < 0 || d > cap_)
        return empty;
    return basis_[d];
}

int RingModel::degree(const Exps& e) const
{
    int d = 0;
    for (std::size_t g = 0; g < gens_.size(); ++g)
        d += e[g] * gens_[g].degree;
    return d;
}

bool RingModel::allowed(const Exps& e) const
{
    if (degree(e) > cap_)
        return false;
    for (std::size_t g = 0; g < gens_.size(); ++g)
        if (gens_[g].nilpotence && e[g] >= gens_[g].nilpotence)
            return false;
    return true;
}

std::string RingModel::monomial_name(const Exps& e) const
{
    std::string s;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (e[g] == 0)
            continue;
        s += gens_[g].name;
        if (e[g] > 1)
            s += "^" + std::to_string(e[g]);
    }
    return s.empty() ? "1" : s;
}

Poly RingModel::monomial(const Exps& e, long long c) const
{
    Poly p;
    if (allowed(e))
        add_term(p, e, c);
    return p;
}

Poly RingModel::multiply(const Poly& a, const Poly& b) const
{
    Poly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exps e(gens_.size());
            for (std::size_t g = 0; g < e.size(); ++g)
                e[g] = ea[g] + eb[g];
            if (allowed(e))
                add_term(out, e, ca * cb);
        }
    return integral_ ? out : reduce_mod2(out);
}

Poly RingModel::reduce_mod2(const Poly& p) const
{
    Poly out;
    for (const auto& [e, c] : p)
        if (c % 2 != 0)
            out[e] = 1;
    return out;
}

void RingModel::set_generator_square(std::size_t g, int i, const Poly& p)
{
    gen_sq_[{g, i}] = reduce_mod2(p);
    sq_cache_.clear();
}

Poly RingModel::sq(int i, const Exps& e) const
{
    if (integral_)
        throw ModelError("Steenrod squares are defined on F2 models only");
    if (i == 0)
        return monomial(e);
    auto key = std::make_pair(i, e);
    if (auto it = sq_cache_.find(key); it != sq_cache_.end())
        return it->second;
    Poly out;
    std::size_t g = 0;
    while (g < e.size() && e[g] == 0)
        ++g;
    if (g < e.size() && degree(e) + i <= cap_) {
        Exps rest = e;
        rest[g] -= 1;
        Exps unit(e.size(), 0);
        unit[g] = 1;
        const int dg = gens_[g].degree;
        for (int j = 0; j <= std::min(i, dg); ++j) {
            Poly sg;
            if (j == 0) {
                sg = monomial(unit);
            } else if (j == dg) {
                Exps sqr(e.size(), 0);
                sqr[g] = 2;
                sg = monomial(sqr);
            } else {
                auto it = gen_sq_.find({g, j});
                if (it == gen_sq_.end())
                    throw ModelError("Sq^" + std::to_string(j) + " " + gens_[g].name + " is not specified in " + name_);
                sg = it->second;
            }
            if (sg.empty())
                continue;
            const Poly tail = sq(i - j, rest);
            for (const auto& [x, cx] : multiply(sg, tail))
                add_term(out, x, cx);
        }
    }
    out = reduce_mod2(out);
    sq_cache_[key] = out;
    return out;
}

Poly RingModel::parse(const std::string& expr) const
{
    Poly one;
    one[Exps(gens_.size(), 0)] = 1;
    auto lookup = [&](const std::string& name) -> std::optional<Poly> {
        if (auto it = aliases_.find(name); it != aliases_.end())
            return it->second;
        if (auto g = generator_index(name)) {
            Exps e(gens_.size(), 0);
            e[*g] = 1;
            Poly p;
            p[e] = 1;
            return p;
        }
        return std::nullopt;
    };
    auto mul = [&](const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                Exps e(gens_.size());
                for (std::size_t g = 0; g < e.size(); ++g)
                    e[g] = ea[g] + eb[g];
                if (allowed(e) || degree(e) > cap_)
                    add_term(out, e, ca * cb);
            }
        return out;
    };
    Poly p = ExprParser(expr, lookup, mul, one).run();
    // drop what the relations kill
    Poly out;
    for (const auto& [e, c] : p)
        if (allowed(e))
            add_term(out, e, c);
        else if (degree(e) > cap_)
            throw ModelError("'" + expr + "' exceeds the degree cap of " + name_);
    return integral_ ? out : reduce_mod2(out);
}

BitVector RingModel::vector(const Poly& p, int d) const
{
    const auto& b = basis(d);
    BitVector v(b.size());
    for (const auto& [e, c] : p) {
        if (c % 2 == 0)
            continue;
        auto it = std::find(b.begin(), b.end(), e);
        if (it == b.end())
            throw ModelError("polynomial is not homogeneous of degree " + std::to_string(d));
        v.flip(static_cast<std::size_t>(it - b.begin()));
    }
    return v;
}

namespace {

int excess(const std::vector<int>& j)
{
    if (j.empty())
        return 0;
    int e = j[0];
    for (std::size_t i = 1; i < j.size(); ++i)
        e -= j[i];
    return e;
}

void admissible_sequences(int max_degree, int max_first, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    out.push_back(cur);
    for (int a = 1; a <= max_first; ++a) {
        int used = a;
        for (int x : cur)
            used += x;
        if (used > max_degree)
            break;
        // prepend keeps admissibility when a >= 2 * current first
        if (!cur.empty() && a < 2 * cur.front())
            continue;
        cur.insert(cur.begin(), a);
        admissible_sequences(max_degree, max_degree, cur, out);
        cur.erase(cur.begin());
    }
}

}  // namespace

RingModel kz4(int cap)
{
    if (cap > 14)
        throw ModelError("the K(Z,4) model is only valid through degree 14, got cap " + std::to_string(cap));
    std::vector<std::vector<int>> seqs;
    std::vector<int> cur;
    admissible_sequences(cap - 4, cap, cur, seqs);
    std::vector<std::vector<int>> gens_seq;
    for (const auto& s : seqs)
        if (excess(s) < 4 && (s.empty() || s.back() != 1))
            gens_seq.push_back(s);
    std::sort(gens_seq.begin(), gens_seq.end(), [](const auto& a, const auto& b) {
        int da = 0, db = 0;
        for (int x : a)
            da += x;
        for (int x : b)
            db += x;
        return da != db ? da < db : a < b;
    });
    const std::map<std::vector<int>, std::string> names = {{{}, "D"},      {{2}, "F"},    {{3}, "G"},
                                                           {{4, 2}, "J"},  {{5, 2}, "K"}, {{6, 3}, "L"}};
    std::vector<Generator> gens;
    std::map<std::vector<int>, std::size_t> index;
    for (const auto& s : gens_seq) {
        int d = 4;
        for (int x : s)
            d += x;
        auto it = names.find(s);
        std::string nm = it != names.end() ? it->second : steenrod::word_to_string(s);
        index[s] = gens.size();
        gens.push_back({nm, d, 0});
    }
    RingModel r("kz4", gens, cap, false);
    const std::size_t ng = gens.size();

    // Sq^K of the fundamental class for admissible K
    std::function<Poly(const std::vector<int>&)> eval = [&](const std::vector<int>& k) -> Poly {
        if (k.empty())
            return r.monomial([&] {
                Exps e(ng, 0);
                e[index.at({})] = 1;
                return e;
            }());
        const int ex = excess(k);
        if (ex > 4)
            return {};
        if (ex == 4) {
            const Poly tail = eval(std::vector<int>(k.begin() + 1, k.end()));
            Poly sq;
            for (const auto& [e, c] : tail) {
                Exps e2 = e;
                for (auto& x : e2)
                    x *= 2;
                if (c % 2)
                    for (const auto& [m, cm] : r.monomial(e2))
                        sq[m] = (sq[m] + cm) % 2;
            }
            return r.reduce_mod2(sq);
        }
        if (k.back() == 1)
            return {};
        auto it = index.find(k);
        if (it == index.end())
            return {};  // above the cap
        Exps e(ng, 0);
        e[it->second] = 1;
        return r.monomial(e);
    };
    for (const auto& s : gens_seq) {
        const std::size_t g = index.at(s);
        for (int i = 1; i < gens[g].degree; ++i) {
            if (gens[g].degree + i > cap)
                break;
            std::vector<int> w{i};
            w.insert(w.end(), s.begin(), s.end());
            Poly p;
            for (const auto& k : steenrod::admissible_form(w))
                for (const auto& [m, c] : eval(k))
                    p[m] = (p[m] + c) % 2;
            r.set_generator_square(g, i, r.reduce_mod2(p));
        }
    }
    Poly c;
    {
        Exps e(ng, 0);
        e[index.at({})] = 1;
        c[e] = 1;
    }
    r.add_alias("c", c);
    r.add_alias("tau", c);
    return r;
}

RingModel bz2(int cap)
{
    RingModel r("bz2", {{"x", 1, 0}}, cap, false);
    return r;
}

RingModel witness_ring(const std::string& name)
{
    if (name == "hp2") {
        RingModel r("hp2", {{"x", 4, 3}}, 8, true);
        r.set_fundamental({2});
        return r;
    }
    if (name == "hp2xs4") {
        RingModel r("hp2xs4", {{"x", 4, 3}, {"y", 4, 2}}, 12, true);
        r.set_fundamental({2, 1});
        return r;
    }
    if (name == "s4") {
        RingModel r("s4", {{"y", 4, 2}}, 4, true);
        r.set_fundamental({1});
        return r;
    }
    throw ModelError("unknown witness ring '" + name + "'");
}

long long char_number(const RingModel& ring, const std::string& expr, const std::map<std::string, std::string>& classes)
{
    if (!ring.fundamental())
        throw ModelError(ring.name() + " has no fundamental class");
    RingModel r = ring;
    for (const auto& [name, def] : classes)
        r.add_alias(name, r.parse(def));
    const Poly p = r.parse(expr);
    const int top = r.degree(*r.fundamental());
    long long value = 0;
    for (const auto& [e, c] : p) {
        if (r.degree(e) != top)
            throw ModelError("'" + expr + "' is not of top degree " + std::to_string(top));
        if (e == *r.fundamental())
            value += c;
    }
    return value;
}

WreathModel::WreathModel(std::shared_ptr<const RingModel> h, int cap) : h_(std::move(h)), cap_(cap)
{
    if (h_->integral())
        throw ModelError("wreath models need an F2 base");
    if (cap_ > h_->cap())
        throw ModelError("wreath cap exceeds the base model cap");
    basis_.resize(cap_ + 1);
    fib_index_.resize(cap_ + 1);
    diag_index_.resize(cap_ + 1);
    restriction_.resize(cap_ + 1);
    for (int n = 0; n <= cap_; ++n) {
        for (int dc = 0; 2 * dc <= n; ++dc)
            for (const auto& c : h_->basis(dc))
                basis_[n].push_back({Kind::Diag, c, {}, n - 2 * dc});
        for (int da = 0; 2 * da <= n; ++da) {
            const auto& A = h_->basis(da);
            const auto& B = h_->basis(n - da);
            for (std::size_t i = 0; i < A.size(); ++i)
                for (std::size_t j = (2 * da == n ? i + 1 : 0); j < B.size(); ++j)
                    basis_[n].push_back({Kind::Norm, A[i], B[j], 0});
        }
        for (int da = 0; da <= n; ++da)
            for (const auto& a : h_->basis(da))
                for (const auto& b : h_->basis(n - da))
                    fib_index_[n].emplace(std::make_pair(a, b), fib_index_[n].size());
        for (int dc = 0; dc <= n; ++dc)
            for (const auto& c : h_->basis(dc))
                diag_index_[n].emplace(std::make_pair(n - dc, c), diag_index_[n].size());
        std::vector<BitVector> cols;
        for (const auto& e : basis_[n])
            cols.push_back(restrict_vector(n, i1(e), i2(e)));
        restriction_[n] = F2Matrix::from_columns(fib_index_[n].size() + diag_index_[n].size(), cols);
        if (restriction_[n].rank() != basis_[n].size())
            throw ModelError("restriction to K x K and Z/2 x K is not injective in degree " + std::to_string(n));
    }

    // Steenrod squares: act on the images, then solve back.
    for (int n = 0; n <= cap_; ++n)
        for (int i = 1; n + i <= cap_; ++i) {
            const int t = n + i;
            F2Matrix m(basis_[t].size(), basis_[n].size());
            for (std::size_t col = 0; col < basis_[n].size(); ++col) {
                const auto& e = basis_[n][col];
                std::map<std::pair<Exps, Exps>, int> fib;
                for (const auto& [ab, c] : i1(e)) {
                    if (!c)
                        continue;
                    for (int j = 0; j <= i; ++j) {
                        const Poly sa = h_->sq(j, ab.first);
                        if (sa.empty())
                            continue;
                        const Poly sb = h_->sq(i - j, ab.second);
                        for (const auto& [x, cx] : sa)
                            for (const auto& [y, cy] : sb)
                                if ((cx * cy) % 2)
                                    fib[{x, y}] ^= 1;
                    }
                }
                std::map<std::pair<int, Exps>, int> diag;
                for (const auto& [kc, c] : i2(e)) {
                    if (!c)
                        continue;
                    const int k = kc.first;
                    for (int j = 0; j <= i; ++j) {
                        if (!steenrod::binom2(k, j))
                            continue;
                        for (const auto& [y, cy] : h_->sq(i - j, kc.second))
                            if (cy % 2)
                                diag[{k + j, y}] ^= 1;
                    }
                }
                const auto sol = solve(t, restrict_vector(t, fib, diag),
                                       "Sq^" + std::to_string(i) + " " + element_name(e));
                for (auto r : sol.v.support())
                    m.set(r, col);
            }
            sq_[{i, n}] = m;
        }
}

std::map<std::pair<Exps, Exps>, int> WreathModel::i1(const Element& e) const
{
    std::map<std::pair<Exps, Exps>, int> out;
    if (e.kind == Kind::Diag) {
        if (e.k == 0)
            out[{e.a, e.a}] ^= 1;
    } else {
        out[{e.a, e.b}] ^= 1;
        out[{e.b, e.a}] ^= 1;
    }
    return out;
}

std::map<std::pair<int, Exps>, int> WreathModel::i2(const Element& e) const
{
    std::map<std::pair<int, Exps>, int> out;
    if (e.kind == Kind::Norm)
        return out;
    const int dc = h_->degree(e.a);
    for (int i = 0; i <= dc; ++i)
        for (const auto& [m, c] : h_->sq(i, e.a))
            if (c % 2)
                out[{dc - i + e.k, m}] ^= 1;
    return out;
}

BitVector WreathModel::restrict_vector(int d, const std::map<std::pair<Exps, Exps>, int>& fib,
                                       const std::map<std::pair<int, Exps>, int>& diag) const
{
    const std::size_t nf = fib_index_[d].size();
    BitVector v(nf + diag_index_[d].size());
    for (const auto& [k, c] : fib)
        if (c & 1)
            v.flip(fib_index_[d].at(k));
    for (const auto& [k, c] : diag)
        if (c & 1)
            v.flip(nf + diag_index_[d].at(k));
    return v;
}

ModuleVector WreathModel::solve(int d, const BitVector& image, const std::string& what) const
{
    auto x = f2::solve(restriction_[d], image);
    if (!x)
        throw ModelError("detection solve failed for " + what + " in degree " + std::to_string(d));
    return {d, *x};
}

const F2Matrix& WreathModel::sq(int i, int d) const
{
    auto it = sq_.find({i, d});
    if (it == sq_.end())
        throw ModelError("Sq^" + std::to_string(i) + " from degree " + std::to_string(d) + " is outside the cap");
    return it->second;
}

std::string WreathModel::element_name(const Element& e) const
{
    if (e.kind == Kind::Norm)
        return "N(" + h_->monomial_name(e.b) + "," + h_->monomial_name(e.a) + ")";
    std::string s;
    if (h_->degree(e.a) > 0)
        s = "P(" + h_->monomial_name(e.a) + ")";
    if (e.k == 1)
        s += "x";
    else if (e.k > 1)
        s += "x^" + std::to_string(e.k);
    return s.empty() ? "1" : s;
}

F2Matrix WreathModel::multiplication(const ModuleVector& a, int d) const
{
    const int t = a.degree + d;
    F2Matrix m(dim(t), dim(d));
    if (t > cap_)
        return m;
    std::map<std::pair<Exps, Exps>, int> fa;
    std::map<std::pair<int, Exps>, int> da;
    for (auto idx : a.v.support()) {
        for (const auto& [k, c] : i1(basis_[a.degree][idx]))
            fa[k] ^= c;
        for (const auto& [k, c] : i2(basis_[a.degree][idx]))
            da[k] ^= c;
    }
    for (std::size_t col = 0; col < basis_[d].size(); ++col) {
        const auto& e = basis_[d][col];
        std::map<std::pair<Exps, Exps>, int> fib;
        for (const auto& [x, cx] : fa) {
            if (!cx)
                continue;
            for (const auto& [y, cy] : i1(e)) {
                if (!cy)
                    continue;
                const Poly p = h_->multiply(h_->monomial(x.first), h_->monomial(y.first));
                const Poly q = h_->multiply(h_->monomial(x.second), h_->monomial(y.second));
                for (const auto& [u, cu] : p)
                    for (const auto& [v, cv] : q)
                        if ((cu * cv) % 2)
                            fib[{u, v}] ^= 1;
            }
        }
        std::map<std::pair<int, Exps>, int> diag;
        for (const auto& [x, cx] : da) {
            if (!cx)
                continue;
            for (const auto& [y, cy] : i2(e)) {
                if (!cy)
                    continue;
                for (const auto& [u, cu] : h_->multiply(h_->monomial(x.second), h_->monomial(y.second)))
                    if (cu % 2)
                        diag[{x.first + y.first, u}] ^= 1;
            }
        }
        const auto sol = solve(t, restrict_vector(t, fib, diag), "product with " + element_name(e));
        for (auto r : sol.v.support())
            m.set(r, col);
    }
    return m;
}

ModuleVector WreathModel::parse(const std::string& expr) const
{
    // exact basis name
    for (int d = 0; d <= cap_; ++d)
        for (std::size_t i = 0; i < basis_[d].size(); ++i)
            if (element_name(basis_[d][i]) == expr)
                return {d, BitVector::unit(basis_[d].size(), i)};

    // polynomial in two copies of the base generators and x
    const auto& hg = h_->generators();
    std::vector<Generator> gens;
    for (int copy = 1; copy <= 2; ++copy)
        for (const auto& g : hg)
            gens.push_back({g.name + std::to_string(copy), g.degree, 0});
    gens.push_back({"x", 1, 0});
    RingModel big("wreath-expr", gens, cap_, false);
    const std::size_t ng = hg.size();
    for (int copy = 1; copy <= 2; ++copy) {
        Exps e(gens.size(), 0);
        e[(copy - 1) * ng + 0] = 1;
        Poly p;
        p[e] = 1;
        big.add_alias("c" + std::to_string(copy), p);
    }
    const Poly p = big.parse(expr);
    if (p.empty())
        return {4, BitVector(dim(4))};
    int d = -1;
    std::map<std::pair<Exps, Exps>, int> fib;
    std::map<std::pair<int, Exps>, int> diag;
    for (const auto& [e, c] : p) {
        if (c % 2 == 0)
            continue;
        const int de = big.degree(e);
        if (d >= 0 && de != d)
            throw ModelError("'" + expr + "' is not homogeneous");
        d = de;
        Exps a(e.begin(), e.begin() + ng);
        Exps b(e.begin() + ng, e.begin() + 2 * ng);
        const int k = e.back();
        if (k > 0) {
            if (std::any_of(a.begin(), a.end(), [](int v) { return v; }) ||
                std::any_of(b.begin(), b.end(), [](int v) { return v; }))
                throw ModelError("'" + expr + "' mixes x with base classes; name the basis element instead");
            for (const auto& [kk, cc] : i2({Kind::Diag, Exps(ng, 0), {}, k}))
                diag[kk] ^= cc;
            continue;
        }
        fib[{a, b}] ^= 1;
    }
    // invariant classes without x: symmetric pairs are norms, diagonal terms are P(c)
    ModuleVector out{d, BitVector(dim(d))};
    std::map<std::pair<Exps, Exps>, int> seen;
    for (const auto& [ab, c] : fib) {
        if (!c)
            continue;
        if (ab.first == ab.second) {
            for (std::size_t i = 0; i < basis_[d].size(); ++i)
                if (basis_[d][i].kind == Kind::Diag && basis_[d][i].k == 0 && basis_[d][i].a == ab.first)
                    out.v.flip(i);
            continue;
        }
        auto sw = std::make_pair(ab.second, ab.first);
        auto it = fib.find(sw);
        if (it == fib.end() || !it->second)
            throw ModelError("'" + expr + "' is not invariant under the swap");
        if (seen.count(sw))
            continue;
        seen[ab] = 1;
        for (std::size_t i = 0; i < basis_[d].size(); ++i) {
            const auto& el = basis_[d][i];
            if (el.kind == Kind::Norm &&
                ((el.a == ab.first && el.b == ab.second) || (el.a == ab.second && el.b == ab.first)))
                out.v.flip(i);
        }
    }
    if (!diag.empty()) {
        BitVector img = restrict_vector(d, {}, diag);
        out.v ^= solve(d, img, expr).v;
    }
    return out;
}

GradedModule to_module(const RingModel& r)
{
    GradedModule m("H(" + r.name() + ")", 2);
    for (int d = 0; d <= r.cap(); ++d)
        for (const auto& e : r.basis(d)) {
            const auto nm = r.monomial_name(e);
            m.add_class(nm == "1" ? "U" : "U" + nm, d);
        }
    for (int i = 0; i <= 2; ++i)
        for (int d = 0; d + (1 << i) <= r.cap(); ++d) {
            F2Matrix a(m.dim(d + (1 << i)), m.dim(d));
            const auto& b = r.basis(d);
            for (std::size_t c = 0; c < b.size(); ++c) {
                const auto v = r.vector(r.sq(1 << i, b[c]), d + (1 << i));
                for (auto row : v.support())
                    a.set(row, c);
            }
            m.set_action(i, d, a);
        }
    return m;
}

GradedModule to_module(const WreathModel& w)
{
    GradedModule m("H(wreath-" + w.base().name() + ")", 2);
    for (int d = 0; d <= w.cap(); ++d)
        for (const auto& e : w.basis(d)) {
            const auto nm = w.element_name(e);
            m.add_class(nm == "1" ? "U" : "U" + nm, d);
        }
    for (int i = 0; i <= 2; ++i)
        for (int d = 0; d + (1 << i) <= w.cap(); ++d)
            m.set_action(i, d, w.sq(1 << i, d));
    return m;
}

GradedModule twist_with(const GradedModule& untwisted, const std::map<int, F2Matrix>& mu_mult)
{
    GradedModule m = untwisted;
    for (const auto& [d, mat] : mu_mult) {
        if (m.dim(d) == 0)
            continue;
        m.set_action(2, d, m.action(2, d) + mat);
    }
    return m;
}

namespace {

std::string twisted_name(const std::string& base, const std::string& mu)
{
    return "T(" + base + ";" + mu + ")";
}

std::string sanitize(std::string s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c == '+' ? '&' : c;
    return out;
}

}  // namespace

GradedModule twist(const RingModel& r, const std::string& mu)
{
    const Poly p = r.parse(mu);
    for (const auto& [e, c] : p)
        if (r.degree(e) != 4)
            throw ModelError("twist class '" + mu + "' is not of degree 4");
    std::map<int, F2Matrix> mult;
    for (int d = 0; d + 4 <= r.cap(); ++d) {
        const auto& b = r.basis(d);
        F2Matrix a(r.basis(d + 4).size(), b.size());
        for (std::size_t c = 0; c < b.size(); ++c) {
            const auto v = r.vector(r.multiply(p, r.monomial(b[c])), d + 4);
            for (auto row : v.support())
                a.set(row, c);
        }
        mult[d] = a;
    }
    auto m = twist_with(to_module(r), mult);
    m.set_name(twisted_name(r.name(), sanitize(mu)));
    return m;
}

GradedModule twist(const WreathModel& w, const std::string& mu)
{
    const auto v = w.parse(mu);
    if (v.degree != 4)
        throw ModelError("twist class '" + mu + "' is not of degree 4");
    std::map<int, F2Matrix> mult;
    for (int d = 0; d + 4 <= w.cap(); ++d)
        mult[d] = w.multiplication(v, d);
    auto m = twist_with(to_module(w), mult);
    m.set_name(twisted_name("wreath-" + w.base().name(), sanitize(mu)));
    return m;
}

GradedModule NamedModel::module() const
{
    return wreath ? to_module(*wreath) : to_module(*ring);
}

GradedModule NamedModel::twisted(const std::string& mu) const
{
    return wreath ? twist(*wreath, mu) : twist(*ring, mu);
}

NamedModel named_model(const std::string& name, int cap)
{
    NamedModel out;
    if (name == "kz4" || name == "he8") {
        out.ring = std::make_shared<RingModel>(kz4(cap));
    } else if (name == "bz2") {
        out.ring = std::make_shared<RingModel>(bz2(cap));
    } else if (name == "wreath-kz4") {
        auto h = std::make_shared<RingModel>(kz4(cap));
        out.ring = h;
        out.wreath = std::make_shared<WreathModel>(h, cap);
    } else {
        throw ModelError("unknown model '" + name + "' (kz4, he8, bz2, wreath-kz4)");
    }
    return out;
}

}  // namespace tsb::cohomology
