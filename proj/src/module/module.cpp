#include "tsb/module/module.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace tsb::module {

using steenrod::SubAlgebra;

std::string ActionReport::to_string() const
{
    if (ok)
        return "action ok";
    return "relation " + relation + " fails on " + witness + " (degree " + std::to_string(source_degree) + ")";
}

std::size_t GradedModule::add_class(const std::string& name, int degree)
{
    auto& v = basis_[degree];
    if (std::find(v.begin(), v.end(), name) != v.end())
        throw NameError("duplicate class '" + name + "' in degree " + std::to_string(degree));
    v.push_back(name);
    // grow existing action matrices touching this degree
    for (auto& [key, mat] : actions_) {
        const auto [i, d] = key;
        if (d == degree || d + (1 << i) == degree) {
            F2Matrix grown(dim(d + (1 << i)), dim(d));
            for (std::size_t r = 0; r < mat.rows(); ++r)
                for (auto c : mat.row(r).support())
                    grown.set(r, c);
            mat = grown;
        }
    }
    validated_ = false;
    return v.size() - 1;
}

std::size_t GradedModule::dim(int d) const
{
    auto it = basis_.find(d);
    return it == basis_.end() ? 0 : it->second.size();
}

std::size_t GradedModule::total_dim() const
{
    std::size_t n = 0;
    for (const auto& [d, v] : basis_)
        n += v.size();
    return n;
}

int GradedModule::min_degree() const
{
    for (const auto& [d, v] : basis_)
        if (!v.empty())
            return d;
    return 0;
}

int GradedModule::max_degree() const
{
    for (auto it = basis_.rbegin(); it != basis_.rend(); ++it)
        if (!it->second.empty())
            return it->first;
    return -1;
}

const std::vector<std::string>& GradedModule::names(int d) const
{
    static const std::vector<std::string> empty;
    auto it = basis_.find(d);
    return it == basis_.end() ? empty : it->second;
}

std::optional<std::size_t> GradedModule::find(const std::string& name, int d) const
{
    const auto& v = names(d);
    auto it = std::find(v.begin(), v.end(), name);
    if (it == v.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}

std::vector<std::pair<int, std::size_t>> GradedModule::lookup(const std::string& name) const
{
    std::vector<std::pair<int, std::size_t>> out;
    for (const auto& [d, v] : basis_)
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] == name)
                out.emplace_back(d, i);
    return out;
}

std::vector<int> GradedModule::degrees() const
{
    std::vector<int> out;
    for (const auto& [d, v] : basis_)
        if (!v.empty())
            out.push_back(d);
    return out;
}

F2Matrix GradedModule::action(int i, int d) const
{
    auto it = actions_.find({i, d});
    if (it != actions_.end())
        return it->second;
    return F2Matrix(dim(d + (1 << i)), dim(d));
}

void GradedModule::set_action(int i, int d, const F2Matrix& m)
{
    if (i < 0 || i > n_)
        throw ModuleError("Sq^" + std::to_string(1 << i) + " is not a generator of A(" + std::to_string(n_) + ")");
    if (m.rows() != dim(d + (1 << i)) || m.cols() != dim(d))
        throw f2::DimensionError("action matrix shape mismatch in degree " + std::to_string(d));
    if (m.is_zero())
        actions_.erase({i, d});
    else
        actions_[{i, d}] = m;
    validated_ = false;
}

void GradedModule::add_action(int i, int d, std::size_t from, std::size_t to)
{
    auto m = action(i, d);
    m.flip(to, from);
    set_action(i, d, m);
}

ModuleVector GradedModule::apply_generator(int i, const ModuleVector& x) const
{
    return {x.degree + (1 << i), action(i, x.degree) * x.v};
}

F2Matrix GradedModule::word_action(const steenrod::Word& w, int d) const
{
    F2Matrix m = F2Matrix::identity(dim(d));
    int cur = d;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        int i = 0;
        while ((1 << i) < *it)
            ++i;
        if ((1 << i) != *it || i > n_)
            throw std::invalid_argument("word factor Sq^" + std::to_string(*it) + " is not a generator");
        m = action(i, cur) * m;
        cur += *it;
    }
    return m;
}

namespace {

// Matrices of every word in the word table of degree k <= kmax, acting on degree d.
std::vector<std::vector<F2Matrix>> word_matrices(const GradedModule& m, const steenrod::WordTable& wt, int d,
                                                 int kmax)
{
    std::vector<std::vector<F2Matrix>> out(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        const auto& td = wt.degrees[k];
        for (std::size_t w = 0; w < td.words.size(); ++w) {
            const auto [g, b] = td.factor[w];
            if (g < 0) {
                out[k].push_back(F2Matrix::identity(m.dim(d)));
                continue;
            }
            const int gd = wt.generators[g];
            const auto& lower = wt.degrees[k - gd];
            const F2Matrix& tail = out[k - gd][lower.basis_words[b]];
            out[k].push_back(m.action(g, d + k - gd) * tail);
        }
    }
    return out;
}

}  // namespace

ActionReport GradedModule::verify_action() const
{
    ActionReport rep;
    const auto& alg = SubAlgebra::get(n_);
    const auto& wt = alg.words();
    const int top = max_degree();
    for (int d : degrees()) {
        const int kmax = std::min(alg.top_degree(), top - d);
        if (kmax < 1)
            continue;
        auto mats = word_matrices(*this, wt, d, kmax);
        for (int k = 1; k <= kmax; ++k) {
            const auto& td = wt.degrees[k];
            for (const auto& rel : td.relations) {
                F2Matrix sum(dim(d + k), dim(d));
                for (auto w : rel.support())
                    sum += mats[k][w];
                if (sum.is_zero())
                    continue;
                rep.ok = false;
                rep.source_degree = d;
                std::string lhs;
                for (auto w : rel.support()) {
                    if (!lhs.empty())
                        lhs += " + ";
                    lhs += steenrod::word_to_string(td.words[w]);
                }
                rep.relation = lhs + " = 0";
                for (std::size_t c = 0; c < sum.cols(); ++c)
                    if (!sum.column(c).is_zero()) {
                        rep.witness = names(d)[c] + "@" + std::to_string(d);
                        break;
                    }
                return rep;
            }
        }
    }
    return rep;
}

const GradedModule& GradedModule::validate()
{
    auto rep = verify_action();
    if (!rep.ok)
        throw AdemViolation(name_ + ": " + rep.to_string());
    validated_ = true;
    return *this;
}

std::string GradedModule::element_string(const ModuleVector& x) const
{
    if (x.v.is_zero())
        return "0";
    std::string s;
    for (auto i : x.v.support()) {
        if (!s.empty())
            s += " + ";
        s += names(x.degree)[i];
    }
    return s;
}

bool GradedModule::operator==(const GradedModule& other) const
{
    if (n_ != other.n_ || degrees() != other.degrees())
        return false;
    for (int d : degrees())
        if (names(d) != other.names(d))
            return false;
    for (int d : degrees())
        for (int i = 0; i <= n_; ++i)
            if (!(action(i, d) == other.action(i, d)))
                return false;
    return true;
}

ActionTable::ActionTable(const GradedModule& m) : m_(&m), alg_(&SubAlgebra::get(m.algebra()))
{
    const auto& wt = alg_->words();
    for (int d : m.degrees()) {
        const int kmax = alg_->top_degree();
        auto mats = word_matrices(m, wt, d, kmax);
        for (int k = 0; k <= kmax; ++k) {
            const auto& td = wt.degrees[k];
            for (std::size_t j = 0; j < alg_->dim(k); ++j) {
                F2Matrix sum(m.dim(d + k), m.dim(d));
                for (std::size_t w = 0; w < td.words.size(); ++w)
                    if (td.section.get(w, j))
                        sum += mats[k][w];
                table_[{alg_->global(k, j), d}] = std::move(sum);
            }
        }
    }
}

const F2Matrix& ActionTable::action(std::size_t beta, int d) const
{
    auto it = table_.find({beta, d});
    if (it != table_.end())
        return it->second;
    throw std::out_of_range("degree " + std::to_string(d) + " is outside the support of " + m_->name());
}

ModuleVector ActionTable::act(const steenrod::SteenrodElement& a, const ModuleVector& x) const
{
    if (a.spec().full || a.spec().n > m_->algebra())
        throw std::invalid_argument("element of " + a.spec().name() + " cannot act on a module over A(" +
                                    std::to_string(m_->algebra()) + ")");
    ModuleVector out{x.degree + a.degree(), BitVector(m_->dim(x.degree + a.degree()))};
    if (m_->dim(x.degree) == 0)
        return out;
    for (const auto& mono : a.terms())
        out.v ^= action(alg_->index(mono), x.degree) * x.v;
    return out;
}

ModuleVector act(const GradedModule& m, const steenrod::SteenrodElement& a, const ModuleVector& x)
{
    if (x.v.size() != m.dim(x.degree))
        throw DegreeError("vector does not match degree " + std::to_string(x.degree));
    ActionTable t(m);
    return t.act(a, x);
}

GradedModule zero_module(int n)
{
    return GradedModule("0", n);
}

GradedModule suspend(const GradedModule& m, int k)
{
    GradedModule out(k == 0 ? m.name() : "S" + std::to_string(k) + m.name(), m.algebra());
    for (int d : m.degrees())
        for (const auto& nm : m.names(d))
            out.add_class(nm, d + k);
    for (int d : m.degrees())
        for (int i = 0; i <= m.algebra(); ++i)
            out.set_action(i, d + k, m.action(i, d));
    return out;
}

GradedModule direct_sum(const GradedModule& a, const GradedModule& b)
{
    if (a.algebra() != b.algebra())
        throw ModuleError("direct sum of modules over different algebras");
    GradedModule out(a.name() + "+" + b.name(), a.algebra());
    std::map<int, std::vector<std::string>> bnames;
    for (int d : a.degrees())
        for (const auto& nm : a.names(d))
            out.add_class(nm, d);
    for (int d : b.degrees())
        for (const auto& nm : b.names(d)) {
            std::string use = nm;
            while (out.find(use, d))
                use += "'";
            out.add_class(use, d);
        }
    std::set<int> degs;
    for (int d : a.degrees())
        degs.insert(d);
    for (int d : b.degrees())
        degs.insert(d);
    for (int d : degs)
        for (int i = 0; i <= a.algebra(); ++i) {
            const auto ma = a.action(i, d);
            const auto mb = b.action(i, d);
            F2Matrix m(out.dim(d + (1 << i)), out.dim(d));
            for (std::size_t r = 0; r < ma.rows(); ++r)
                for (auto c : ma.row(r).support())
                    m.set(r, c);
            for (std::size_t r = 0; r < mb.rows(); ++r)
                for (auto c : mb.row(r).support())
                    m.set(ma.rows() + r, ma.cols() + c);
            out.set_action(i, d, m);
        }
    return out;
}

GradedModule direct_sum(const std::vector<GradedModule>& parts)
{
    if (parts.empty())
        return zero_module(2);
    GradedModule out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        out = direct_sum(out, parts[i]);
    return out;
}

GradedModule truncate_above(const GradedModule& m, int k)
{
    GradedModule out(m.name(), m.algebra());
    for (int d : m.degrees())
        if (d <= k)
            for (const auto& nm : m.names(d))
                out.add_class(nm, d);
    for (int d : out.degrees())
        for (int i = 0; i <= m.algebra(); ++i)
            if (d + (1 << i) <= k)
                out.set_action(i, d, m.action(i, d));
    return out;
}

GradedModule truncate_below(const GradedModule& m, int k)
{
    GradedModule out(m.name(), m.algebra());
    for (int d : m.degrees())
        if (d >= k)
            for (const auto& nm : m.names(d))
                out.add_class(nm, d);
    for (int d : out.degrees())
        for (int i = 0; i <= m.algebra(); ++i)
            out.set_action(i, d, m.action(i, d));
    return out;
}

GradedModule restrict(const GradedModule& m, int k)
{
    if (k > m.algebra() || k < 0)
        throw ModuleError("cannot restrict a module over A(" + std::to_string(m.algebra()) + ") to A(" +
                          std::to_string(k) + ")");
    GradedModule out(m.name(), k);
    for (int d : m.degrees())
        for (const auto& nm : m.names(d))
            out.add_class(nm, d);
    for (int d : m.degrees())
        for (int i = 0; i <= k; ++i)
            out.set_action(i, d, m.action(i, d));
    return out;
}

GradedModule induce(const GradedModule& m, int n)
{
    const int k = m.algebra();
    if (!(k < n && n <= 2))
        throw ModuleError("induction needs k < n <= 2, got k = " + std::to_string(k) + ", n = " + std::to_string(n));
    const auto& alg = SubAlgebra::get(n);
    const int lo = m.min_degree();
    const int hi = m.max_degree() + alg.top_degree();

    // Per degree: the pairs (beta, (c, j)) spanning A(n) (x) M, pairs with
    // higher module degree first so that they are the ones eliminated.
    struct Pair {
        std::size_t beta;
        int c;
        std::size_t j;
    };
    std::map<int, std::vector<Pair>> pairs;
    std::map<int, std::map<std::tuple<std::size_t, int, std::size_t>, std::size_t>> index;
    for (int d = lo; d <= hi; ++d) {
        auto& v = pairs[d];
        const auto mdegs = m.degrees();
        for (auto cit = mdegs.rbegin(); cit != mdegs.rend(); ++cit) {
            const int c = *cit;
            const int e = d - c;
            if (e < 0 || e > alg.top_degree())
                continue;
            for (std::size_t b = 0; b < alg.dim(e); ++b)
                for (std::size_t j = 0; j < m.dim(c); ++j)
                    v.push_back({alg.global(e, b), c, j});
        }
        for (std::size_t p = 0; p < v.size(); ++p)
            index[d][{v[p].beta, v[p].c, v[p].j}] = p;
    }
    auto vec_of = [&](int d, const BitVector& beta_coords, int e, int c, std::size_t j) {
        BitVector out(pairs[d].size());
        for (auto b : beta_coords.support())
            out.flip(index[d].at({alg.global(e, b), c, j}));
        return out;
    };

    std::map<int, f2::EchelonBasis> rel;
    for (int d = lo; d <= hi; ++d) {
        f2::EchelonBasis eb(pairs[d].size());
        for (int i = 0; i <= k; ++i) {
            const int g = 1 << i;
            const std::size_t sqg = alg.index(steenrod::sq(g));
            for (int c : m.degrees()) {
                const int e = d - c - g;
                if (e < 0 || e > alg.top_degree())
                    continue;
                const auto act = m.action(i, c);
                for (std::size_t a = 0; a < alg.dim(e); ++a)
                    for (std::size_t j = 0; j < m.dim(c); ++j) {
                        // (a Sq^g) (x) x_j + a (x) Sq^g x_j
                        BitVector r(pairs[d].size());
                        if (e + g <= alg.top_degree())
                            r ^= vec_of(d, alg.product(alg.global(e, a), sqg), e + g, c, j);
                        for (std::size_t t = 0; t < act.rows(); ++t)
                            if (act.get(t, j))
                                r.flip(index[d].at({alg.global(e, a), c + g, t}));
                        eb.insert(r);
                    }
            }
        }
        rel.emplace(d, std::move(eb));
    }

    GradedModule out(m.name() + "^A(" + std::to_string(n) + ")", n);
    std::map<int, std::vector<std::size_t>> reps;
    std::map<int, std::vector<long>> rep_index;
    for (int d = lo; d <= hi; ++d) {
        const auto& eb = rel.at(d);
        std::vector<bool> piv(pairs[d].size(), false);
        for (auto p : eb.pivots())
            piv[p] = true;
        rep_index[d].assign(pairs[d].size(), -1);
        for (std::size_t p = 0; p < pairs[d].size(); ++p) {
            if (piv[p])
                continue;
            const auto& pr = pairs[d][p];
            const auto& mono = alg.monomial(pr.beta);
            std::string nm = m.names(pr.c)[pr.j];
            if (!mono.empty())
                nm = steenrod::to_string(mono) + "*" + nm;
            rep_index[d][p] = static_cast<long>(reps[d].size());
            reps[d].push_back(p);
            out.add_class(nm, d);
        }
    }
    for (int d = lo; d <= hi; ++d)
        for (int i = 0; i <= n; ++i) {
            const int g = 1 << i;
            if (d + g > hi || out.dim(d) == 0)
                continue;
            const std::size_t sqg = alg.index(steenrod::sq(g));
            F2Matrix mat(out.dim(d + g), out.dim(d));
            for (std::size_t col = 0; col < reps[d].size(); ++col) {
                const auto& pr = pairs[d][reps[d][col]];
                const int e = alg.degree_of(pr.beta);
                if (e + g > alg.top_degree())
                    continue;
                auto v = vec_of(d + g, alg.product(sqg, pr.beta), e + g, pr.c, pr.j);
                v = rel.at(d + g).reduce(v);
                for (auto p : v.support())
                    mat.set(static_cast<std::size_t>(rep_index[d + g][p]), col);
            }
            out.set_action(i, d, mat);
        }
    return out;
}

ModuleMap::ModuleMap(std::shared_ptr<const GradedModule> source, std::shared_ptr<const GradedModule> target,
                     int shift)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift)
{
}

ModuleMap ModuleMap::identity(std::shared_ptr<const GradedModule> m)
{
    ModuleMap f(m, m, 0);
    for (int d : m->degrees())
        f.set_component(d, F2Matrix::identity(m->dim(d)));
    return f;
}

F2Matrix ModuleMap::component(int d) const
{
    auto it = components_.find(d);
    if (it != components_.end())
        return it->second;
    return F2Matrix(target_->dim(d + shift_), source_->dim(d));
}

void ModuleMap::set_component(int d, const F2Matrix& m)
{
    if (m.rows() != target_->dim(d + shift_) || m.cols() != source_->dim(d))
        throw f2::DimensionError("map component shape mismatch in degree " + std::to_string(d));
    components_[d] = m;
}

ModuleVector ModuleMap::apply(const ModuleVector& x) const
{
    return {x.degree + shift_, component(x.degree) * x.v};
}

std::string ModuleMap::check() const
{
    const int n = std::min(source_->algebra(), target_->algebra());
    for (int d : source_->degrees())
        for (int i = 0; i <= n; ++i) {
            const int g = 1 << i;
            const F2Matrix lhs = component(d + g) * source_->action(i, d);
            const F2Matrix rhs = target_->action(i, d + shift_) * component(d);
            if (!(lhs == rhs))
                return "map does not commute with Sq^" + std::to_string(g) + " on degree " + std::to_string(d);
        }
    return {};
}

bool ModuleMap::injective() const
{
    for (int d : source_->degrees())
        if (component(d).rank() != source_->dim(d))
            return false;
    return true;
}

bool ModuleMap::surjective() const
{
    for (int d : target_->degrees())
        if (component(d - shift_).rank() != target_->dim(d))
            return false;
    return true;
}

ModuleMap ModuleMap::compose_after(const ModuleMap& first) const
{
    ModuleMap out(first.source_, target_, first.shift_ + shift_);
    for (int d : first.source_->degrees())
        out.set_component(d, component(d + first.shift_) * first.component(d));
    return out;
}

ModuleMap map_from_generators(std::shared_ptr<const GradedModule> source, std::shared_ptr<const GradedModule> target,
                              const std::vector<std::pair<ModuleVector, ModuleVector>>& images, int shift)
{
    ModuleMap f(source, target, shift);
    const int n = std::min(source->algebra(), target->algebra());
    for (int d : source->degrees()) {
        std::vector<BitVector> scols;
        std::vector<BitVector> tcols;
        for (const auto& [x, y] : images) {
            if (x.degree != d)
                continue;
            if (y.degree != d + shift)
                throw DegreeError("generator image has degree " + std::to_string(y.degree) + ", expected " +
                                  std::to_string(d + shift));
            scols.push_back(x.v);
            tcols.push_back(y.v);
        }
        for (int i = 0; i <= n; ++i) {
            const int c = d - (1 << i);
            if (source->dim(c) == 0)
                continue;
            const F2Matrix sa = source->action(i, c);
            const F2Matrix ta = target->action(i, c + shift) * f.component(c);
            for (std::size_t j = 0; j < source->dim(c); ++j) {
                scols.push_back(sa.column(j));
                tcols.push_back(ta.column(j));
            }
        }
        const F2Matrix S = F2Matrix::from_columns(source->dim(d), scols);
        const F2Matrix T = F2Matrix::from_columns(target->dim(d + shift), tcols);
        if (S.rank() != source->dim(d))
            throw ModuleError("generators do not reach degree " + std::to_string(d) + " of " + source->name());
        // f_d S = T, solved row by row through S^T
        const F2Matrix St = S.transpose();
        F2Matrix comp(target->dim(d + shift), source->dim(d));
        for (std::size_t r = 0; r < T.rows(); ++r) {
            auto x = f2::solve(St, T.row(r));
            if (!x)
                throw ModuleError("no module map with the given generator images (degree " + std::to_string(d) + ")");
            comp.row(r) = *x;
        }
        f.set_component(d, comp);
    }
    auto err = f.check();
    if (!err.empty())
        throw ModuleError(err);
    return f;
}

ModuleMap submodule_from_basis(std::shared_ptr<const GradedModule> m, const std::map<int, std::vector<BitVector>>& basis,
                               const std::string& name)
{
    auto sub = std::make_shared<GradedModule>(name, m->algebra());
    std::map<int, f2::EchelonBasis> ebs;
    for (const auto& [d, vs] : basis) {
        f2::EchelonBasis eb(m->dim(d));
        for (std::size_t k = 0; k < vs.size(); ++k) {
            if (!eb.insert(vs[k]))
                throw ModuleError("submodule basis is dependent in degree " + std::to_string(d));
            std::string nm;
            if (vs[k].popcount() == 1)
                nm = m->names(d)[vs[k].first_set()];
            else
                nm = "v" + std::to_string(d) + "_" + std::to_string(k);
            sub->add_class(nm, d);
        }
        ebs.emplace(d, std::move(eb));
    }
    for (const auto& [d, vs] : basis)
        for (int i = 0; i <= m->algebra(); ++i) {
            const int t = d + (1 << i);
            F2Matrix mat(sub->dim(t), sub->dim(d));
            const F2Matrix a = m->action(i, d);
            for (std::size_t k = 0; k < vs.size(); ++k) {
                const BitVector img = a * vs[k];
                if (img.is_zero())
                    continue;
                auto it = ebs.find(t);
                std::optional<BitVector> combo;
                if (it != ebs.end())
                    combo = it->second.express(img);
                if (!combo)
                    throw ModuleError("span is not closed under Sq^" + std::to_string(1 << i) + " in degree " +
                                      std::to_string(d));
                for (auto r : combo->support())
                    mat.set(r, k);
            }
            sub->set_action(i, d, mat);
        }
    ModuleMap inc(sub, m, 0);
    for (const auto& [d, vs] : basis)
        inc.set_component(d, F2Matrix::from_columns(m->dim(d), vs));
    return inc;
}

namespace {

std::map<int, std::vector<BitVector>> closure(const GradedModule& m, const std::vector<ModuleVector>& gens)
{
    std::map<int, std::vector<BitVector>> basis;
    std::map<int, f2::EchelonBasis> ebs;
    for (const auto& g : gens)
        if (g.v.size() != m.dim(g.degree))
            throw DegreeError("generator vector does not match degree " + std::to_string(g.degree));
    if (m.empty())
        return basis;
    for (int d = m.min_degree(); d <= m.max_degree(); ++d) {
        f2::EchelonBasis eb(m.dim(d));
        std::vector<BitVector> vs;
        auto add = [&](const BitVector& v) {
            if (eb.insert(v))
                vs.push_back(v);
        };
        for (int i = 0; i <= m.algebra(); ++i) {
            auto it = basis.find(d - (1 << i));
            if (it == basis.end())
                continue;
            const F2Matrix a = m.action(i, d - (1 << i));
            for (const auto& v : it->second)
                add(a * v);
        }
        for (const auto& g : gens)
            if (g.degree == d)
                add(g.v);
        if (!vs.empty())
            basis[d] = vs;
        ebs.emplace(d, std::move(eb));
    }
    return basis;
}

}  // namespace

ModuleMap submodule_inclusion(std::shared_ptr<const GradedModule> m, const std::vector<ModuleVector>& generators,
                              const std::string& name)
{
    return submodule_from_basis(m, closure(*m, generators), name);
}

ModuleMap kernel_inclusion(const ModuleMap& f, const std::string& name)
{
    std::map<int, std::vector<BitVector>> basis;
    for (int d : f.source().degrees()) {
        auto ker = f2::kernel_basis(f.component(d));
        if (!ker.empty())
            basis[d] = ker;
    }
    return submodule_from_basis(f.source_ptr(), basis, name);
}

std::string ShortExactSequence::check() const
{
    if (!(i.target() == q.source()))
        throw ModuleError("short exact sequence maps are not composable");
    for (const auto* f : {&i, &q}) {
        auto err = f->check();
        if (!err.empty())
            return err;
    }
    for (int d : i.target().degrees()) {
        const std::size_t ri = i.component(d - i.shift()).rank();
        const std::size_t rq = q.component(d).rank();
        if (ri != i.source().dim(d - i.shift()))
            return "i is not injective in degree " + std::to_string(d);
        if (rq != q.target().dim(d + q.shift()))
            return "q is not surjective in degree " + std::to_string(d);
        if (ri + rq != i.target().dim(d))
            return "image(i) != kernel(q) in degree " + std::to_string(d);
        if (!(q.component(d) * i.component(d - i.shift())).is_zero())
            return "q o i != 0 in degree " + std::to_string(d);
    }
    for (int d : i.source().degrees())
        if (i.target().dim(d + i.shift()) == 0)
            return "i is not injective in degree " + std::to_string(d);
    for (int d : q.target().degrees())
        if (q.source().dim(d - q.shift()) == 0)
            return "q is not surjective in degree " + std::to_string(d);
    return {};
}

std::map<int, std::size_t> DecompositionBlock::dims() const
{
    std::map<int, std::size_t> out;
    for (const auto& [d, vs] : basis)
        out[d] = vs.size();
    return out;
}

GradedModule DecompositionBlock::as_module(const GradedModule& ambient, const std::string& name) const
{
    auto inc = submodule_from_basis(std::make_shared<GradedModule>(ambient), basis, name);
    return inc.source();
}

DecompositionResult verify_decomposition(const GradedModule& m, const std::vector<std::vector<ModuleVector>>& parts)
{
    DecompositionResult res;
    for (const auto& p : parts) {
        DecompositionBlock b;
        b.generators = p;
        b.basis = closure(m, p);
        res.blocks.push_back(std::move(b));
    }
    if (m.empty()) {
        res.ok = true;
        return res;
    }
    for (int d = m.min_degree(); d <= m.max_degree(); ++d) {
        f2::EchelonBasis eb(m.dim(d));
        std::size_t total = 0;
        for (const auto& b : res.blocks) {
            auto it = b.basis.find(d);
            if (it == b.basis.end())
                continue;
            for (const auto& v : it->second) {
                ++total;
                if (!eb.insert(v)) {
                    res.failure_degree = d;
                    res.failure = "blocks are not independent in degree " + std::to_string(d);
                    return res;
                }
            }
        }
        if (total != m.dim(d)) {
            res.failure_degree = d;
            for (std::size_t j = 0; j < m.dim(d); ++j)
                if (!eb.contains(BitVector::unit(m.dim(d), j))) {
                    res.failure = "class " + m.names(d)[j] + "@" + std::to_string(d) + " is not reached";
                    break;
                }
            return res;
        }
    }
    res.ok = true;
    return res;
}

ModuleVector parse_vector(const GradedModule& m, const std::string& text, std::optional<int> expected_degree)
{
    std::vector<std::string> terms;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '+')) {
        auto a = part.find_first_not_of(" \t");
        auto b = part.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw ParseError("empty term in '" + text + "'");
        terms.push_back(part.substr(a, b - a + 1));
    }
    std::optional<int> deg = expected_degree;
    std::vector<std::pair<int, std::size_t>> hits;
    for (const auto& t : terms) {
        if (t == "0")
            continue;
        std::string nm = t;
        std::optional<int> at;
        auto pos = t.rfind('@');
        if (pos != std::string::npos) {
            nm = t.substr(0, pos);
            at = std::stoi(t.substr(pos + 1));
        }
        std::vector<std::pair<int, std::size_t>> found;
        if (at) {
            if (auto idx = m.find(nm, *at))
                found.emplace_back(*at, *idx);
        } else if (deg) {
            if (auto idx = m.find(nm, *deg))
                found.emplace_back(*deg, *idx);
            else
                found = m.lookup(nm);
        } else {
            found = m.lookup(nm);
        }
        if (found.empty())
            throw NameError("unknown class '" + t + "'");
        if (found.size() > 1)
            throw NameError("ambiguous class '" + nm + "'; write " + nm + "@<degree>");
        if (deg && found[0].first != *deg)
            throw DegreeError("class '" + t + "' has degree " + std::to_string(found[0].first) + ", expected " +
                              std::to_string(*deg));
        deg = found[0].first;
        hits.push_back(found[0]);
    }
    if (!deg)
        throw DegreeError("cannot infer the degree of '" + text + "'");
    ModuleVector v{*deg, BitVector(m.dim(*deg))};
    for (const auto& [d, i] : hits)
        v.v.flip(i);
    return v;
}

}  // namespace tsb::module
