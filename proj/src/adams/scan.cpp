#include "tsb/adams/scan.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tsb::adams {

DiffSystem::DiffSystem(const Page& page, int r, bool h_linear) : page_(&page), r_(r)
{
    for (const auto& [s, t] : page.support()) {
        if (!page.reliable(s, t))
            continue;
        const auto [ts, tt] = page.target(s, t, r);
        if (ts > page.window().s_max || !page.reliable(ts, tt) || page.dim(ts, tt) == 0)
            continue;
        Block b{{s, t}, {ts, tt}, page.dim(ts, tt), page.dim(s, t), nvars_};
        nvars_ += b.rows * b.cols;
        blocks_.push_back(b);
    }
    if (!h_linear)
        return;
    for (const auto& [s, t] : page.support()) {
        if (!page.reliable(s, t))
            continue;
        const auto tgt = page.target(s, t, r);
        // unknown d_r: the target leaves the window
        if (tgt.first > page.window().s_max || !page.reliable(tgt.first, tgt.second))
            continue;
        const Block* b = block({s, t});
        for (int i = 0; i <= 2; ++i) {
            const auto hs = page.h(i, s, t);
            if (!hs)
                continue;
            const Bidegree src2{s + 1, t + (1 << i)};
            const auto tgt2 = page.target(src2.first, src2.second, r);
            if (!page.reliable(tgt2.first, tgt2.second))
                continue;
            // past s_max d_r(h_i x) is unknown, but still zero when h_i x = 0
            const bool unknown2 = tgt2.first > page.window().s_max;
            const Block* b2 = block(src2);
            std::optional<F2Matrix> ht;
            if (b) {
                ht = page.h(i, tgt.first, tgt.second);
                if (!ht)
                    continue;
            }
            const std::size_t rows2 = page.dim(tgt2.first, tgt2.second);
            const std::size_t cols = page.dim(s, t);
            const std::size_t mid = page.dim(src2.first, src2.second);
            for (std::size_t j = 0; j < cols; ++j) {
                if (unknown2 && !hs->column(j).is_zero())
                    continue;
                for (std::size_t k = 0; k < rows2; ++k) {
                    Equation e{BitVector(nvars_), false, -1};
                    if (b2)
                        for (std::size_t l = 0; l < mid; ++l)
                            if (hs->get(l, j))
                                e.lhs.flip(b2->offset + k * b2->cols + l);
                    if (b)
                        for (std::size_t m = 0; m < b->rows; ++m)
                            if (ht->get(k, m))
                                e.lhs.flip(b->offset + m * b->cols + j);
                    if (!e.lhs.is_zero())
                        eqs_.push_back(std::move(e));
                }
            }
        }
    }
}

const DiffSystem::Block* DiffSystem::block(const Bidegree& source) const
{
    for (const auto& b : blocks_)
        if (b.source == source)
            return &b;
    return nullptr;
}

void DiffSystem::add_value(const Bidegree& source, const BitVector& x, const BitVector& y, int tag)
{
    const Block* b = block(source);
    if (!b) {
        if (!y.is_zero()) {
            const auto tgt = page_->target(source.first, source.second, r_);
            if (tgt.first <= page_->window().s_max && page_->reliable(tgt.first, tgt.second))
                eqs_.push_back({BitVector(nvars_), true, tag});
        }
        return;
    }
    for (std::size_t m = 0; m < b->rows; ++m) {
        Equation e{BitVector(nvars_), m < y.size() && y.get(m), tag};
        for (auto j : x.support())
            e.lhs.flip(b->offset + m * b->cols + j);
        eqs_.push_back(std::move(e));
    }
}

void DiffSystem::add_zero(const Bidegree& source, int tag)
{
    const Block* b = block(source);
    if (!b)
        return;
    for (std::size_t j = 0; j < b->cols; ++j)
        add_value(source, BitVector::unit(b->cols, j), BitVector(b->rows), tag);
}

DiffSystem::Solution DiffSystem::solve_with(const std::vector<bool>& keep) const
{
    std::vector<const Equation*> use;
    for (std::size_t k = 0; k < eqs_.size(); ++k)
        if (keep[k])
            use.push_back(&eqs_[k]);
    Solution out;
    if (nvars_ == 0) {
        out.consistent = std::none_of(use.begin(), use.end(), [](const Equation* e) { return e->rhs; });
        out.particular = BitVector(0);
        return out;
    }
    F2Matrix a(use.size(), nvars_);
    BitVector b(use.size());
    for (std::size_t k = 0; k < use.size(); ++k) {
        a.row(k) = use[k]->lhs;
        b.set(k, use[k]->rhs);
    }
    const auto x = f2::solve(a, b);
    if (!x)
        return out;
    out.consistent = true;
    out.particular = *x;
    out.null = f2::kernel_basis(a);
    return out;
}

DiffSystem::Solution DiffSystem::solve() const { return solve_with(std::vector<bool>(eqs_.size(), true)); }

std::vector<int> DiffSystem::conflict() const
{
    std::vector<bool> keep(eqs_.size(), true);
    if (solve_with(keep).consistent)
        return {};
    std::set<int> tags;
    for (const auto& e : eqs_)
        if (e.tag >= 0)
            tags.insert(e.tag);
    std::vector<int> out;
    for (int tag : tags) {
        std::vector<bool> trial = keep;
        for (std::size_t k = 0; k < eqs_.size(); ++k)
            if (eqs_[k].tag == tag)
                trial[k] = false;
        if (!solve_with(trial).consistent)
            keep = trial;
        else
            out.push_back(tag);
    }
    return out;
}

F2Matrix DiffSystem::matrix(const BitVector& assignment, const Bidegree& source) const
{
    const Block* b = block(source);
    if (!b)
        return F2Matrix(page_->dim(page_->target(source.first, source.second, r_).first,
                                   page_->target(source.first, source.second, r_).second),
                        page_->dim(source.first, source.second));
    F2Matrix m(b->rows, b->cols);
    for (std::size_t i = 0; i < b->rows; ++i)
        for (std::size_t j = 0; j < b->cols; ++j)
            if (assignment.get(b->offset + i * b->cols + j))
                m.set(i, j);
    return m;
}

BitVector DiffSystem::project(const BitVector& assignment, const Bidegree& source) const
{
    const Block* b = block(source);
    if (!b)
        return BitVector(0);
    return assignment.slice(b->offset, b->offset + b->rows * b->cols);
}

std::vector<BitVector> enumerate_affine(const BitVector& p, const std::vector<BitVector>& basis, std::size_t max_dim)
{
    // reduce to an independent spanning set first
    f2::EchelonBasis eb(p.size());
    std::vector<BitVector> ind;
    for (const auto& v : basis)
        if (eb.insert(v))
            ind.push_back(v);
    if (ind.size() > max_dim)
        throw AdamsError("affine space of dimension " + std::to_string(ind.size()) + " is too large to enumerate");
    std::vector<BitVector> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << ind.size()); ++mask) {
        BitVector v = p;
        for (std::size_t k = 0; k < ind.size(); ++k)
            if (mask >> k & 1)
                v ^= ind[k];
        out.push_back(std::move(v));
    }
    return out;
}

std::string ScanEntry::to_string() const
{
    std::ostringstream os;
    os << "d" << r << ": (" << source.first << "," << source.second << ") -> (" << target.first << ","
       << target.second << ") stem " << stem();
    for (const auto& c : candidates) {
        if (c.values.empty())
            continue;
        os << "; " << c.source_name << " -> {";
        for (std::size_t k = 0; k < c.value_names.size(); ++k)
            os << (k ? ", " : "") << c.value_names[k];
        os << "}";
    }
    if (!conditions.empty()) {
        os << "; if vanishing:";
        for (const auto& [rr, b] : conditions)
            os << " d" << rr << "(" << b.first << "," << b.second << ")";
    }
    return os.str();
}

std::vector<ScanEntry> ambiguity_scan(const Page& page, const std::map<std::string, std::string>& names)
{
    std::vector<ScanEntry> out;
    for (int r = page.r(); r <= page.window().s_max; ++r) {
        DiffSystem sys(page, r);
        const auto sol = sys.solve();
        if (!sol.consistent)
            throw InvariantBreach("homogeneous system inconsistent");
        for (const auto& b : sys.blocks()) {
            std::vector<BitVector> proj;
            for (const auto& n : sol.null) {
                auto p = sys.project(n, b.source);
                if (!p.is_zero())
                    proj.push_back(std::move(p));
            }
            if (proj.empty())
                continue;
            ScanEntry e;
            e.r = r;
            e.source = b.source;
            e.target = b.target;
            const Cell& sc = page.cell(b.source.first, b.source.second);
            const Cell& tc = page.cell(b.target.first, b.target.second);
            for (std::size_t j = 0; j < b.cols; ++j) {
                ScanEntry::Candidate c;
                c.source = sc.reps()[j];
                c.source_name = vector_name(page.e2(), b.source.first, b.source.second, c.source, names);
                std::vector<BitVector> col;
                for (const auto& p : proj) {
                    BitVector v(b.rows);
                    for (std::size_t i = 0; i < b.rows; ++i)
                        if (p.get(i * b.cols + j))
                            v.set(i);
                    col.push_back(v);
                }
                std::set<std::vector<std::size_t>> seen;
                for (const auto& v : enumerate_affine(BitVector(b.rows), col)) {
                    if (v.is_zero() || !seen.insert(v.support()).second)
                        continue;
                    const BitVector lifted = tc.lift(v);
                    c.values.push_back(lifted);
                    c.value_names.push_back(vector_name(page.e2(), b.target.first, b.target.second, lifted, names));
                }
                e.candidates.push_back(std::move(c));
            }
            for (const auto& prev : out)
                if (prev.r < r && (prev.source == e.source || prev.target == e.target))
                    e.conditions.emplace_back(prev.r, prev.source);
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace tsb::adams
