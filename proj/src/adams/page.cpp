#include "tsb/adams/page.hpp"

#include <sstream>

namespace tsb::adams {

Cell::Cell(std::size_t ambient, std::vector<BitVector> boundaries, std::vector<BitVector> reps)
    : ambient_(ambient), boundaries_(std::move(boundaries)), reps_(std::move(reps)), bnd_(ambient), all_(ambient)
{
    for (const auto& b : boundaries_) {
        if (!bnd_.insert(b))
            throw InvariantBreach("dependent boundary basis");
        all_.insert(b);
    }
    for (const auto& x : reps_)
        if (!all_.insert(x))
            throw InvariantBreach("dependent cycle representatives");
}

std::optional<BitVector> Cell::coords(const BitVector& v) const
{
    const auto combo = all_.express(v);
    if (!combo)
        return std::nullopt;
    return combo->slice(boundaries_.size(), boundaries_.size() + reps_.size());
}

BitVector Cell::lift(const BitVector& c) const
{
    BitVector out(ambient_);
    for (auto k : c.support())
        out ^= reps_[k];
    return out;
}

Page::Page(std::shared_ptr<const ExtChart> e2, Window w) : e2_(std::move(e2)), w_(w)
{
    w_.s_max = std::min(w_.s_max, e2_->s_max());
    for (const auto& [s, t] : e2_->support()) {
        const std::size_t n = e2_->dim(s, t);
        std::vector<BitVector> reps;
        for (std::size_t k = 0; k < n; ++k)
            reps.push_back(BitVector::unit(n, k));
        cells_.emplace(Bidegree{s, t}, Cell(n, {}, std::move(reps)));
    }
}

bool Page::reliable(int s, int t) const
{
    return s >= 0 && t - s <= w_.stem && e2_->complete(s, t);
}

const Cell& Page::cell(int s, int t) const
{
    static const Cell empty;
    const auto it = cells_.find({s, t});
    return it == cells_.end() ? empty : it->second;
}

std::vector<Bidegree> Page::support() const
{
    std::vector<Bidegree> out;
    for (const auto& [k, c] : cells_)
        if (c.dim())
            out.push_back(k);
    return out;
}

std::optional<F2Matrix> Page::h(int i, int s, int t) const
{
    const int s1 = s + 1;
    const int t1 = t + (1 << i);
    if (!reliable(s1, t1))
        return std::nullopt;
    const Cell& src = cell(s, t);
    const Cell& tgt = cell(s1, t1);
    F2Matrix out(tgt.dim(), src.dim());
    if (src.dim() == 0 || tgt.ambient() == 0)
        return out;
    const F2Matrix m = e2_->h(i, s, t);
    for (std::size_t k = 0; k < src.dim(); ++k) {
        const auto c = tgt.coords(m * src.reps()[k]);
        if (!c)
            throw InvariantBreach("h" + std::to_string(i) + " does not preserve cycles at (" + std::to_string(s) + "," +
                                  std::to_string(t) + ") on page " + std::to_string(r_));
        for (auto row : c->support())
            out.set(row, k);
    }
    return out;
}

Page Page::next(const std::map<Bidegree, F2Matrix>& d) const
{
    // new cycles at sources, new boundaries at targets
    std::map<Bidegree, std::vector<BitVector>> cycles;
    std::map<Bidegree, std::vector<BitVector>> bounds;
    for (const auto& [k, c] : cells_) {
        bounds[k] = c.boundaries();
        std::vector<BitVector> z;
        const auto it = d.find(k);
        if (it == d.end() || it->second.is_zero()) {
            z = c.reps();
        }
        else {
            for (const auto& v : f2::kernel_basis(it->second))
                z.push_back(c.lift(v));
        }
        cycles[k] = std::move(z);
    }
    for (const auto& [k, m] : d) {
        if (m.is_zero())
            continue;
        const Bidegree tk = target(k.first, k.second);
        const Cell& tc = cell(tk.first, tk.second);
        const Cell& sc = cell(k.first, k.second);
        if (m.rows() != tc.dim() || m.cols() != sc.dim())
            throw InvariantBreach("differential matrix has the wrong shape");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const BitVector y = tc.lift(m.column(j));
            if (!y.is_zero())
                bounds[tk].push_back(y);
        }
    }
    Page out = *this;
    out.r_ = r_ + 1;
    out.cells_.clear();
    for (const auto& [k, c] : cells_) {
        f2::EchelonBasis eb(c.ambient());
        std::vector<BitVector> b;
        for (const auto& v : bounds[k])
            if (eb.insert(v))
                b.push_back(v);
        std::vector<BitVector> reps;
        for (const auto& z : cycles[k]) {
            if (eb.insert(z))
                reps.push_back(z);
        }
        // boundaries must be cycles
        f2::EchelonBasis zb(c.ambient());
        for (const auto& v : c.boundaries())
            zb.insert(v);
        for (const auto& z : cycles[k])
            zb.insert(z);
        for (const auto& v : b)
            if (!zb.contains(v))
                throw InvariantBreach("d o d != 0 at (" + std::to_string(k.first) + "," + std::to_string(k.second) + ")");
        out.cells_.emplace(k, Cell(c.ambient(), std::move(b), std::move(reps)));
    }
    return out;
}

std::string vector_name(const ExtChart& c, int s, int t, const BitVector& v,
                        const std::map<std::string, std::string>& names)
{
    if (v.is_zero())
        return "0";
    std::string out;
    const auto& labels = c.labels(s, t);
    for (auto k : v.support()) {
        if (!out.empty())
            out += " + ";
        const std::string& l = labels[k];
        const auto it = names.find(l);
        out += it == names.end() ? l : it->second;
    }
    return out;
}

std::string Page::to_text(const std::map<std::string, std::string>& names) const
{
    std::ostringstream os;
    os << "page E" << r_ << " of " << e2_->name() << "\n";
    std::map<std::pair<int, int>, Bidegree> order;
    for (const auto& k : support())
        order[{k.second - k.first, k.first}] = k;
    for (const auto& [ns, k] : order) {
        const Cell& c = cell(k.first, k.second);
        os << "n=" << ns.first << " s=" << ns.second << " dim=" << c.dim() << "\n";
        for (const auto& x : c.reps())
            os << "  " << vector_name(*e2_, k.first, k.second, x, names) << "\n";
    }
    return os.str();
}

}  // namespace tsb::adams
