#include "tsb/adams/abutment.hpp"

#include <algorithm>
#include <set>

namespace tsb::adams {

std::optional<BitVector> page_coords(const Page& p, const ClassRef& c)
{
    const Cell& cell = p.cell(c.at.first, c.at.second);
    if (cell.ambient() == 0)
        return c.v.is_zero() ? std::optional<BitVector>(BitVector(0)) : std::nullopt;
    return cell.coords(c.v);
}

namespace {

struct Work {
    int bottom = 0;
    std::vector<BitVector> elems;
    bool alive = true;
};

}  // namespace

DegreeAnalysis analyze_degree(const Page& p, int n, const ExtensionRules& rules,
                              const std::map<std::string, std::string>& names)
{
    const int S = p.window().s_max;
    DegreeAnalysis out;
    out.degree = n;
    std::vector<Work> work;
    for (int s = 0; s <= S; ++s) {
        const int t = n + s;
        const Cell& cell = p.cell(s, t);
        const std::size_t dim = cell.dim();
        out.boxes += dim;
        f2::EchelonBasis eb(dim);
        std::vector<std::size_t> owner;
        if (s > 0) {
            const auto h0 = p.h(0, s - 1, t - 1);
            if (!h0)
                throw AdamsError("h0 unavailable in degree " + std::to_string(n));
            std::vector<std::size_t> order;
            for (std::size_t i = 0; i < work.size(); ++i)
                if (work[i].alive)
                    order.push_back(i);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return work[a].bottom < work[b].bottom; });
            for (std::size_t i : order) {
                Work& w = work[i];
                const BitVector img = dim ? *h0 * w.elems.back() : BitVector(0);
                BitVector combo;
                const BitVector rem = eb.reduce(img, combo);
                if (rem.is_zero()) {
                    // the youngest chain of the dependency dies
                    for (auto bit : combo.support()) {
                        const Work& elder = work[owner[bit]];
                        for (int l = w.bottom; l < s; ++l)
                            w.elems[l - w.bottom] ^= elder.elems[l - elder.bottom];
                    }
                    w.alive = false;
                }
                else {
                    eb.insert(img);
                    owner.push_back(i);
                    w.elems.push_back(img);
                }
            }
        }
        if (dim == 0)
            continue;
        std::vector<BitVector> prefer;
        for (const auto* list : {&rules.order_two, &rules.towers})
            for (const auto& c : *list)
                if (c.at == Bidegree{s, t})
                    if (auto v = page_coords(p, c); v && !v->is_zero())
                        prefer.push_back(*v);
        f2::EchelonBasis pinned(dim);
        if (rules.eta_rule && n >= 1 && s >= 1) {
            if (const auto h1 = p.h(1, s - 1, t - 2)) {
                for (std::size_t j = 0; j < h1->cols(); ++j) {
                    const BitVector col = h1->column(j);
                    if (pinned.insert(col))
                        prefer.push_back(col);
                }
            }
        }
        for (std::size_t k = 0; k < dim; ++k)
            prefer.push_back(BitVector::unit(dim, k));
        for (const auto& v : prefer)
            if (eb.insert(v))
                work.push_back({s, {v}, true});
    }

    // chains, with rule lookups
    auto find_chain = [&](const ClassRef& c, bool generator) -> std::optional<std::size_t> {
        const auto v = page_coords(p, c);
        if (!v || v->is_zero())
            return std::nullopt;
        const int s = c.at.first;
        for (std::size_t i = 0; i < work.size(); ++i) {
            const Work& w = work[i];
            const int l = s - w.bottom;
            if (l < 0 || l >= static_cast<int>(w.elems.size()) || (generator && l != 0))
                continue;
            if (w.elems[l] == *v)
                return i;
        }
        return std::nullopt;
    };
    std::vector<Chain> chains(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) {
        const Work& w = work[i];
        Chain& c = chains[i];
        c.bottom = w.bottom;
        c.length = static_cast<int>(w.elems.size());
        c.truncated = w.alive;
        for (int l = 0; l < c.length; ++l)
            c.elements.push_back(p.cell(w.bottom + l, n + w.bottom + l).lift(w.elems[l]));
        if (c.length == 1 && rules.eta_rule && c.bottom >= 1) {
            if (const auto h1 = p.h(1, c.bottom - 1, n + c.bottom - 2)) {
                f2::EchelonBasis img(w.elems[0].size());
                for (std::size_t j = 0; j < h1->cols(); ++j)
                    img.insert(h1->column(j));
                c.pinned = img.contains(w.elems[0]);
            }
        }
        c.name = vector_name(p.e2(), c.bottom, n + c.bottom, c.elements[0], names);
    }
    for (const auto& t : rules.towers) {
        if (t.at.second - t.at.first != n)
            continue;
        const auto i = find_chain(t, false);
        if (!i)
            throw AdamsError("tower assertion in degree " + std::to_string(n) + " does not lie on an E-infinity chain");
        if (!chains[*i].truncated)
            throw Contradiction("tower asserted on a finite h0-chain in degree " + std::to_string(n), {});
        chains[*i].free = true;
        chains[*i].truncated = false;
    }
    for (const auto& o : rules.order_two) {
        if (o.at.second - o.at.first != n)
            continue;
        const auto i = find_chain(o, true);
        if (!i)
            continue;
        if (chains[*i].length != 1)
            throw Contradiction("order 2 asserted on a class with nonzero h0 multiple in degree " + std::to_string(n), {});
        chains[*i].pinned = true;
    }
    for (const auto& c : chains)
        if (c.truncated)
            out.under_resolved = true;

    // hidden extension choices: 2^len g_A = sum of 2^j g_B over chains B
    // starting at least two filtrations above the top of A
    struct Option {
        std::vector<std::pair<std::size_t, int>> terms;
    };
    std::vector<std::size_t> movers;
    std::vector<std::vector<Option>> options;
    for (std::size_t a = 0; a < chains.size(); ++a) {
        const Chain& A = chains[a];
        if (A.free || A.pinned)
            continue;
        const int top = A.bottom + A.length - 1;
        std::vector<std::vector<int>> per_b;
        std::vector<std::size_t> bs;
        for (std::size_t b = 0; b < chains.size(); ++b) {
            if (b == a)
                continue;
            const Chain& B = chains[b];
            std::vector<int> js;
            for (int j = std::max(0, top + 2 - B.bottom); j < B.length; ++j)
                js.push_back(j);
            if (!js.empty()) {
                per_b.push_back(js);
                bs.push_back(b);
            }
        }
        std::vector<Option> opts{Option{}};
        for (std::size_t k = 0; k < bs.size(); ++k) {
            std::vector<Option> next;
            for (const auto& o : opts) {
                next.push_back(o);
                for (int j : per_b[k]) {
                    Option e = o;
                    e.terms.emplace_back(bs[k], j);
                    next.push_back(std::move(e));
                }
                if (next.size() > rules.max_choices)
                    throw AdamsError("too many extension choices in degree " + std::to_string(n));
            }
            opts = std::move(next);
        }
        movers.push_back(a);
        options.push_back(std::move(opts));
    }
    std::set<AbelianGroup> groups;
    std::vector<std::size_t> idx(movers.size(), 0);
    std::size_t count = 0;
    while (true) {
        if (++count > rules.max_choices)
            throw AdamsError("too many extension choices in degree " + std::to_string(n));
        std::vector<std::vector<long long>> rel;
        std::map<std::size_t, std::size_t> mover_pos;
        for (std::size_t k = 0; k < movers.size(); ++k)
            mover_pos[movers[k]] = k;
        for (std::size_t a = 0; a < chains.size(); ++a) {
            if (chains[a].free)
                continue;
            std::vector<long long> row(chains.size(), 0);
            row[a] = 1LL << chains[a].length;
            if (const auto it = mover_pos.find(a); it != mover_pos.end())
                for (const auto& [b, j] : options[it->second][idx[it->second]].terms)
                    row[b] -= 1LL << j;
            rel.push_back(std::move(row));
        }
        groups.insert(cokernel(rel, chains.size()));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == options[k].size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size())
            break;
    }
    out.candidates.assign(groups.begin(), groups.end());
    out.chains = std::move(chains);
    return out;
}

}  // namespace tsb::adams
