#include "tsb/ext/lift.hpp"

namespace tsb::ext {

namespace {

// global index in the target algebra of each global index of the source algebra
std::vector<std::size_t> algebra_embedding(const steenrod::SubAlgebra& from, const steenrod::SubAlgebra& to)
{
    if (from.n() > to.n())
        throw LiftError("source algebra A(" + std::to_string(from.n()) + ") is larger than the target A(" +
                        std::to_string(to.n()) + ")");
    std::vector<std::size_t> out(from.dimension());
    for (std::size_t b = 0; b < from.dimension(); ++b)
        out[b] = to.index(from.monomial(b));
    return out;
}

}  // namespace

ChainMap lift_chain_map(const Resolution& src, int s0, const Resolution& tgt, int shift, std::vector<BitVector> f0,
                        int levels, int t_max)
{
    const auto emb = algebra_embedding(src.algebra(), tgt.algebra());
    t_max = std::min({t_max, src.t_max(), tgt.t_max() - shift});
    levels = std::min({levels, src.s_max() - s0, tgt.s_max()});
    ChainMap f;
    f.s0 = s0;
    f.shift = shift;
    f.t_max = t_max;
    f.images.push_back(std::move(f0));
    for (int k = 1; k <= levels; ++k) {
        const FreeModule& F = src.free(s0 + k);
        const FreeModule& Fprev = src.free(s0 + k - 1);
        const FreeModule& Gprev = tgt.free(k - 1);
        std::vector<BitVector> level;
        for (std::size_t j = 0; j < F.generator_count(); ++j) {
            const int t = F.generator_degree(j);
            if (t > t_max)
                break;
            const int u = t + shift;
            // f_{k-1}(d g)
            BitVector z(Gprev.dim(u));
            const auto& dg = src.differential(s0 + k, j);
            for (auto pos : dg.support()) {
                const auto [g, beta] = Fprev.locate(t, pos);
                const auto& img = f.images[k - 1][g];
                if (img.is_zero())
                    continue;
                z ^= Gprev.act(emb[beta], img, Fprev.generator_degree(g) + shift);
            }
            if (tgt.free(k).dim(u) == 0) {
                if (!z.is_zero())
                    throw LiftError("no lift at level " + std::to_string(k) + " in degree " + std::to_string(t));
                level.push_back(BitVector(0));
                continue;
            }
            auto y = f2::solve(tgt.matrix(k, u), z);
            if (!y)
                throw LiftError("no lift at level " + std::to_string(k) + " in degree " + std::to_string(t) +
                                "; the window is too small");
            level.push_back(*y);
        }
        f.images.push_back(std::move(level));
    }
    return f;
}

ChainMap lift_module_map(const Resolution& src, const Resolution& tgt, const std::map<int, F2Matrix>& phi, int shift,
                         int levels, int t_max)
{
    t_max = std::min({t_max, src.t_max(), tgt.t_max() - shift});
    const FreeModule& F = src.free(0);
    std::vector<BitVector> f0;
    for (std::size_t j = 0; j < F.generator_count(); ++j) {
        const int t = F.generator_degree(j);
        if (t > t_max)
            break;
        const int u = t + shift;
        BitVector target(tgt.module().dim(u));
        if (auto it = phi.find(t); it != phi.end() && tgt.module().dim(u) > 0)
            target = it->second * src.differential(0, j);
        if (tgt.free(0).dim(u) == 0) {
            if (!target.is_zero())
                throw LiftError("F_0 -> N is not onto in degree " + std::to_string(u));
            f0.push_back(BitVector(0));
            continue;
        }
        auto y = f2::solve(tgt.matrix(0, u), target);
        if (!y)
            throw LiftError("F_0 -> N is not onto in degree " + std::to_string(u));
        f0.push_back(*y);
    }
    return lift_chain_map(src, 0, tgt, shift, std::move(f0), levels, t_max);
}

ChainMap lift_module_map(const module::ModuleMap& f, const Resolution& src, const Resolution& tgt, int levels,
                         int t_max)
{
    std::map<int, F2Matrix> phi;
    for (int d : f.source().degrees())
        phi[d] = f.component(d);
    return lift_module_map(src, tgt, phi, f.shift(), levels, t_max);
}

ChainMap lift_restriction(const Resolution& src, const Resolution& tgt, int levels, int t_max)
{
    std::map<int, F2Matrix> phi;
    for (int d : src.module().degrees()) {
        if (src.module().dim(d) != tgt.module().dim(d))
            throw LiftError("modules differ in degree " + std::to_string(d));
        phi[d] = F2Matrix::identity(src.module().dim(d));
    }
    return lift_module_map(src, tgt, phi, 0, levels, t_max);
}

ExtMap induced_ext_map(const ChainMap& f, const Resolution& src, const Resolution& tgt)
{
    ExtMap out;
    for (std::size_t k = 0; k < f.images.size(); ++k) {
        const int s = f.s0 + static_cast<int>(k);
        const FreeModule& F = src.free(s);
        const FreeModule& G = tgt.free(static_cast<int>(k));
        for (int t = 0; t <= f.t_max; ++t) {
            const auto rows = F.generators_in(t);
            const auto cols = G.generators_in(t + f.shift);
            if (rows.empty() || cols.empty())
                continue;
            F2Matrix m(rows.size(), cols.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r] >= f.images[k].size())
                    continue;
                const auto& img = f.images[k][rows[r]];
                for (std::size_t c = 0; c < cols.size(); ++c)
                    if (img.get(G.position(cols[c], t + f.shift, 0)))
                        m.set(r, c);
            }
            out[{s, t}] = m;
        }
    }
    return out;
}

std::size_t rank_at(const ExtMap& m, int s, int t)
{
    auto it = m.find({s, t});
    return it == m.end() ? 0 : it->second.rank();
}

BitVector yoneda_h(const Resolution& r, const Resolution& unit, int i, int s, std::size_t j)
{
    const FreeModule& F = r.free(s);
    const int t = F.generator_degree(j);
    const int step = 1 << i;
    std::vector<BitVector> f0;
    for (std::size_t g = 0; g < F.generator_count(); ++g) {
        const int tg = F.generator_degree(g);
        if (tg > t + step)
            break;
        BitVector v(unit.free(0).dim(tg - t));
        if (g == j)
            v.set(unit.free(0).position(0, 0, 0));
        f0.push_back(v);
    }
    const ChainMap f = lift_chain_map(r, s, unit, -t, std::move(f0), 1, t + step);
    const auto targets = r.free(s + 1).generators_in(t + step);
    BitVector out(targets.size());
    // the generator of P_1 in degree 2^i
    const auto h = unit.free(1).generators_in(step);
    if (h.size() != 1)
        throw LiftError("resolution of F2 has no unique generator h" + std::to_string(i));
    for (std::size_t a = 0; a < targets.size(); ++a)
        if (f.images[1][targets[a]].get(unit.free(1).position(h.front(), step, 0)))
            out.set(a);
    return out;
}

}  // namespace tsb::ext
