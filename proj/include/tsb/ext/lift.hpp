#pragma once

#include <map>
#include <string>
#include <vector>

#include "tsb/ext/chart.hpp"

namespace tsb::ext {

class LiftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Chain map F_{s0+k} -> G_k (k = 0..levels) between resolutions, raising
/// internal degree by `shift`. The source may be over a subalgebra of the
/// target's algebra; its coefficients are read through the Milnor basis.
struct ChainMap {
    int s0 = 0;
    int shift = 0;
    int t_max = 0;
    /// images[k][j]: image of generator j of F_{s0+k}, over G_k in degree |g_j| + shift.
    std::vector<std::vector<BitVector>> images;
};

/// Lifts the level-0 data `f0` (one image per generator of F_{s0} with degree
/// <= t_max) through `levels` further levels. Throws LiftError when a lift
/// does not exist.
ChainMap lift_chain_map(const Resolution& src, int s0, const Resolution& tgt, int shift, std::vector<BitVector> f0,
                        int levels, int t_max);

/// Chain map covering a module map M -> N given by per-degree matrices
/// (rows N(d + shift), columns M(d)); for a subalgebra source, the matrices
/// need only be linear over the smaller algebra.
ChainMap lift_module_map(const Resolution& src, const Resolution& tgt, const std::map<int, F2Matrix>& phi, int shift,
                         int levels, int t_max);
ChainMap lift_module_map(const module::ModuleMap& f, const Resolution& src, const Resolution& tgt, int levels,
                         int t_max);
/// Identity of the underlying vector spaces, for comparing a resolution over
/// A(k) with one over A(n) of the same module.
ChainMap lift_restriction(const Resolution& src, const Resolution& tgt, int levels, int t_max);

/// Induced map on Ext, keyed by the source bidegree (s, t) of F: matrix from
/// Ext^{s,t+shift}(N) (columns) to Ext^{s,t}(M) (rows).
using ExtMap = std::map<Bidegree, F2Matrix>;
ExtMap induced_ext_map(const ChainMap& f, const Resolution& src, const Resolution& tgt);

/// Rank of an Ext map in one bidegree (0 when absent).
std::size_t rank_at(const ExtMap& m, int s, int t);

/// h_i times the class of generator j of F_s computed by lifting the cocycle
/// to a chain map into the minimal resolution of F2; returns the coefficients
/// on the generators of F_{s+1} in degree |g_j| + 2^i.
BitVector yoneda_h(const Resolution& r, const Resolution& unit, int i, int s, std::size_t j);

}  // namespace tsb::ext
