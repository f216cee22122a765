#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsb/module/module.hpp"

namespace tsb::ext {

using f2::BitVector;
using f2::F2Matrix;
using module::GradedModule;

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Free graded A(n)-module on generators of nondecreasing degree. The basis in
/// degree t lists, generator by generator, beta * g_j for beta in the Milnor
/// basis of degree t - |g_j|.
class FreeModule {
public:
    explicit FreeModule(const steenrod::SubAlgebra& alg) : alg_(&alg) {}

    const steenrod::SubAlgebra& algebra() const { return *alg_; }
    std::size_t add_generator(int degree);
    std::size_t generator_count() const { return degrees_.size(); }
    int generator_degree(std::size_t j) const { return degrees_[j]; }

    std::size_t dim(int t) const;
    /// Position of beta * g_j in degree t (beta given by its local index in
    /// degree t - |g_j|).
    std::size_t position(std::size_t j, int t, std::size_t beta_local) const;
    /// Generator and global algebra index of the basis element at `pos`.
    std::pair<std::size_t, std::size_t> locate(int t, std::size_t pos) const;
    /// Generators of exactly degree t.
    std::vector<std::size_t> generators_in(int t) const;

    /// beta * v for v in degree t; result lives in degree t + |beta|.
    BitVector act(std::size_t beta, const BitVector& v, int t) const;

private:
    struct Layout {
        std::vector<std::size_t> gens;
        std::vector<std::size_t> offsets;
        std::size_t dim = 0;
    };
    const Layout& layout(int t) const;

    const steenrod::SubAlgebra* alg_;
    std::vector<int> degrees_;
    mutable std::vector<Layout> layouts_;
    mutable std::size_t layout_gens_ = 0;
};

struct ResolutionLimits {
    int s_max = 14;
    int t_max = 34;
    /// Largest free-module dimension allowed in a single degree.
    std::size_t max_dim = 20000;
};

/// Minimal free resolution F_s -> ... -> F_0 -> M over the module's algebra,
/// exact in every internal degree t <= t_max for s <= s_max.
class Resolution {
public:
    Resolution(std::shared_ptr<const GradedModule> m, ResolutionLimits limits = {});

    const GradedModule& module() const { return *m_; }
    std::shared_ptr<const GradedModule> module_ptr() const { return m_; }
    const steenrod::SubAlgebra& algebra() const { return *alg_; }
    int s_max() const { return limits_.s_max; }
    int t_max() const { return limits_.t_max; }

    const FreeModule& free(int s) const { return free_[s]; }
    /// d(g_j) for generator j of F_s, over F_{s-1} (or M for s = 0) in degree |g_j|.
    const BitVector& differential(int s, std::size_t j) const { return d_[s][j]; }
    /// d_s in degree t: rows F_{s-1}(t) (or M(t)), columns F_s(t).
    const F2Matrix& matrix(int s, int t) const;
    /// Dimension of the target of d_s in degree t.
    std::size_t target_dim(int s, int t) const;

    std::size_t ext_dim(int s, int t) const { return s > s_max() ? 0 : free_[s].generators_in(t).size(); }

    /// Empty when d o d = 0, every differential lies in the augmentation ideal,
    /// and the complex is exact in the window; otherwise the first failure.
    std::string check() const;

private:
    void build();
    F2Matrix compute_matrix(int s, int t) const;

    std::shared_ptr<const GradedModule> m_;
    ResolutionLimits limits_;
    const steenrod::SubAlgebra* alg_;
    std::unique_ptr<module::ActionTable> table_;
    std::vector<FreeModule> free_;
    std::vector<std::vector<BitVector>> d_;
    // matrices_[s][t - t0]
    std::vector<std::vector<F2Matrix>> matrices_;
    int t0_ = 0;
};

/// Resolves several modules concurrently; the results do not depend on scheduling.
std::vector<std::shared_ptr<Resolution>> resolve_all(const std::vector<std::shared_ptr<const GradedModule>>& modules,
                                                     ResolutionLimits limits);

}  // namespace tsb::ext
