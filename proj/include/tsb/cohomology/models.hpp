#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsb/module/module.hpp"

namespace tsb::cohomology {

using f2::BitVector;
using f2::F2Matrix;
using module::GradedModule;
using module::ModuleVector;

/// Exponent vector over a model's generators.
using Exps = std::vector<int>;
/// Polynomial with integer coefficients; F2 models reduce them mod 2.
using Poly = std::map<Exps, long long>;

struct Generator {
    std::string name;
    int degree = 0;
    /// x^k = 0 for k >= nilpotence; 0 means no relation.
    int nilpotence = 0;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Graded ring with a degree cap, over F2 or the integers.
class RingModel {
public:
    RingModel(std::string name, std::vector<Generator> gens, int cap, bool integral);

    const std::string& name() const { return name_; }
    int cap() const { return cap_; }
    bool integral() const { return integral_; }
    const std::vector<Generator>& generators() const { return gens_; }
    std::optional<std::size_t> generator_index(const std::string& name) const;

    /// Monomial basis of degree d, deterministic order.
    const std::vector<Exps>& basis(int d) const;
    int degree(const Exps& e) const;
    bool allowed(const Exps& e) const;
    std::string monomial_name(const Exps& e) const;
    Poly multiply(const Poly& a, const Poly& b) const;
    Poly monomial(const Exps& e, long long c = 1) const;

    /// Sq^i on generator g (F2 models only); set by the builders.
    void set_generator_square(std::size_t g, int i, const Poly& p);
    /// Sq^i of a monomial by the Cartan formula, truncated at the cap.
    Poly sq(int i, const Exps& e) const;

    /// Additional names accepted by the expression parser (e.g. c -> D).
    void add_alias(const std::string& name, const Poly& value) { aliases_[name] = value; }
    /// Parses sums/differences of products of names, integers, powers and brackets.
    Poly parse(const std::string& expr) const;

    /// Top-degree monomial carrying the fundamental class.
    void set_fundamental(const Exps& e) { fundamental_ = e; }
    const std::optional<Exps>& fundamental() const { return fundamental_; }

    /// Coordinates of a homogeneous polynomial of degree d (mod 2).
    BitVector vector(const Poly& p, int d) const;
    Poly reduce_mod2(const Poly& p) const;

private:
    std::string name_;
    std::vector<Generator> gens_;
    int cap_;
    bool integral_;
    std::vector<std::vector<Exps>> basis_;
    std::map<std::pair<std::size_t, int>, Poly> gen_sq_;
    mutable std::map<std::pair<int, Exps>, Poly> sq_cache_;
    std::map<std::string, Poly> aliases_;
    std::optional<Exps> fundamental_;
};

/// Mod-2 cohomology of K(Z,4) below degree 15: polynomial on the classes
/// Sq^I of the fundamental class for admissible I of excess < 4 not ending in 1.
/// Throws ModelError for cap > 14.
RingModel kz4(int cap);
/// F2[x], |x| = 1.
RingModel bz2(int cap);
/// Integer witness rings: hp2 = Z[x]/(x^3), hp2xs4 = Z[x,y]/(x^3, y^2), |x| = |y| = 4.
RingModel witness_ring(const std::string& name);

/// The mod-2 cohomology ring of B(Z/2 wr K) for H = H*(K), with the
/// Steenrod action solved through the restrictions to K x K and Z/2 x K.
class WreathModel {
public:
    enum class Kind { Diag, Norm };
    struct Element {
        Kind kind;
        /// Diag: c = a, power k of x. Norm: unordered pair a < b (basis order).
        Exps a;
        Exps b;
        int k = 0;
    };

    WreathModel(std::shared_ptr<const RingModel> h, int cap);

    const RingModel& base() const { return *h_; }
    int cap() const { return cap_; }
    const std::vector<Element>& basis(int d) const { return basis_[d]; }
    std::string element_name(const Element& e) const;

    /// Joint restriction matrix in degree d; injective.
    const F2Matrix& restriction(int d) const { return restriction_[d]; }
    /// Sq^i from degree d to d + i.
    const F2Matrix& sq(int i, int d) const;
    /// Multiplication by a homogeneous element, from degree d.
    F2Matrix multiplication(const ModuleVector& a, int d) const;
    /// Parses an invariant class written in D1, D2, F1, ... and x, or by basis names.
    ModuleVector parse(const std::string& expr) const;

    std::size_t dim(int d) const { return d < 0 || d > cap_ ? 0 : basis_[d].size(); }

private:
    // coordinates of (i1*, i2*) images
    BitVector restrict_vector(int d, const std::map<std::pair<Exps, Exps>, int>& fib,
                              const std::map<std::pair<int, Exps>, int>& diag) const;
    std::map<std::pair<Exps, Exps>, int> i1(const Element& e) const;
    std::map<std::pair<int, Exps>, int> i2(const Element& e) const;
    ModuleVector solve(int d, const BitVector& image, const std::string& what) const;

    std::shared_ptr<const RingModel> h_;
    int cap_;
    std::vector<std::vector<Element>> basis_;
    // coordinate layout per degree: (a,b) pairs of H (x) H, then (k, c) of F2[x] (x) H
    std::vector<std::map<std::pair<Exps, Exps>, std::size_t>> fib_index_;
    std::vector<std::map<std::pair<int, Exps>, std::size_t>> diag_index_;
    std::vector<F2Matrix> restriction_;
    std::map<std::pair<int, int>, F2Matrix> sq_;
};

/// Module over A(2) (Sq1, Sq2, Sq4) of the model, basis named U<monomial>.
GradedModule to_module(const RingModel& r);
GradedModule to_module(const WreathModel& w);

/// T(X, mu): Sq1 and Sq2 unchanged, Sq4 replaced by v -> mu v + Sq4 v.
GradedModule twist(const RingModel& r, const std::string& mu);
GradedModule twist(const WreathModel& w, const std::string& mu);
/// Twist with an explicit multiplication matrix per degree (mu v).
GradedModule twist_with(const GradedModule& untwisted, const std::map<int, F2Matrix>& mu_mult);

/// Integer coefficient of the fundamental monomial in expr, where `classes`
/// names auxiliary classes as polynomials in the generators.
long long char_number(const RingModel& ring, const std::string& expr,
                      const std::map<std::string, std::string>& classes = {});

/// Named models: kz4, he8 (same as kz4), bz2, wreath-kz4.
struct NamedModel {
    std::shared_ptr<RingModel> ring;
    std::shared_ptr<WreathModel> wreath;
    GradedModule module() const;
    GradedModule twisted(const std::string& mu) const;
};
NamedModel named_model(const std::string& name, int cap);

}  // namespace tsb::cohomology
