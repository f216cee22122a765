#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsb/f2/matrix.hpp"
#include "tsb/steenrod/subalgebra.hpp"

namespace tsb::module {

using f2::BitVector;
using f2::F2Matrix;

/// Base class for module construction errors; line/col are 0 when unknown.
class ModuleError : public std::runtime_error {
public:
    ModuleError(const std::string& what, int line = 0, int col = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ":" + std::to_string(col) + ": " + what : what),
          line_(line), col_(col)
    {
    }
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};
class ParseError : public ModuleError {
    using ModuleError::ModuleError;
};
class NameError : public ModuleError {
    using ModuleError::ModuleError;
};
class DegreeError : public ModuleError {
    using ModuleError::ModuleError;
};
class AdemViolation : public ModuleError {
    using ModuleError::ModuleError;
};

/// Homogeneous element of a module.
struct ModuleVector {
    int degree = 0;
    BitVector v;
};

/// Result of checking that the generator matrices define an A(n)-action.
struct ActionReport {
    bool ok = true;
    int source_degree = 0;
    /// Relation among words that fails, e.g. "Sq^1 Sq^1 = 0".
    std::string relation;
    /// Basis element on which the relation acts nontrivially.
    std::string witness;
    std::string to_string() const;
};

/// Finite graded F2-vector space with Sq^{2^i} actions, i <= n.
class GradedModule {
public:
    GradedModule() = default;
    GradedModule(std::string name, int n) : name_(std::move(name)), n_(n) {}

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    /// The module is over A(n).
    int algebra() const { return n_; }
    int generator_count() const { return n_ + 1; }

    /// Adds a basis element; returns its index within its degree.
    std::size_t add_class(const std::string& name, int degree);
    std::size_t dim(int d) const;
    std::size_t total_dim() const;
    bool empty() const { return total_dim() == 0; }
    /// Smallest / largest degree with a class (0 / -1 for the zero module).
    int min_degree() const;
    int max_degree() const;
    const std::vector<std::string>& names(int d) const;
    std::optional<std::size_t> find(const std::string& name, int d) const;
    /// Looks a name up across all degrees; ambiguous names need a degree.
    std::vector<std::pair<int, std::size_t>> lookup(const std::string& name) const;
    std::vector<int> degrees() const;

    /// Matrix of Sq^{2^i} from degree d to d + 2^i (rows = target).
    F2Matrix action(int i, int d) const;
    void set_action(int i, int d, const F2Matrix& m);
    /// Toggles the coefficient of target element `to` in Sq^{2^i}(from).
    void add_action(int i, int d, std::size_t from, std::size_t to);

    ModuleVector apply_generator(int i, const ModuleVector& x) const;
    /// Matrix of an arbitrary word Sq^{a1} ... Sq^{ak} (each a power of 2) from degree d.
    F2Matrix word_action(const steenrod::Word& w, int d) const;

    ActionReport verify_action() const;
    /// Throws AdemViolation when verify_action fails; marks the module validated.
    const GradedModule& validate();
    bool validated() const { return validated_; }

    std::string element_string(const ModuleVector& x) const;
    bool operator==(const GradedModule& other) const;

private:
    std::string name_;
    int n_ = 2;
    std::map<int, std::vector<std::string>> basis_;
    std::map<std::pair<int, int>, F2Matrix> actions_;
    bool validated_ = false;
};

/// Action matrices of every Milnor basis element, built through the word table.
class ActionTable {
public:
    explicit ActionTable(const GradedModule& m);
    const GradedModule& module() const { return *m_; }
    const steenrod::SubAlgebra& algebra() const { return *alg_; }
    /// Matrix of the Milnor basis element with global index `beta` on degree d
    /// (d must carry classes).
    const F2Matrix& action(std::size_t beta, int d) const;
    ModuleVector act(const steenrod::SteenrodElement& a, const ModuleVector& x) const;

private:
    const GradedModule* m_;
    const steenrod::SubAlgebra* alg_;
    std::map<std::pair<std::size_t, int>, F2Matrix> table_;
};

/// act(elem, v) with a throwaway ActionTable.
ModuleVector act(const GradedModule& m, const steenrod::SteenrodElement& a, const ModuleVector& x);

GradedModule suspend(const GradedModule& m, int k);
GradedModule direct_sum(const GradedModule& a, const GradedModule& b);
GradedModule direct_sum(const std::vector<GradedModule>& parts);
GradedModule truncate_above(const GradedModule& m, int k);
/// Submodule of the classes in degrees k and above.
GradedModule truncate_below(const GradedModule& m, int k);
/// Restriction to A(k), k <= n.
GradedModule restrict(const GradedModule& m, int k);
/// A(n) tensored over A(k) with m.
GradedModule induce(const GradedModule& m, int n);
GradedModule zero_module(int n);

/// Degreewise linear map source_d -> target_{d+shift} commuting with the action.
class ModuleMap {
public:
    ModuleMap() = default;
    ModuleMap(std::shared_ptr<const GradedModule> source, std::shared_ptr<const GradedModule> target, int shift = 0);

    static ModuleMap identity(std::shared_ptr<const GradedModule> m);

    const GradedModule& source() const { return *source_; }
    const GradedModule& target() const { return *target_; }
    std::shared_ptr<const GradedModule> source_ptr() const { return source_; }
    std::shared_ptr<const GradedModule> target_ptr() const { return target_; }
    int shift() const { return shift_; }

    F2Matrix component(int d) const;
    void set_component(int d, const F2Matrix& m);
    ModuleVector apply(const ModuleVector& x) const;

    /// Empty string when the map commutes with all generators; otherwise a description.
    std::string check() const;
    bool injective() const;
    bool surjective() const;
    ModuleMap compose_after(const ModuleMap& first) const;

private:
    std::shared_ptr<const GradedModule> source_;
    std::shared_ptr<const GradedModule> target_;
    int shift_ = 0;
    std::map<int, F2Matrix> components_;
};

/// Builds the unique module map sending each listed source element to the
/// given target element, if one exists. Source elements must generate.
ModuleMap map_from_generators(std::shared_ptr<const GradedModule> source, std::shared_ptr<const GradedModule> target,
                              const std::vector<std::pair<ModuleVector, ModuleVector>>& images, int shift = 0);

/// Inclusion of the submodule generated by the given elements, as its own module.
ModuleMap submodule_inclusion(std::shared_ptr<const GradedModule> m, const std::vector<ModuleVector>& generators,
                              const std::string& name);
/// Inclusion of the kernel of f.
ModuleMap kernel_inclusion(const ModuleMap& f, const std::string& name);

struct ShortExactSequence {
    ModuleMap i;
    ModuleMap q;
    /// Empty when exact; otherwise names the failing degree and condition.
    std::string check() const;
};

struct DecompositionBlock {
    std::vector<ModuleVector> generators;
    std::map<int, std::vector<BitVector>> basis;
    std::map<int, std::size_t> dims() const;
    /// The block as a module in its own right, in the basis above.
    GradedModule as_module(const GradedModule& ambient, const std::string& name) const;
};

struct DecompositionResult {
    bool ok = false;
    std::vector<DecompositionBlock> blocks;
    /// Degree where independence or spanning fails.
    int failure_degree = 0;
    std::string failure;
};

/// Closes each generator set under the action and checks that the resulting
/// submodules form an internal direct sum decomposition of m.
DecompositionResult verify_decomposition(const GradedModule& m, const std::vector<std::vector<ModuleVector>>& parts);

/// Parses an element expression "a + b@4 + c" into a vector; all terms must
/// share one degree (`expected_degree` if given).
ModuleVector parse_vector(const GradedModule& m, const std::string& text, std::optional<int> expected_degree = {});

/// Module whose basis in degree d is the given list of vectors of m (which must
/// span a submodule), with the inclusion map.
ModuleMap submodule_from_basis(std::shared_ptr<const GradedModule> m, const std::map<int, std::vector<BitVector>>& basis,
                               const std::string& name);

}  // namespace tsb::module
