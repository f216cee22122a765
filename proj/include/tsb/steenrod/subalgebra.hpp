#pragma once

#include <map>
#include <memory>
#include <vector>

#include "tsb/f2/matrix.hpp"
#include "tsb/steenrod/milnor.hpp"

namespace tsb::steenrod {

/// A word in the generators Sq^{2^i}, leftmost factor applied last.
using Word = std::vector<int>;

/// Words in Sq^1, Sq^2, Sq^4, ... spanning A(n), per degree.
struct WordTableDegree {
    /// Candidate words g * b for generators g and basis words b of lower degree.
    std::vector<Word> words;
    /// words -> Milnor coordinates (rows = Milnor basis of this degree).
    f2::F2Matrix word_to_milnor;
    /// Indices into `words` of a greedily chosen basis.
    std::vector<std::size_t> basis_words;
    /// Column j: combination of `words` equal to the j-th Milnor basis element.
    f2::F2Matrix section;
    /// Kernel of word_to_milnor: the relations among `words`.
    std::vector<f2::BitVector> relations;
    /// For each word: index of its generator and of the basis word it extends
    /// (in the table for degree d - |g|); -1 for the empty word.
    std::vector<std::pair<int, int>> factor;
};

struct WordTable {
    AlgebraSpec spec;
    std::vector<int> generators;
    std::vector<WordTableDegree> degrees;
};

/// Multiplication table and derived data for A(n).
class SubAlgebra {
public:
    /// Shared instance; tables are built once.
    static const SubAlgebra& get(int n);

    int n() const { return spec_.n; }
    const AlgebraSpec& spec() const { return spec_; }
    int top_degree() const { return top_; }
    std::size_t dimension() const { return all_.size(); }

    /// Milnor basis in degree d.
    const std::vector<Monomial>& basis(int d) const;
    std::size_t dim(int d) const { return basis(d).size(); }
    /// Global index of a monomial (ordered by degree then lexicographic).
    std::size_t index(const Monomial& m) const;
    const Monomial& monomial(std::size_t global) const { return all_[global]; }
    int degree_of(std::size_t global) const { return deg_[global]; }
    /// Position of a global index inside its degree's basis.
    std::size_t local(std::size_t global) const { return local_[global]; }
    std::size_t global(int d, std::size_t local) const { return offset_[d] + local; }

    /// Product of two basis elements as a vector over basis(|a|+|b|).
    const f2::BitVector& product(std::size_t a, std::size_t b) const { return table_[a * all_.size() + b]; }

    /// Linear functional on degree 2^i that is 1 on Sq(2^i) and vanishes on decomposables.
    const f2::BitVector& indecomposable_functional(int i) const { return phi_[i]; }

    const WordTable& words() const { return words_; }

    SteenrodElement element(const f2::BitVector& v, int d) const;
    f2::BitVector vector(const SteenrodElement& e) const;

private:
    explicit SubAlgebra(int n);

    AlgebraSpec spec_;
    int top_ = 0;
    std::vector<std::vector<Monomial>> by_degree_;
    std::vector<Monomial> all_;
    std::vector<int> deg_;
    std::vector<std::size_t> local_;
    std::vector<std::size_t> offset_;
    std::map<Monomial, std::size_t> lookup_;
    std::vector<f2::BitVector> table_;
    std::vector<f2::BitVector> phi_;
    WordTable words_;
};

/// Builds the word table of A(n) up to degree cap. Throws std::logic_error if
/// the candidate words fail to span some degree.
WordTable build_word_table(const AlgebraSpec& spec, int cap);

}  // namespace tsb::steenrod
