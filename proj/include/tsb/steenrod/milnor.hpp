#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsb::steenrod {

/// Milnor basis monomial Sq(r1, ..., rk); no trailing zeros, empty = unit.
using Monomial = std::vector<int>;

int degree(const Monomial& r);
/// Drops trailing zeros.
Monomial normalize(Monomial r);
std::string to_string(const Monomial& r);

/// Which algebra an element lives in: A(n) for n >= 0, or the full algebra
/// truncated at `cap`.
struct AlgebraSpec {
    int n = 2;
    bool full = false;
    int cap = 0;

    static AlgebraSpec sub(int n) { return {n, false, 0}; }
    static AlgebraSpec full_algebra(int cap) { return {-1, true, cap}; }

    bool contains(const Monomial& r) const;
    /// Top degree of A(n); cap for the full algebra.
    int top_degree() const;
    std::string name() const;
    bool operator==(const AlgebraSpec&) const = default;
};

/// Parses "A0", "A(1)", "A2", "full:20".
AlgebraSpec parse_algebra(const std::string& text);

class AlgebraMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SteenrodElement {
public:
    SteenrodElement() = default;
    SteenrodElement(AlgebraSpec spec, int degree) : spec_(spec), degree_(degree) {}
    static SteenrodElement unit(AlgebraSpec spec) { return SteenrodElement(spec, 0, Monomial{}); }
    SteenrodElement(AlgebraSpec spec, int degree, const Monomial& m);

    const AlgebraSpec& spec() const { return spec_; }
    int degree() const { return degree_; }
    const std::set<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds one monomial (mod 2).
    void toggle(const Monomial& m);
    SteenrodElement& operator+=(const SteenrodElement& other);
    bool operator==(const SteenrodElement& other) const
    {
        return terms_ == other.terms_ && (terms_.empty() || degree_ == other.degree_);
    }

    std::string to_string() const;

private:
    AlgebraSpec spec_;
    int degree_ = 0;
    std::set<Monomial> terms_;
};

/// Milnor's product formula on two monomials; returns the monomials with odd
/// coefficient.
std::set<Monomial> milnor_product(const Monomial& r, const Monomial& s);

SteenrodElement multiply(const SteenrodElement& a, const SteenrodElement& b);

/// Milnor basis of the given degree, lexicographic on exponent sequences.
std::vector<Monomial> basis(const AlgebraSpec& spec, int d);

/// Sq^a for a single exponent, in Milnor coordinates.
Monomial sq(int a);

/// Rewrites a word Sq^{a1} Sq^{a2} ... into admissible words with the Adem
/// relations. Each output word satisfies a_i >= 2 a_{i+1}.
std::set<std::vector<int>> admissible_form(const std::vector<int>& word);

/// Milnor coordinates of a word, computed by Adem rewriting followed by
/// expansion of the admissible terms.
SteenrodElement adem_reduce(const std::vector<int>& word, AlgebraSpec spec = AlgebraSpec::full_algebra(64));

/// Admissible-basis expression of a Milnor element.
std::set<std::vector<int>> to_admissible(const SteenrodElement& e);

std::string word_to_string(const std::vector<int>& word);
/// Parses "Sq^2 Sq^1", "Sq2 Sq1", "2 1" or "[2,1]".
std::vector<int> parse_word(const std::string& text);
/// Parses "Sq(3) + Sq(0,1)".
SteenrodElement parse_element(const std::string& text, AlgebraSpec spec);

/// Binomial coefficient mod 2, zero outside 0 <= k <= n.
inline bool binom2(int n, int k)
{
    if (n < 0 || k < 0 || k > n)
        return false;
    return (k & ~n) == 0;
}

}  // namespace tsb::steenrod
