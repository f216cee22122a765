#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsb/adams/page.hpp"

namespace tsb::adams {

/// The unknown d_r on one page as a joint linear system: one block of
/// variables per source bidegree (the matrix of d_r in page coordinates),
/// equations d_r(h_i x) = h_i d_r(x) wherever both products are reliable,
/// plus tagged value constraints d_r(x) = y.
class DiffSystem {
public:
    struct Block {
        Bidegree source;
        Bidegree target;
        std::size_t rows = 0;
        std::size_t cols = 0;
        std::size_t offset = 0;
    };
    struct Solution {
        bool consistent = false;
        BitVector particular;
        std::vector<BitVector> null;
    };

    /// d_r on `page` (r >= page.r(); for r > page.r() the page stands in for E_r).
    DiffSystem(const Page& page, int r, bool h_linear = true);

    int r() const { return r_; }
    const Page& page() const { return *page_; }
    std::size_t variables() const { return nvars_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const Block* block(const Bidegree& source) const;

    /// d_r(x) = y, x and y in page coordinates. Sources without a block (no
    /// target in the window) accept only y = 0 and are otherwise ignored.
    void add_value(const Bidegree& source, const BitVector& x, const BitVector& y, int tag);
    /// d_r(x) = 0 on the whole bidegree.
    void add_zero(const Bidegree& source, int tag);

    Solution solve() const;
    /// Smallest set of value tags (found greedily) that is inconsistent with
    /// h-linearity; empty when the system is consistent.
    std::vector<int> conflict() const;

    /// Matrix of d_r at `source` in a given assignment of all variables.
    F2Matrix matrix(const BitVector& assignment, const Bidegree& source) const;
    /// Coordinates of the block of `source` inside an assignment.
    BitVector project(const BitVector& assignment, const Bidegree& source) const;

private:
    Solution solve_with(const std::vector<bool>& keep) const;

    const Page* page_;
    int r_;
    std::size_t nvars_ = 0;
    std::vector<Block> blocks_;
    struct Equation {
        BitVector lhs;
        bool rhs = false;
        int tag = -1;
    };
    std::vector<Equation> eqs_;
};

/// One possibly nonzero differential found by the scan.
struct ScanEntry {
    int r = 2;
    Bidegree source;
    Bidegree target;
    /// For each page basis class at the source: its name and the possible
    /// nonzero values of d_r on it (E2 representatives).
    struct Candidate {
        std::string source_name;
        BitVector source;
        std::vector<BitVector> values;
        std::vector<std::string> value_names;
    };
    std::vector<Candidate> candidates;
    /// Earlier entries (r', source) assumed to vanish for this one to be live.
    std::vector<std::pair<int, Bidegree>> conditions;
    /// d_r is forced to a single nonzero value.
    bool forced = false;

    int stem() const { return source.second - source.first; }
    std::string to_string() const;
};

/// Every d_r (r >= page.r()) with source stem <= window stem that is not
/// excluded by h-linearity, computed with the page standing in for E_r.
/// `names` renames labels (aliases) in the output.
std::vector<ScanEntry> ambiguity_scan(const Page& page, const std::map<std::string, std::string>& names = {});

/// All elements of the affine space p + span(basis) (at most 2^max_dim).
std::vector<BitVector> enumerate_affine(const BitVector& p, const std::vector<BitVector>& basis,
                                        std::size_t max_dim = 16);

}  // namespace tsb::adams
