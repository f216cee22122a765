#pragma once

#include <map>
#include <string>
#include <vector>

#include "tsb/adams/group.hpp"
#include "tsb/adams/page.hpp"

namespace tsb::adams {

/// E2 class pinned by an assertion (tower or order).
struct ClassRef {
    Bidegree at;
    BitVector v;
};

struct ExtensionRules {
    /// Chains through these classes are infinite towers.
    std::vector<ClassRef> towers;
    /// Classes whose lifts are known to have order 2 (chain of length 1).
    std::vector<ClassRef> order_two;
    /// Apply the 2 eta = 0 rule to h1-divisible classes.
    bool eta_rule = true;
    /// Upper bound on extension choices enumerated per degree.
    std::size_t max_choices = 1u << 16;
};

/// One h0-chain of an E_infinity column.
struct Chain {
    int bottom = 0;
    int length = 0;
    /// Asserted infinite tower.
    bool free = false;
    /// The chain reaches s_max without a tower assertion.
    bool truncated = false;
    /// Length-1 chain on an h1-divisible class, or an asserted order-2 class.
    bool pinned = false;
    /// Representatives (E2 vectors) of the chain elements, bottom first.
    std::vector<BitVector> elements;
    std::string name;
};

struct DegreeAnalysis {
    int degree = 0;
    std::vector<Chain> chains;
    /// Distinct candidate groups, sorted.
    std::vector<AbelianGroup> candidates;
    /// Some chain reached s_max without a tower assertion.
    bool under_resolved = false;
    /// Number of E_infinity classes in the degree inside the window.
    std::size_t boxes = 0;
};

/// h0-chains by the elder rule, then the candidate groups: chain lengths give
/// Z/2^k, asserted towers give Z, pinned classes have order 2, and every other
/// finite chain may extend into chains starting at least two filtrations above
/// its top.
DegreeAnalysis analyze_degree(const Page& einf, int n, const ExtensionRules& rules,
                              const std::map<std::string, std::string>& names = {});

/// Coordinates of an E2 class on a page; nullopt when it is not a cycle, a
/// zero vector when it is a boundary.
std::optional<BitVector> page_coords(const Page& p, const ClassRef& c);

}  // namespace tsb::adams
