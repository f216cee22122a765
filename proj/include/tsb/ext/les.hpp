#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsb/ext/lift.hpp"

namespace tsb::ext {

class LesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LesEntry {
    int s = 0;
    int t = 0;
    /// Rank of the connecting map Ext^{s,t}(sub) -> Ext^{s+1,t}(quotient); empty when underdetermined.
    std::optional<std::size_t> rank;
    std::string note;
};

struct LesResult {
    std::vector<LesEntry> entries;
    /// dim Ext^{s,t}(middle) forced by exactness (rank q* + rank i*).
    std::map<Bidegree, std::size_t> middle_dims;

    std::optional<std::size_t> rank(int s, int t) const;
    std::string to_text() const;
};

/// For 0 -> sub -> middle -> quotient -> 0 with q* : Ext(quotient) -> Ext(middle)
/// and i* : Ext(middle) -> Ext(sub), solves the connecting ranks from exactness
/// at Ext(sub) and at Ext(quotient). Throws LesError when the two disagree or
/// exactness at Ext(middle) fails.
LesResult les_ranks(const ExtChart& sub, const ExtChart& middle, const ExtChart& quotient, const ExtMap& q_star,
                    const ExtMap& i_star);

}  // namespace tsb::ext
