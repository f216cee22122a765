#include "tsb/ext/les.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

namespace tsb::ext {

std::optional<std::size_t> LesResult::rank(int s, int t) const
{
    for (const auto& e : entries)
        if (e.s == s && e.t == t)
            return e.rank;
    return std::nullopt;
}

std::string LesResult::to_text() const
{
    std::ostringstream os;
    for (const auto& e : entries) {
        if (e.rank && *e.rank == 0 && e.note.empty())
            continue;
        os << "delta s=" << e.s << " t=" << e.t << " n=" << e.t - e.s << " rank=";
        if (e.rank)
            os << *e.rank;
        else
            os << "?";
        if (!e.note.empty())
            os << " (" << e.note << ")";
        os << "\n";
    }
    return os.str();
}

LesResult les_ranks(const ExtChart& sub, const ExtChart& middle, const ExtChart& quotient, const ExtMap& q_star,
                    const ExtMap& i_star)
{
    const int s_max = std::min({sub.s_max(), middle.s_max(), quotient.s_max()});
    const int t_max = std::min({sub.t_max(), middle.t_max(), quotient.t_max()});
    auto rank_of = [](const ExtMap& m, int s, int t) -> std::optional<std::size_t> {
        auto it = m.find({s, t});
        if (it == m.end())
            return std::nullopt;
        return it->second.rank();
    };
    std::set<Bidegree> keys;
    for (const auto& c : {&sub, &middle, &quotient})
        for (const auto& k : c->support())
            if (k.first <= s_max && k.second <= t_max)
                keys.insert(k);
    LesResult out;
    for (const auto& [s, t] : keys) {
        // exactness at Ext^{s,t}(middle)
        const std::size_t dm = middle.dim(s, t);
        const std::size_t rq = dm && quotient.dim(s, t) ? rank_of(q_star, s, t).value_or(SIZE_MAX) : 0;
        const std::size_t ri = dm && sub.dim(s, t) ? rank_of(i_star, s, t).value_or(SIZE_MAX) : 0;
        if (rq != SIZE_MAX && ri != SIZE_MAX) {
            if (rq + ri != dm)
                throw LesError("exactness fails at Ext^{" + std::to_string(s) + "," + std::to_string(t) +
                               "}(middle): dim " + std::to_string(dm) + " but ranks " + std::to_string(rq) + " + " +
                               std::to_string(ri));
            out.middle_dims[{s, t}] = dm;
        }

        const std::size_t ds = sub.dim(s, t);
        if (ds == 0)
            continue;
        LesEntry e{s, t, std::nullopt, {}};
        std::optional<std::size_t> from_sub;
        if (ri != SIZE_MAX)
            from_sub = ds - ri;
        std::optional<std::size_t> from_quot;
        if (s + 1 <= s_max) {
            const std::size_t dq = quotient.dim(s + 1, t);
            const std::size_t dm1 = middle.dim(s + 1, t);
            if (dq == 0)
                from_quot = 0;
            else if (dm1 == 0)
                from_quot = dq;
            else if (auto r = rank_of(q_star, s + 1, t))
                from_quot = dq - *r;
        }
        if (from_sub && from_quot && *from_sub != *from_quot)
            throw LesError("connecting map at (" + std::to_string(s) + "," + std::to_string(t) + ") has rank " +
                           std::to_string(*from_sub) + " by exactness at the sub but " + std::to_string(*from_quot) +
                           " at the quotient");
        e.rank = from_sub ? from_sub : from_quot;
        if (!e.rank)
            e.note = "underdetermined";
        else if (*e.rank > 0)
            e.note = "forced by exactness";
        out.entries.push_back(e);
    }
    return out;
}

}  // namespace tsb::ext
