#include "tsb/adams/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "tsb/adams/page.hpp"

namespace tsb::adams {

int AbelianGroup::torsion_log_order() const { return std::accumulate(torsion.begin(), torsion.end(), 0); }

std::string AbelianGroup::to_string() const
{
    std::vector<std::string> parts;
    if (free_rank == 1)
        parts.push_back("Z");
    else if (free_rank > 1)
        parts.push_back("Z^" + std::to_string(free_rank));
    for (int k : torsion)
        parts.push_back(k == 1 ? "Z/2" : "Z/2^{" + std::to_string(k) + "}");
    if (parts.empty())
        return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i)
        out += " (+) " + parts[i];
    return out;
}

std::string AbelianGroup::to_short_string() const
{
    std::vector<std::string> parts;
    if (free_rank == 1)
        parts.push_back("Z");
    else if (free_rank > 1)
        parts.push_back("Z^" + std::to_string(free_rank));
    for (int k : torsion)
        parts.push_back("Z/" + std::to_string(1LL << k));
    if (parts.empty())
        return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i)
        out += " + " + parts[i];
    return out;
}

AbelianGroup AbelianGroup::parse(const std::string& text)
{
    AbelianGroup g;
    if (text == "0")
        return g;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(" (+) ", pos);
        const std::string part = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (part == "Z")
            g.free_rank += 1;
        else if (part.rfind("Z^", 0) == 0)
            g.free_rank += std::stoi(part.substr(2));
        else if (part == "Z/2")
            g.torsion.push_back(1);
        else if (part.rfind("Z/2^{", 0) == 0 && part.back() == '}')
            g.torsion.push_back(std::stoi(part.substr(5, part.size() - 6)));
        else
            throw AdamsError("bad group term '" + part + "'");
        if (end == std::string::npos)
            break;
        pos = end + 5;
    }
    std::sort(g.torsion.begin(), g.torsion.end());
    return g;
}

AbelianGroup AbelianGroup::operator+(const AbelianGroup& o) const
{
    AbelianGroup g = *this;
    g.free_rank += o.free_rank;
    g.torsion.insert(g.torsion.end(), o.torsion.begin(), o.torsion.end());
    std::sort(g.torsion.begin(), g.torsion.end());
    return g;
}

AbelianGroup cokernel(std::vector<std::vector<long long>> a, std::size_t n)
{
    const std::size_t m = a.size();
    for (auto& row : a)
        row.resize(n, 0);
    std::vector<long long> diag;
    std::size_t t = 0;
    while (t < m && t < n) {
        // pivot: smallest nonzero absolute value in the remaining block
        std::size_t pr = m;
        std::size_t pc = n;
        long long best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                    best = std::llabs(a[i][j]);
                    pr = i;
                    pc = j;
                }
        if (best == 0)
            break;
        std::swap(a[t], a[pr]);
        for (auto& row : a)
            std::swap(row[t], row[pc]);
        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
            const long long q = a[i][t] / a[t][t];
            if (q)
                for (std::size_t j = t; j < n; ++j)
                    a[i][j] -= q * a[t][j];
            if (a[i][t] != 0)
                clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
            const long long q = a[t][j] / a[t][t];
            if (q)
                for (std::size_t i = t; i < m; ++i)
                    a[i][j] -= q * a[i][t];
            if (a[t][j] != 0)
                clean = false;
        }
        if (!clean)
            continue;
        // divisibility of the remaining block
        bool divides = true;
        for (std::size_t i = t + 1; i < m && divides; ++i)
            for (std::size_t j = t + 1; j < n; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    for (std::size_t k = t; k < n; ++k)
                        a[t][k] += a[i][k];
                    divides = false;
                    break;
                }
        if (!divides)
            continue;
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    AbelianGroup g;
    g.free_rank = static_cast<int>(n - diag.size());
    for (long long d : diag) {
        if (d == 1)
            continue;
        int k = 0;
        while (d % 2 == 0) {
            d /= 2;
            ++k;
        }
        if (d != 1)
            throw AdamsError("odd torsion in a 2-primary presentation");
        g.torsion.push_back(k);
    }
    std::sort(g.torsion.begin(), g.torsion.end());
    return g;
}

}  // namespace tsb::adams
