#pragma once

#include <string>
#include <vector>

namespace tsb::adams {

/// Finitely generated abelian 2-group up to 2-completion: Z^free plus
/// cyclic summands Z/2^k.
struct AbelianGroup {
    int free_rank = 0;
    /// Exponents k of the Z/2^k summands, ascending.
    std::vector<int> torsion;

    /// log2 of the order of the torsion part.
    int torsion_log_order() const;
    bool operator==(const AbelianGroup&) const = default;
    auto operator<=>(const AbelianGroup&) const = default;

    /// `Z^a (+) Z/2^{k1} (+) ...`; Z/2 is written without exponent, 0 for the trivial group.
    std::string to_string() const;
    /// Short form: Z^3 + Z/2 + Z/16.
    std::string to_short_string() const;
    static AbelianGroup parse(const std::string& text);

    /// Direct sum.
    AbelianGroup operator+(const AbelianGroup& o) const;
};

/// Cokernel of the integer relation matrix (rows = relations, columns =
/// generators). Odd torsion is rejected.
AbelianGroup cokernel(std::vector<std::vector<long long>> relations, std::size_t generators);

}  // namespace tsb::adams
