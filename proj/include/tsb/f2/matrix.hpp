#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsb::f2 {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bit-packed vector over F2.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    static BitVector unit(std::size_t n, std::size_t i)
    {
        BitVector v(n);
        v.set(i);
        return v;
    }
    static BitVector from_bits(const std::vector<int>& bits);

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool value = true)
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    bool operator==(const BitVector& other) const = default;

    bool is_zero() const;
    std::size_t popcount() const;
    /// Index of the lowest set bit, or size() when zero.
    std::size_t first_set() const;
    bool dot(const BitVector& other) const;
    std::vector<std::size_t> support() const;

    /// Appends `other` after this vector's entries.
    BitVector concat(const BitVector& other) const;
    BitVector slice(std::size_t begin, std::size_t end) const;
    /// Grows or shrinks to n entries; new entries are zero.
    void resize(std::size_t n);

    std::string to_string() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Dense matrix over F2 stored as bit-packed rows.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

    static F2Matrix identity(std::size_t n);
    static F2Matrix from_rows(const std::vector<std::vector<int>>& rows);
    /// Matrix whose columns are the given vectors (all of length `rows`).
    static F2Matrix from_columns(std::size_t rows, const std::vector<BitVector>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { data_[r].set(c, v); }
    void flip(std::size_t r, std::size_t c) { data_[r].flip(c); }

    const BitVector& row(std::size_t r) const { return data_[r]; }
    BitVector& row(std::size_t r) { return data_[r]; }
    BitVector column(std::size_t c) const;

    bool is_zero() const;
    bool operator==(const F2Matrix& other) const = default;

    F2Matrix transpose() const;
    F2Matrix operator*(const F2Matrix& rhs) const;
    BitVector operator*(const BitVector& v) const;
    F2Matrix& operator+=(const F2Matrix& rhs);
    friend F2Matrix operator+(F2Matrix a, const F2Matrix& b) { return a += b; }

    std::size_t rank() const;
    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BitVector> data_;
};

struct RrefResult {
    F2Matrix reduced;
    std::vector<std::size_t> pivots;
    F2Matrix transform;

    std::size_t rank() const { return pivots.size(); }
};

/// Reduced row-echelon form with the row operations recorded: transform * m == reduced.
RrefResult rref(const F2Matrix& m);

/// Basis of the null space {v : m v = 0}, one vector per free column.
std::vector<BitVector> kernel_basis(const F2Matrix& m);

/// Some x with m x = b, or nullopt when b is outside the column space.
/// Throws DimensionError when b.size() != m.rows().
std::optional<BitVector> solve(const F2Matrix& m, const BitVector& b);

/// Incrementally maintained echelon basis of a subspace of F2^n.
///
/// Each stored row remembers which of the inserted vectors it is a sum of, so
/// reductions can report a preimage in terms of insertion order.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t ambient = 0) : ambient_(ambient) {}

    std::size_t ambient() const { return ambient_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t inserted() const { return inserted_; }
    /// Pivot column of each stored row; a reduced vector is zero at all of them.
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Reduces v against the basis; returns the remainder.
    BitVector reduce(BitVector v) const;
    /// Like reduce, also accumulating in `combo` (sized to inserted()) the
    /// inserted vectors whose sum was subtracted.
    BitVector reduce(BitVector v, BitVector& combo) const;
    bool contains(const BitVector& v) const { return reduce(v).is_zero(); }

    /// Inserts v. Returns true when v was independent of the current span.
    bool insert(const BitVector& v);

    /// Writes v as a sum of inserted vectors (bit i set means the i-th insert).
    std::optional<BitVector> express(const BitVector& v) const;

private:
    std::size_t ambient_;
    std::size_t inserted_ = 0;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<BitVector> combos_;
};

}  // namespace tsb::f2
