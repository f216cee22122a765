#include "tsb/f2/matrix.hpp"

#include <bit>
#include <sstream>

namespace tsb::f2 {

BitVector BitVector::from_bits(const std::vector<int>& bits)
{
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1)
            v.set(i);
    return v;
}

BitVector& BitVector::operator^=(const BitVector& other)
{
    if (other.size_ != size_)
        throw DimensionError("BitVector xor: size " + std::to_string(size_) + " vs " + std::to_string(other.size_));
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] ^= other.words_[w];
    return *this;
}

bool BitVector::is_zero() const
{
    for (auto w : words_)
        if (w)
            return false;
    return true;
}

std::size_t BitVector::popcount() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::size_t BitVector::first_set() const
{
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w])
            return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return size_;
}

bool BitVector::dot(const BitVector& other) const
{
    if (other.size_ != size_)
        throw DimensionError("BitVector dot: size mismatch");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
        acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
}

std::vector<std::size_t> BitVector::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        auto word = words_[w];
        while (word) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
            word &= word - 1;
        }
    }
    return out;
}

BitVector BitVector::concat(const BitVector& other) const
{
    BitVector out(size_ + other.size_);
    for (auto i : support())
        out.set(i);
    for (auto i : other.support())
        out.set(size_ + i);
    return out;
}

BitVector BitVector::slice(std::size_t begin, std::size_t end) const
{
    BitVector out(end - begin);
    for (std::size_t i = begin; i < end; ++i)
        if (get(i))
            out.set(i - begin);
    return out;
}

void BitVector::resize(std::size_t n)
{
    words_.resize((n + 63) / 64, 0);
    size_ = n;
    if (n % 64 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
}

std::string BitVector::to_string() const
{
    std::string s;
    s.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i)
        s.push_back(get(i) ? '1' : '0');
    return s;
}

F2Matrix F2Matrix::identity(std::size_t n)
{
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

F2Matrix F2Matrix::from_rows(const std::vector<std::vector<int>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    F2Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw DimensionError("from_rows: ragged input");
        m.data_[r] = BitVector::from_bits(rows[r]);
    }
    return m;
}

F2Matrix F2Matrix::from_columns(std::size_t rows, const std::vector<BitVector>& cols)
{
    F2Matrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows)
            throw DimensionError("from_columns: column length mismatch");
        for (auto r : cols[c].support())
            m.set(r, c);
    }
    return m;
}

BitVector F2Matrix::column(std::size_t c) const
{
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        if (get(r, c))
            v.set(r);
    return v;
}

bool F2Matrix::is_zero() const
{
    for (const auto& r : data_)
        if (!r.is_zero())
            return false;
    return true;
}

F2Matrix F2Matrix::transpose() const
{
    F2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto c : data_[r].support())
            t.set(c, r);
    return t;
}

F2Matrix F2Matrix::operator*(const F2Matrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw DimensionError("matrix product: " + std::to_string(cols_) + " vs " + std::to_string(rhs.rows_));
    F2Matrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto k : data_[r].support())
            out.data_[r] ^= rhs.data_[k];
    return out;
}

BitVector F2Matrix::operator*(const BitVector& v) const
{
    if (v.size() != cols_)
        throw DimensionError("matrix-vector product: " + std::to_string(cols_) + " vs " + std::to_string(v.size()));
    BitVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        if (data_[r].dot(v))
            out.set(r);
    return out;
}

F2Matrix& F2Matrix::operator+=(const F2Matrix& rhs)
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionError("matrix sum: shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r)
        data_[r] ^= rhs.data_[r];
    return *this;
}

std::size_t F2Matrix::rank() const
{
    EchelonBasis e(cols_);
    for (const auto& r : data_)
        e.insert(r);
    return e.rank();
}

std::string F2Matrix::to_string() const
{
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r)
        os << data_[r].to_string() << '\n';
    return os.str();
}

RrefResult rref(const F2Matrix& m)
{
    RrefResult res{m, {}, F2Matrix::identity(m.rows())};
    auto& a = res.reduced;
    auto& t = res.transform;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
        std::size_t r = pivot_row;
        while (r < m.rows() && !a.get(r, c))
            ++r;
        if (r == m.rows())
            continue;
        std::swap(a.row(r), a.row(pivot_row));
        std::swap(t.row(r), t.row(pivot_row));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != pivot_row && a.get(i, c)) {
                a.row(i) ^= a.row(pivot_row);
                t.row(i) ^= t.row(pivot_row);
            }
        }
        res.pivots.push_back(c);
        ++pivot_row;
    }
    return res;
}

std::vector<BitVector> kernel_basis(const F2Matrix& m)
{
    const auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : r.pivots)
        is_pivot[p] = true;
    std::vector<BitVector> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        BitVector v(m.cols());
        v.set(free);
        for (std::size_t i = 0; i < r.pivots.size(); ++i)
            if (r.reduced.get(i, free))
                v.set(r.pivots[i]);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<BitVector> solve(const F2Matrix& m, const BitVector& b)
{
    if (b.size() != m.rows())
        throw DimensionError("solve: right-hand side has length " + std::to_string(b.size()) + ", expected " +
                             std::to_string(m.rows()));
    const auto r = rref(m);
    const BitVector tb = r.transform * b;
    for (std::size_t i = r.pivots.size(); i < m.rows(); ++i)
        if (tb.get(i))
            return std::nullopt;
    BitVector x(m.cols());
    for (std::size_t i = 0; i < r.pivots.size(); ++i)
        if (tb.get(i))
            x.set(r.pivots[i]);
    return x;
}

BitVector EchelonBasis::reduce(BitVector v) const
{
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (v.get(pivots_[i]))
            v ^= rows_[i];
    return v;
}

BitVector EchelonBasis::reduce(BitVector v, BitVector& combo) const
{
    combo = BitVector(inserted_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (v.get(pivots_[i])) {
            v ^= rows_[i];
            BitVector c = combos_[i];
            c.resize(inserted_);
            combo ^= c;
        }
    }
    return v;
}

bool EchelonBasis::insert(const BitVector& v)
{
    if (v.size() != ambient_)
        throw DimensionError("EchelonBasis::insert: length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(ambient_));
    BitVector combo;
    BitVector rem = reduce(v, combo);
    ++inserted_;
    if (rem.is_zero())
        return false;
    combo.resize(inserted_);
    combo.set(inserted_ - 1);
    pivots_.push_back(rem.first_set());
    rows_.push_back(std::move(rem));
    combos_.push_back(std::move(combo));
    return true;
}

std::optional<BitVector> EchelonBasis::express(const BitVector& v) const
{
    BitVector combo;
    if (!reduce(v, combo).is_zero())
        return std::nullopt;
    return combo;
}

}  // namespace tsb::f2
