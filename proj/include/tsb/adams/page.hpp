#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsb/ext/chart.hpp"

namespace tsb::adams {

using ext::Bidegree;
using ext::ExtChart;
using f2::BitVector;
using f2::F2Matrix;

class AdamsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal inconsistency (h-action not preserved, d o d != 0 forced, ...).
class InvariantBreach : public AdamsError {
public:
    using AdamsError::AdamsError;
};

/// Two assertions (or an assertion and h-linearity) that cannot both hold.
class Contradiction : public AdamsError {
public:
    Contradiction(const std::string& what, std::vector<std::string> provenance)
        : AdamsError(what), provenance_(std::move(provenance))
    {
    }
    const std::vector<std::string>& provenance() const { return provenance_; }

private:
    std::vector<std::string> provenance_;
};

/// An assertion whose location is not a nonzero class of the current page.
class StaleLocation : public AdamsError {
public:
    using AdamsError::AdamsError;
};

/// Region where chart values are trusted: stems up to `stem` (modules truncated
/// above a degree are unreliable past it). Differentials are tracked with
/// targets at s <= s_max; the chart should reach s_max + 1 so that h-products
/// out of the top row are known.
struct Window {
    int stem = 12;
    int s_max = 10;
};

/// Subquotient Z/B of one E2 bidegree, with a basis of representatives.
class Cell {
public:
    Cell() = default;
    Cell(std::size_t ambient, std::vector<BitVector> boundaries, std::vector<BitVector> reps);

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return reps_.size(); }
    const std::vector<BitVector>& reps() const { return reps_; }
    const std::vector<BitVector>& boundaries() const { return boundaries_; }
    /// Coordinates of v in Z/B; nullopt when v is not a cycle.
    std::optional<BitVector> coords(const BitVector& v) const;
    /// Representative of a coordinate vector.
    BitVector lift(const BitVector& c) const;
    bool is_boundary(const BitVector& v) const { return bnd_.contains(v); }

private:
    std::size_t ambient_ = 0;
    std::vector<BitVector> boundaries_;
    std::vector<BitVector> reps_;
    f2::EchelonBasis bnd_;
    f2::EchelonBasis all_;
};

/// E_r page of an Adams spectral sequence built on an E2 chart.
class Page {
public:
    Page(std::shared_ptr<const ExtChart> e2, Window w);

    int r() const { return r_; }
    const ExtChart& e2() const { return *e2_; }
    std::shared_ptr<const ExtChart> e2_ptr() const { return e2_; }
    const Window& window() const { return w_; }

    /// Inside the chart and the reliable stems.
    bool reliable(int s, int t) const;
    const Cell& cell(int s, int t) const;
    std::size_t dim(int s, int t) const { return cell(s, t).dim(); }
    /// Nonzero bidegrees of the page.
    std::vector<Bidegree> support() const;

    /// h_i on the page from (s, t), rows = target coordinates; nullopt when the
    /// product leaves the reliable window.
    std::optional<F2Matrix> h(int i, int s, int t) const;

    /// E_{r+1} from d_r, given per source bidegree as a matrix from the source
    /// coordinates to the target coordinates. Missing sources carry d_r = 0.
    Page next(const std::map<Bidegree, F2Matrix>& d) const;

    /// Target bidegree of d_r from (s, t).
    Bidegree target(int s, int t) const { return {s + r_, t + r_ - 1}; }
    Bidegree target(int s, int t, int r) const { return {s + r, t + r - 1}; }

    /// Page text: one line per nonzero (stem, s) with representatives.
    std::string to_text(const std::map<std::string, std::string>& names = {}) const;

private:
    std::shared_ptr<const ExtChart> e2_;
    Window w_;
    int r_ = 2;
    std::map<Bidegree, Cell> cells_;
};

/// Name of an E2 vector as a sum of labels, using `names` (label -> alias)
/// where available.
std::string vector_name(const ExtChart& c, int s, int t, const BitVector& v,
                        const std::map<std::string, std::string>& names = {});

}  // namespace tsb::adams
