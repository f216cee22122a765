#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsb/ext/resolution.hpp"

namespace tsb::ext {

using Bidegree = std::pair<int, int>;  // (s, t)

/// Bigraded Ext dimensions with labels and h0, h1, h2 multiplications.
class ExtChart {
public:
    ExtChart() = default;
    ExtChart(std::string name, int algebra, int s_max, int t_max);

    /// Dimensions from generator counts; h_i read off the differential
    /// coefficients modulo decomposables.
    static ExtChart from_resolution(const Resolution& r, const std::string& name = {});

    const std::string& name() const { return name_; }
    int algebra() const { return algebra_; }
    int s_max() const { return s_max_; }
    int t_max() const { return t_max_; }
    /// (s, t) is inside the window where the values are final.
    bool complete(int s, int t) const { return s >= 0 && s <= s_max_ && t <= t_max_; }

    std::size_t dim(int s, int t) const;
    void set_dim(int s, int t, std::size_t n, std::vector<std::string> labels = {});
    const std::vector<std::string>& labels(int s, int t) const;
    /// Nonzero bidegrees in (s, t) order.
    std::vector<Bidegree> support() const;

    /// h_i : Ext^{s,t} -> Ext^{s+1,t+2^i}; rows index the target.
    F2Matrix h(int i, int s, int t) const;
    void set_h(int i, int s, int t, const F2Matrix& m);

    /// Chart of the direct sum; labels of `b` get `suffix` appended when they
    /// would collide.
    ExtChart direct_sum(const ExtChart& b, const std::string& name) const;
    /// Restricts the window.
    ExtChart truncated(int s_max, int t_max) const;

    bool operator==(const ExtChart& o) const = default;

    /// Structured text: one line per nonzero (s, t-s) with labels and h_i targets.
    std::string to_text() const;
    std::string to_json() const;
    static ExtChart from_json(const std::string& text);
    /// Dots at (t-s, s); vertical h0, slope-1 h1, slope-1/3 h2 segments.
    std::string to_svg(int max_stem = -1) const;

    /// Finds a label; nullopt when absent.
    std::optional<std::pair<Bidegree, std::size_t>> find(const std::string& label) const;

private:
    std::string name_;
    int algebra_ = 2;
    int s_max_ = 0;
    int t_max_ = 0;
    std::map<Bidegree, std::vector<std::string>> labels_;
    std::map<std::tuple<int, int, int>, F2Matrix> h_;
};

/// Default label of the k-th class in bidegree (s, t).
std::string default_label(int s, int t, std::size_t k);

}  // namespace tsb::ext
