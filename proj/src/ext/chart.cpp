#include "tsb/ext/chart.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tsb::ext {

std::string default_label(int s, int t, std::size_t k)
{
    return "x" + std::to_string(s) + "_" + std::to_string(t) + "_" + std::to_string(k);
}

ExtChart::ExtChart(std::string name, int algebra, int s_max, int t_max)
    : name_(std::move(name)), algebra_(algebra), s_max_(s_max), t_max_(t_max)
{
}

ExtChart ExtChart::from_resolution(const Resolution& r, const std::string& name)
{
    ExtChart c(name.empty() ? r.module().name() : name, r.algebra().n(), r.s_max(), r.t_max());
    const auto& alg = r.algebra();
    const int t0 = r.module().empty() ? 0 : r.module().min_degree();
    for (int s = 0; s <= r.s_max(); ++s)
        for (int t = t0; t <= r.t_max(); ++t) {
            const std::size_t n = r.ext_dim(s, t);
            if (n)
                c.set_dim(s, t, n);
        }
    for (int i = 0; i <= alg.n(); ++i) {
        const int step = 1 << i;
        const auto& phi = alg.indecomposable_functional(i);
        for (int s = 0; s < r.s_max(); ++s)
            for (int t = t0; t + step <= r.t_max(); ++t) {
                const auto src = r.free(s).generators_in(t);
                const auto dst = r.free(s + 1).generators_in(t + step);
                if (src.empty() || dst.empty())
                    continue;
                F2Matrix m(dst.size(), src.size());
                for (std::size_t a = 0; a < dst.size(); ++a) {
                    const auto& dg = r.differential(s + 1, dst[a]);
                    for (std::size_t b = 0; b < src.size(); ++b) {
                        const std::size_t base = r.free(s).position(src[b], t + step, 0);
                        if (dg.slice(base, base + phi.size()).dot(phi))
                            m.set(a, b);
                    }
                }
                c.set_h(i, s, t, m);
            }
    }
    return c;
}

std::size_t ExtChart::dim(int s, int t) const
{
    auto it = labels_.find({s, t});
    return it == labels_.end() ? 0 : it->second.size();
}

void ExtChart::set_dim(int s, int t, std::size_t n, std::vector<std::string> labels)
{
    if (labels.empty())
        for (std::size_t k = 0; k < n; ++k)
            labels.push_back(default_label(s, t, k));
    if (labels.size() != n)
        throw std::invalid_argument("label count does not match the dimension");
    if (n == 0)
        labels_.erase({s, t});
    else
        labels_[{s, t}] = std::move(labels);
}

const std::vector<std::string>& ExtChart::labels(int s, int t) const
{
    static const std::vector<std::string> none;
    auto it = labels_.find({s, t});
    return it == labels_.end() ? none : it->second;
}

std::vector<Bidegree> ExtChart::support() const
{
    std::vector<Bidegree> out;
    for (const auto& [k, v] : labels_)
        out.push_back(k);
    return out;
}

F2Matrix ExtChart::h(int i, int s, int t) const
{
    auto it = h_.find({i, s, t});
    if (it != h_.end())
        return it->second;
    return F2Matrix(dim(s + 1, t + (1 << i)), dim(s, t));
}

void ExtChart::set_h(int i, int s, int t, const F2Matrix& m)
{
    if (m.rows() != dim(s + 1, t + (1 << i)) || m.cols() != dim(s, t))
        throw std::invalid_argument("h matrix has the wrong shape");
    if (m.is_zero())
        h_.erase({i, s, t});
    else
        h_[{i, s, t}] = m;
}

std::optional<std::pair<Bidegree, std::size_t>> ExtChart::find(const std::string& label) const
{
    for (const auto& [k, v] : labels_)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] == label)
                return std::make_pair(k, j);
    return std::nullopt;
}

ExtChart ExtChart::direct_sum(const ExtChart& b, const std::string& name) const
{
    if (algebra_ != b.algebra_)
        throw std::invalid_argument("charts over different algebras");
    ExtChart c(name, algebra_, std::min(s_max_, b.s_max_), std::min(t_max_, b.t_max_));
    std::set<std::string> used;
    for (const auto& [k, v] : labels_)
        if (c.complete(k.first, k.second))
            for (const auto& l : v)
                used.insert(l);
    std::set<Bidegree> keys;
    for (const auto& [k, v] : labels_)
        keys.insert(k);
    for (const auto& [k, v] : b.labels_)
        keys.insert(k);
    for (const auto& k : keys) {
        if (!c.complete(k.first, k.second))
            continue;
        std::vector<std::string> l = labels(k.first, k.second);
        for (const auto& x : b.labels(k.first, k.second))
            l.push_back(used.count(x) ? x + "'" : x);
        c.set_dim(k.first, k.second, l.size(), l);
    }
    for (int i = 0; i <= algebra_; ++i)
        for (const auto& k : keys) {
            const auto [s, t] = k;
            const Bidegree tk{s + 1, t + (1 << i)};
            if (!c.complete(s, t) || !c.complete(tk.first, tk.second))
                continue;
            const auto ha = h(i, s, t);
            const auto hb = b.h(i, s, t);
            F2Matrix m(c.dim(tk.first, tk.second), c.dim(s, t));
            const std::size_t ra = dim(tk.first, tk.second);
            const std::size_t ca = dim(s, t);
            for (std::size_t r = 0; r < ha.rows(); ++r)
                for (std::size_t q = 0; q < ha.cols(); ++q)
                    if (ha.get(r, q))
                        m.set(r, q);
            for (std::size_t r = 0; r < hb.rows(); ++r)
                for (std::size_t q = 0; q < hb.cols(); ++q)
                    if (hb.get(r, q))
                        m.set(ra + r, ca + q);
            c.set_h(i, s, t, m);
        }
    return c;
}

ExtChart ExtChart::truncated(int s_max, int t_max) const
{
    ExtChart c(name_, algebra_, std::min(s_max, s_max_), std::min(t_max, t_max_));
    for (const auto& [k, v] : labels_)
        if (c.complete(k.first, k.second))
            c.labels_[k] = v;
    for (const auto& [k, m] : h_) {
        const auto [i, s, t] = k;
        if (c.complete(s, t) && c.complete(s + 1, t + (1 << i)))
            c.h_[k] = m;
    }
    return c;
}

namespace {

std::string targets(const ExtChart& c, int i, int s, int t, std::size_t k)
{
    const auto m = c.h(i, s, t);
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (m.get(r, k))
            out += (out.empty() ? "" : "+") + c.labels(s + 1, t + (1 << i))[r];
    return out.empty() ? "0" : out;
}

}  // namespace

std::string ExtChart::to_text() const
{
    std::ostringstream os;
    os << "chart " << name_ << " over A(" << algebra_ << ") s<=" << s_max_ << " t<=" << t_max_ << "\n";
    std::vector<std::pair<Bidegree, const std::vector<std::string>*>> rows;
    for (const auto& [k, v] : labels_)
        rows.push_back({{k.second - k.first, k.first}, &v});
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [nk, v] : rows) {
        const int n = nk.first;
        const int s = nk.second;
        const int t = n + s;
        os << "n=" << n << " s=" << s << " dim=" << v->size() << "\n";
        for (std::size_t k = 0; k < v->size(); ++k) {
            os << "  " << (*v)[k];
            for (int i = 0; i <= algebra_; ++i) {
                if (!complete(s + 1, t + (1 << i)))
                    continue;
                os << " h" << i << "=" << targets(*this, i, s, t, k);
            }
            os << "\n";
        }
    }
    return os.str();
}

std::string ExtChart::to_json() const
{
    nlohmann::ordered_json j;
    j["name"] = name_;
    j["algebra"] = algebra_;
    j["s_max"] = s_max_;
    j["t_max"] = t_max_;
    auto& cls = j["classes"] = nlohmann::ordered_json::array();
    for (const auto& [k, v] : labels_)
        cls.push_back({{"s", k.first}, {"t", k.second}, {"labels", v}});
    auto& pr = j["products"] = nlohmann::ordered_json::array();
    for (const auto& [k, m] : h_) {
        const auto [i, s, t] = k;
        nlohmann::ordered_json e = {{"h", i}, {"s", s}, {"t", t}};
        auto& ent = e["entries"] = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (m.get(r, c))
                    ent.push_back({r, c});
        pr.push_back(e);
    }
    return j.dump(1);
}

ExtChart ExtChart::from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    ExtChart c(j.at("name").get<std::string>(), j.at("algebra").get<int>(), j.at("s_max").get<int>(),
               j.at("t_max").get<int>());
    for (const auto& e : j.at("classes")) {
        auto l = e.at("labels").get<std::vector<std::string>>();
        c.set_dim(e.at("s").get<int>(), e.at("t").get<int>(), l.size(), l);
    }
    for (const auto& e : j.at("products")) {
        const int i = e.at("h").get<int>();
        const int s = e.at("s").get<int>();
        const int t = e.at("t").get<int>();
        F2Matrix m(c.dim(s + 1, t + (1 << i)), c.dim(s, t));
        for (const auto& rc : e.at("entries"))
            m.set(rc.at(0).get<std::size_t>(), rc.at(1).get<std::size_t>());
        c.set_h(i, s, t, m);
    }
    return c;
}

std::string ExtChart::to_svg(int max_stem) const
{
    int top_stem = 0;
    int top_s = 0;
    for (const auto& [k, v] : labels_) {
        top_stem = std::max(top_stem, k.second - k.first);
        top_s = std::max(top_s, k.first);
    }
    if (max_stem >= 0)
        top_stem = std::min(top_stem, max_stem);
    const int unit = 40;
    const int margin = 40;
    const int w = margin * 2 + unit * (top_stem + 1);
    const int hgt = margin * 2 + unit * (top_s + 1);
    auto px = [&](int s, int t, std::size_t k, std::size_t n) {
        const double spread = n > 1 ? 8.0 * (static_cast<double>(k) - (n - 1) / 2.0) : 0.0;
        return std::make_pair(margin + unit * (t - s) + spread, hgt - margin - unit * s);
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hgt << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int n = 0; n <= top_stem; ++n)
        os << "<text x=\"" << margin + unit * n << "\" y=\"" << hgt - margin / 3
           << "\" font-size=\"10\" text-anchor=\"middle\">" << n << "</text>\n";
    for (int s = 0; s <= top_s; ++s)
        os << "<text x=\"" << margin / 3 << "\" y=\"" << hgt - margin - unit * s + 4 << "\" font-size=\"10\">" << s
           << "</text>\n";
    const char* colors[] = {"black", "#1f5fbf", "#bf3f1f"};
    for (const auto& [k, m] : h_) {
        const auto [i, s, t] = k;
        if (t - s > top_stem || t + (1 << i) - s - 1 > top_stem)
            continue;
        const int s2 = s + 1;
        const int t2 = t + (1 << i);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (!m.get(r, c))
                    continue;
                const auto a = px(s, t, c, dim(s, t));
                const auto b = px(s2, t2, r, dim(s2, t2));
                os << "<line x1=\"" << a.first << "\" y1=\"" << a.second << "\" x2=\"" << b.first << "\" y2=\""
                   << b.second << "\" stroke=\"" << colors[i] << "\" stroke-width=\"1.5\"/>\n";
            }
    }
    for (const auto& [k, v] : labels_) {
        const auto [s, t] = k;
        if (t - s > top_stem)
            continue;
        for (std::size_t c = 0; c < v.size(); ++c) {
            const auto p = px(s, t, c, v.size());
            os << "<circle cx=\"" << p.first << "\" cy=\"" << p.second << "\" r=\"3\" fill=\"black\"><title>" << v[c]
               << "</title></circle>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace tsb::ext
