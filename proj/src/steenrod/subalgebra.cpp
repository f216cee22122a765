#include "tsb/steenrod/subalgebra.hpp"

#include <mutex>
#include <stdexcept>

namespace tsb::steenrod {

namespace {

f2::BitVector coords(const std::set<Monomial>& terms, const std::vector<Monomial>& basis_d)
{
    f2::BitVector v(basis_d.size());
    for (const auto& m : terms) {
        auto it = std::lower_bound(basis_d.begin(), basis_d.end(), m);
        if (it == basis_d.end() || *it != m)
            throw std::logic_error("product left the subalgebra: " + to_string(m));
        v.flip(static_cast<std::size_t>(it - basis_d.begin()));
    }
    return v;
}

}  // namespace

WordTable build_word_table(const AlgebraSpec& spec, int cap)
{
    if (spec.full)
        throw std::invalid_argument("word tables are built for A(n) only");
    WordTable wt;
    wt.spec = spec;
    for (int i = 0; i <= spec.n; ++i)
        wt.generators.push_back(1 << i);
    cap = std::min(cap, spec.top_degree());

    // Milnor coordinates of each basis word, per degree, for extending.
    std::vector<std::vector<std::set<Monomial>>> basis_images(cap + 1);
    for (int d = 0; d <= cap; ++d) {
        WordTableDegree td;
        const auto milnor = basis(spec, d);
        std::vector<std::set<Monomial>> images;
        if (d == 0) {
            td.words.push_back({});
            td.factor.push_back({-1, -1});
            images.push_back({Monomial{}});
        }
        for (std::size_t g = 0; g < wt.generators.size(); ++g) {
            const int gd = wt.generators[g];
            if (gd > d)
                continue;
            const auto& lower = wt.degrees[d - gd];
            for (std::size_t b = 0; b < lower.basis_words.size(); ++b) {
                Word w{gd};
                const auto& tail = lower.words[lower.basis_words[b]];
                w.insert(w.end(), tail.begin(), tail.end());
                td.words.push_back(w);
                td.factor.push_back({static_cast<int>(g), static_cast<int>(b)});
                std::set<Monomial> img;
                for (const auto& m : basis_images[d - gd][b])
                    for (const auto& z : milnor_product(sq(gd), m)) {
                        auto [it, ins] = img.insert(z);
                        if (!ins)
                            img.erase(it);
                    }
                images.push_back(std::move(img));
            }
        }
        std::vector<f2::BitVector> cols;
        for (const auto& img : images)
            cols.push_back(coords(img, milnor));
        td.word_to_milnor = f2::F2Matrix::from_columns(milnor.size(), cols);

        f2::EchelonBasis eb(milnor.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (eb.insert(cols[c]))
                td.basis_words.push_back(c);
        if (eb.rank() != milnor.size())
            throw std::logic_error("words in the generators do not span " + spec.name() + " in degree " +
                                   std::to_string(d));
        for (auto idx : td.basis_words)
            basis_images[d].push_back(images[idx]);

        td.section = f2::F2Matrix(td.words.size(), milnor.size());
        for (std::size_t j = 0; j < milnor.size(); ++j) {
            auto combo = eb.express(f2::BitVector::unit(milnor.size(), j));
            // combo is indexed by insertion order, which is word order
            for (auto k : combo->support())
                td.section.set(k, j);
        }
        td.relations = f2::kernel_basis(td.word_to_milnor);
        wt.degrees.push_back(std::move(td));
    }
    return wt;
}

const SubAlgebra& SubAlgebra::get(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SubAlgebra>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot)
        slot.reset(new SubAlgebra(n));
    return *slot;
}

SubAlgebra::SubAlgebra(int n) : spec_(AlgebraSpec::sub(n)), top_(spec_.top_degree())
{
    if (n < 0 || n > 2)
        throw std::invalid_argument("A(" + std::to_string(n) + ") is not supported");
    for (int d = 0; d <= top_; ++d) {
        by_degree_.push_back(steenrod::basis(spec_, d));
        offset_.push_back(all_.size());
        for (std::size_t i = 0; i < by_degree_.back().size(); ++i) {
            lookup_[by_degree_.back()[i]] = all_.size();
            all_.push_back(by_degree_.back()[i]);
            deg_.push_back(d);
            local_.push_back(i);
        }
    }
    const std::size_t N = all_.size();
    table_.resize(N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            const int d = deg_[a] + deg_[b];
            if (d > top_) {
                table_[a * N + b] = f2::BitVector(0);
                continue;
            }
            table_[a * N + b] = coords(milnor_product(all_[a], all_[b]), by_degree_[d]);
        }

    for (int i = 0; i <= n; ++i) {
        const int d = 1 << i;
        std::vector<f2::BitVector> decomposables;
        for (int d1 = 1; d1 < d; ++d1)
            for (std::size_t a = 0; a < by_degree_[d1].size(); ++a)
                for (std::size_t b = 0; b < by_degree_[d - d1].size(); ++b)
                    decomposables.push_back(product(offset_[d1] + a, offset_[d - d1] + b));
        f2::F2Matrix D(decomposables.size(), by_degree_[d].size());
        for (std::size_t r = 0; r < decomposables.size(); ++r)
            D.row(r) = decomposables[r];
        auto ker = f2::kernel_basis(D);
        if (ker.size() != 1)
            throw std::logic_error("indecomposables of degree " + std::to_string(d) + " are not one-dimensional");
        phi_.push_back(ker.front());
    }
    words_ = build_word_table(spec_, top_);
}

const std::vector<Monomial>& SubAlgebra::basis(int d) const
{
    static const std::vector<Monomial> empty;
    if (d < 0 || d > top_)
        return empty;
    return by_degree_[d];
}

std::size_t SubAlgebra::index(const Monomial& m) const
{
    auto it = lookup_.find(normalize(m));
    if (it == lookup_.end())
        throw std::invalid_argument(to_string(m) + " is not in " + spec_.name());
    return it->second;
}

SteenrodElement SubAlgebra::element(const f2::BitVector& v, int d) const
{
    SteenrodElement e(spec_, d);
    for (auto i : v.support())
        e.toggle(by_degree_[d][i]);
    return e;
}

f2::BitVector SubAlgebra::vector(const SteenrodElement& e) const
{
    f2::BitVector v(dim(e.degree()));
    for (const auto& m : e.terms())
        v.flip(local(index(m)));
    return v;
}

}  // namespace tsb::steenrod
