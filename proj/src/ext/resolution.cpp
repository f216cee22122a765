#include "tsb/ext/resolution.hpp"

#include <algorithm>
#include <future>

namespace tsb::ext {

std::size_t FreeModule::add_generator(int degree)
{
    if (!degrees_.empty() && degree < degrees_.back())
        throw std::logic_error("generators must be added in nondecreasing degree");
    degrees_.push_back(degree);
    return degrees_.size() - 1;
}

const FreeModule::Layout& FreeModule::layout(int t) const
{
    if (layout_gens_ != degrees_.size()) {
        layouts_.clear();
        layout_gens_ = degrees_.size();
    }
    if (t < 0)
        throw std::out_of_range("negative degree");
    if (static_cast<std::size_t>(t) >= layouts_.size())
        layouts_.resize(t + 1);
    Layout& l = layouts_[t];
    if (l.gens.empty() && l.dim == 0) {
        for (std::size_t j = 0; j < degrees_.size(); ++j) {
            const int e = t - degrees_[j];
            if (e < 0)
                break;
            const std::size_t n = alg_->dim(e);
            if (n == 0)
                continue;
            l.gens.push_back(j);
            l.offsets.push_back(l.dim);
            l.dim += n;
        }
    }
    return l;
}

std::size_t FreeModule::dim(int t) const
{
    if (t < 0 || degrees_.empty())
        return 0;
    return layout(t).dim;
}

std::size_t FreeModule::position(std::size_t j, int t, std::size_t beta_local) const
{
    const auto& l = layout(t);
    auto it = std::lower_bound(l.gens.begin(), l.gens.end(), j);
    if (it == l.gens.end() || *it != j)
        throw std::out_of_range("generator has no basis element in this degree");
    return l.offsets[it - l.gens.begin()] + beta_local;
}

std::pair<std::size_t, std::size_t> FreeModule::locate(int t, std::size_t pos) const
{
    const auto& l = layout(t);
    auto it = std::upper_bound(l.offsets.begin(), l.offsets.end(), pos);
    const std::size_t k = static_cast<std::size_t>(it - l.offsets.begin()) - 1;
    const std::size_t j = l.gens[k];
    return {j, alg_->global(t - degrees_[j], pos - l.offsets[k])};
}

std::vector<std::size_t> FreeModule::generators_in(int t) const
{
    std::vector<std::size_t> out;
    auto lo = std::lower_bound(degrees_.begin(), degrees_.end(), t);
    for (auto it = lo; it != degrees_.end() && *it == t; ++it)
        out.push_back(static_cast<std::size_t>(it - degrees_.begin()));
    return out;
}

BitVector FreeModule::act(std::size_t beta, const BitVector& v, int t) const
{
    const int u = t + alg_->degree_of(beta);
    BitVector out(dim(u));
    for (auto pos : v.support()) {
        const auto [j, gamma] = locate(t, pos);
        const int e = u - degrees_[j];
        if (e > alg_->top_degree())
            continue;
        const auto& prod = alg_->product(beta, gamma);
        if (prod.is_zero())
            continue;
        const std::size_t base = position(j, u, 0);
        for (auto k : prod.support())
            out.flip(base + k);
    }
    return out;
}

Resolution::Resolution(std::shared_ptr<const GradedModule> m, ResolutionLimits limits)
    : m_(std::move(m)), limits_(limits), alg_(&steenrod::SubAlgebra::get(m_->algebra()))
{
    if (limits_.s_max < 0 || limits_.t_max < 0)
        throw std::invalid_argument("resolution limits must be nonnegative");
    table_ = std::make_unique<module::ActionTable>(*m_);
    for (int s = 0; s <= limits_.s_max; ++s)
        free_.emplace_back(*alg_);
    d_.resize(limits_.s_max + 1);
    t0_ = m_->empty() ? 0 : m_->min_degree();
    matrices_.assign(limits_.s_max + 1, {});
    build();
}

std::size_t Resolution::target_dim(int s, int t) const
{
    return s == 0 ? m_->dim(t) : free_[s - 1].dim(t);
}

F2Matrix Resolution::compute_matrix(int s, int t) const
{
    const FreeModule& F = free_[s];
    F2Matrix out(target_dim(s, t), F.dim(t));
    for (std::size_t col = 0; col < F.dim(t); ++col) {
        const auto [j, beta] = F.locate(t, col);
        const int tj = F.generator_degree(j);
        BitVector img;
        if (s == 0) {
            if (m_->dim(t) == 0)
                continue;
            img = table_->action(beta, tj) * d_[0][j];
        } else {
            img = free_[s - 1].act(beta, d_[s][j], tj);
        }
        for (auto r : img.support())
            out.set(r, col);
    }
    return out;
}

const F2Matrix& Resolution::matrix(int s, int t) const
{
    if (s < 0 || s > limits_.s_max || t < t0_ || t > limits_.t_max)
        throw std::out_of_range("degree (" + std::to_string(s) + "," + std::to_string(t) +
                                ") is outside the resolved window");
    return matrices_[s][t - t0_];
}

void Resolution::build()
{
    if (m_->empty())
        return;
    const int tmax = limits_.t_max;
    for (auto& v : matrices_)
        v.resize(std::max(0, tmax - t0_ + 1));
    for (int t = t0_; t <= tmax; ++t) {
        for (int s = 0; s <= limits_.s_max; ++s) {
            FreeModule& F = free_[s];
            if (F.dim(t) > limits_.max_dim)
                throw ResourceError("free module F_" + std::to_string(s) + " has dimension " +
                                    std::to_string(F.dim(t)) + " in degree " + std::to_string(t));
            F2Matrix D = compute_matrix(s, t);
            std::vector<BitVector> cycles;
            const std::size_t rows = target_dim(s, t);
            if (s == 0) {
                for (std::size_t i = 0; i < rows; ++i)
                    cycles.push_back(BitVector::unit(rows, i));
            } else if (rows > 0) {
                cycles = f2::kernel_basis(matrices_[s - 1][t - t0_]);
            }
            if (!cycles.empty()) {
                f2::EchelonBasis hit(rows);
                for (std::size_t c = 0; c < D.cols(); ++c)
                    hit.insert(D.column(c));
                for (const auto& z : cycles) {
                    if (!hit.insert(z))
                        continue;
                    F.add_generator(t);
                    d_[s].push_back(z);
                }
                if (F.dim(t) != D.cols())
                    D = compute_matrix(s, t);
            }
            matrices_[s][t - t0_] = std::move(D);
        }
    }
}

std::string Resolution::check() const
{
    if (m_->empty())
        return {};
    for (int t = t0_; t <= limits_.t_max; ++t) {
        if (matrices_[0][t - t0_].rank() != m_->dim(t))
            return "F_0 -> M is not onto in degree " + std::to_string(t);
        for (int s = 1; s <= limits_.s_max; ++s) {
            const auto& a = matrices_[s - 1][t - t0_];
            const auto& b = matrices_[s][t - t0_];
            if (a.cols() > 0 && b.cols() > 0 && !(a * b).is_zero())
                return "d o d != 0 at s=" + std::to_string(s) + ", t=" + std::to_string(t);
            const std::size_t ker = a.cols() - a.rank();
            if (b.rank() != ker)
                return "not exact at s=" + std::to_string(s - 1) + ", t=" + std::to_string(t);
        }
    }
    for (int s = 1; s <= limits_.s_max; ++s) {
        const FreeModule& P = free_[s - 1];
        for (std::size_t j = 0; j < free_[s].generator_count(); ++j) {
            const int t = free_[s].generator_degree(j);
            for (auto g : P.generators_in(t))
                if (d_[s][j].get(P.position(g, t, 0)))
                    return "differential of generator " + std::to_string(j) + " in F_" + std::to_string(s) +
                           " has a unit coefficient";
        }
    }
    return {};
}

std::vector<std::shared_ptr<Resolution>> resolve_all(const std::vector<std::shared_ptr<const GradedModule>>& modules,
                                                     ResolutionLimits limits)
{
    // build the shared algebra tables before fanning out
    for (const auto& m : modules)
        steenrod::SubAlgebra::get(m->algebra());
    std::vector<std::future<std::shared_ptr<Resolution>>> jobs;
    for (const auto& m : modules)
        jobs.push_back(std::async(std::launch::async, [m, limits] { return std::make_shared<Resolution>(m, limits); }));
    std::vector<std::shared_ptr<Resolution>> out;
    for (auto& j : jobs)
        out.push_back(j.get());
    return out;
}

}  // namespace tsb::ext
