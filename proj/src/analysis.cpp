// SPDX-License-Identifier: Apache-2.0
#include "dlpp/analysis.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dlpp {

namespace {

class ContourBuilder {
  public:
    ContourBuilder(const ValueGrid& vg, double level) : vg_(vg), U_(vg.values()), t_(level) {}

    LevelSet build()
    {
        LevelSet out;
        out.level = t_;
        collect_segments();
        link(out);
        return out;
    }

  private:
    using EdgeId = long long;

    EdgeId horizontal(Eigen::Index i, Eigen::Index j) const { return 2 * (i + j * U_.rows()); }
    EdgeId vertical(Eigen::Index i, Eigen::Index j) const { return 2 * (i + j * U_.rows()) + 1; }

    Point edge_point(EdgeId e) const
    {
        const Eigen::Index flat = e / 2;
        const Eigen::Index i = flat % U_.rows(), j = flat / U_.rows();
        const bool is_vertical = (e % 2) == 1;
        const Eigen::Index i2 = is_vertical ? i : i + 1, j2 = is_vertical ? j + 1 : j;
        const double va = U_(i, j), vb = U_(i2, j2);
        const double f = vb == va ? 0.0 : std::clamp((t_ - va) / (vb - va), 0.0, 1.0);
        const double h = vg_.spacing();
        return {(static_cast<double>(i) + (is_vertical ? 0.0 : f)) * h,
                (static_cast<double>(j) + (is_vertical ? f : 0.0)) * h};
    }

    void add_segment(EdgeId a, EdgeId b)
    {
        const int idx = static_cast<int>(segments_.size());
        segments_.push_back({a, b});
        for (EdgeId e : {a, b}) {
            auto [it, inserted] = incidence_.try_emplace(e, std::array<int, 2>{-1, -1});
            (it->second[0] < 0 ? it->second[0] : it->second[1]) = idx;
        }
    }

    void collect_segments()
    {
        for (Eigen::Index j = 0; j + 1 < U_.cols(); ++j) {
            for (Eigen::Index i = 0; i + 1 < U_.rows(); ++i) {
                const std::array<double, 4> v{U_(i, j), U_(i + 1, j), U_(i + 1, j + 1), U_(i, j + 1)};
                const std::array<bool, 4> in{v[0] >= t_, v[1] >= t_, v[2] >= t_, v[3] >= t_};
                const std::array<EdgeId, 4> edge{horizontal(i, j), vertical(i + 1, j), horizontal(i, j + 1),
                                                 vertical(i, j)};
                std::array<bool, 4> cross{in[0] != in[1], in[1] != in[2], in[3] != in[2], in[0] != in[3]};
                const int n = cross[0] + cross[1] + cross[2] + cross[3];
                if (n == 2) {
                    std::array<EdgeId, 2> ends{};
                    int k = 0;
                    for (int e = 0; e < 4; ++e) {
                        if (cross[e]) ends[k++] = edge[e];
                    }
                    add_segment(ends[0], ends[1]);
                } else if (n == 4) {
                    const double mean = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    if ((mean >= t_) == in[0]) {
                        add_segment(edge[0], edge[1]);
                        add_segment(edge[2], edge[3]);
                    } else {
                        add_segment(edge[0], edge[3]);
                        add_segment(edge[1], edge[2]);
                    }
                }
            }
        }
    }

    int next_unused(EdgeId e) const
    {
        const auto& inc = incidence_.at(e);
        for (int s : inc) {
            if (s >= 0 && !used_[static_cast<std::size_t>(s)]) return s;
        }
        return -1;
    }

    Polyline walk(EdgeId start, int seg)
    {
        Polyline line{edge_point(start)};
        EdgeId at = start;
        while (seg >= 0) {
            used_[static_cast<std::size_t>(seg)] = true;
            const auto& s = segments_[static_cast<std::size_t>(seg)];
            at = s[0] == at ? s[1] : s[0];
            const Point p = edge_point(at);
            if (p != line.back()) line.push_back(p);
            seg = next_unused(at);
        }
        return line;
    }

    void link(LevelSet& out)
    {
        used_.assign(segments_.size(), false);
        std::vector<EdgeId> ends;
        for (const auto& [e, inc] : incidence_) {
            if (inc[1] < 0) ends.push_back(e);
        }
        std::sort(ends.begin(), ends.end());
        for (EdgeId e : ends) {
            const int s = next_unused(e);
            if (s >= 0) out.polylines.push_back(walk(e, s));
        }
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (!used_[s]) out.polylines.push_back(walk(segments_[s][0], static_cast<int>(s)));
        }
    }

    const ValueGrid& vg_;
    const GridArray<double>& U_;
    double t_;
    std::vector<std::array<EdgeId, 2>> segments_;
    std::unordered_map<EdgeId, std::array<int, 2>> incidence_;
    std::vector<bool> used_;
};

double point_segment_distance(const Point& p, const Point& a, const Point& b)
{
    const Point d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double s = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + s * d)).norm();
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::size_t LevelSet::vertex_count() const
{
    std::size_t n = 0;
    for (const auto& p : polylines) n += p.size();
    return n;
}

LevelSet level_set(const ValueGrid& vg, double level)
{
    if (vg.rows() < 2 || vg.cols() < 2 || !std::isfinite(level) || level < vg.values().minCoeff() ||
        level > vg.values().maxCoeff()) {
        return LevelSet{level, {}};
    }
    return ContourBuilder(vg, level).build();
}

std::vector<double> decile_levels(const ValueGrid& vg)
{
    const double lo = vg.values().minCoeff(), hi = vg.values().maxCoeff();
    std::vector<double> levels;
    for (int k = 1; k <= 9; ++k) levels.push_back(lo + (hi - lo) * k / 10.0);
    return levels;
}

double one_sided_hausdorff(const LevelSet& from, const LevelSet& to)
{
    if (from.vertex_count() == 0) return 0.0;
    if (to.vertex_count() == 0) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& line : from.polylines) {
        for (const auto& p : line) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& other : to.polylines) {
                if (other.size() == 1) best = std::min(best, (p - other.front()).norm());
                for (std::size_t k = 1; k < other.size(); ++k) {
                    best = std::min(best, point_segment_distance(p, other[k - 1], other[k]));
                }
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

double sup_error(const ValueGrid& a, const ValueGrid& b)
{
    const double tol = std::max(a.spacing(), b.spacing()) * (1.0 + 1e-9);
    if (std::abs(a.extent_x() - b.extent_x()) > tol || std::abs(a.extent_y() - b.extent_y()) > tol) {
        std::ostringstream os;
        os << "incommensurate extents: [" << a.extent_x() << ", " << a.extent_y() << "] vs [" << b.extent_x() << ", "
           << b.extent_y() << "]";
        throw std::invalid_argument(os.str());
    }
    const ValueGrid& coarse = a.spacing() >= b.spacing() ? a : b;
    const ValueGrid& fine = a.spacing() >= b.spacing() ? b : a;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < coarse.cols(); ++j) {
        for (Eigen::Index i = 0; i < coarse.rows(); ++i) {
            const auto k = fine.nearest(static_cast<double>(i) * coarse.spacing(),
                                        static_cast<double>(j) * coarse.spacing());
            worst = std::max(worst, std::abs(coarse(i, j) - fine(k.i, k.j)));
        }
    }
    return worst;
}

ConvergenceTable convergence_study(const WeightField& field, const std::vector<double>& h_list,
                                   const ConvergenceOptions& options)
{
    if (h_list.empty()) throw std::invalid_argument("h_list is empty");
    for (std::size_t k = 1; k < h_list.size(); ++k) {
        if (!(h_list[k] < h_list[k - 1])) throw std::invalid_argument("h_list must be strictly decreasing");
    }

    ConvergenceTable table;
    double mu = 0.0;
    table.closed_form_reference = field.is_constant(&mu);
    ValueGrid reference;
    if (!table.closed_form_reference) {
        table.reference_h = options.reference_h > 0.0 ? options.reference_h : h_list.back() / 4.0;
        reference = solve(field, table.reference_h, options.extent, {options.threads});
    }

    for (double h : h_list) {
        ConvergenceRow row;
        row.h = h;
        const auto start = std::chrono::steady_clock::now();
        const ValueGrid U = solve(field, h, options.extent, {options.threads});
        row.runtime_seconds = seconds_since(start);
        if (table.closed_form_reference) {
            const double sigma = sigma_from_mean(field.family(), mu);
            row.sup_error = sup_error(U, closed_form_grid(mu, sigma, h, options.extent));
        } else {
            row.sup_error = sup_error(U, reference);
        }
        row.boundary_residual = boundary_residual(U, field);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace dlpp
