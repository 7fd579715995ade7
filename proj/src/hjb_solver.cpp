// SPDX-License-Identifier: Apache-2.0
#include "dlpp/hjb_solver.hpp"

#include <sstream>
#include <stdexcept>

namespace dlpp {

namespace {

SchemeCoefficients<double> coefficients_for_dims(const WeightField& field, double h, Eigen::Index rows,
                                                 Eigen::Index cols, GridIndex base, bool relative)
{
    if (base.i < 0 || base.j < 0 || base.i >= rows || base.j >= cols) {
        std::ostringstream os;
        os << "base point (" << base.i << ", " << base.j << ") outside grid " << rows << "x" << cols;
        throw std::out_of_range(os.str());
    }
    SchemeCoefficients<double> c;
    c.h = h;
    c.base = base;
    c.mu.resize(rows, cols);
    c.sigma.resize(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const Point x(static_cast<double>(i) * h, static_cast<double>(j) * h);
            auto where = [&] {
                std::ostringstream os;
                os << "grid point (" << i << ", " << j << ") = (" << x.x() << ", " << x.y() << ")";
                return os.str();
            };
            double mu = 0.0, sigma = 0.0;
            try {
                mu = relative ? field.bulk_mean(x) : effective_mean_at(field, i, j, h);
                sigma = field.sigma(x);
            } catch (const DomainError& e) {
                throw DomainError("field invalid at " + where() + ": " + e.what());
            }
            if (!std::isfinite(mu) || !std::isfinite(sigma)) {
                std::ostringstream os;
                os << "field is not finite at " << where() << ": mu=" << mu << " sigma=" << sigma;
                throw DomainError(os.str());
            }
            c.mu(i, j) = mu;
            c.sigma(i, j) = sigma;
        }
    }
    return c;
}

void check_spacing(double h, Extent extent)
{
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing h must be positive");
    if (!(extent.x1 >= 0.0) || !(extent.x2 >= 0.0) || !std::isfinite(extent.x1) || !std::isfinite(extent.x2)) {
        throw std::invalid_argument("extent must be finite and nonnegative");
    }
}

ValueGrid finish(ValueGrid grid, const WeightField& field)
{
    grid.set_description(field.description());
    if (field.has_interior_sources()) grid.add_note(kLineSourceCaveat);
    if (field.has_diagonal_source()) {
        grid.add_note("diagonal sources fall outside the hypotheses of the continuum limit");
    }
    return grid;
}

}  // namespace

Eigen::Index grid_intervals(double extent, double h)
{
    return static_cast<Eigen::Index>(std::floor(extent / h + 1e-9));
}

SchemeCoefficients<double> scheme_coefficients(const WeightField& field, double h, Extent extent, GridIndex base,
                                               bool relative)
{
    check_spacing(h, extent);
    return coefficients_for_dims(field, h, grid_intervals(extent.x1, h) + 1, grid_intervals(extent.x2, h) + 1, base,
                                 relative);
}

ValueGrid solve(const WeightField& field, double h, Extent extent, const SolveOptions& options)
{
    auto c = scheme_coefficients(field, h, extent);
    return finish(solve_scheme(c, options.threads), field);
}

ValueGrid solve_relative(const WeightField& field, double h, Extent extent, GridIndex base,
                         const SolveOptions& options)
{
    auto c = scheme_coefficients(field, h, extent, base, true);
    return finish(solve_scheme(c, options.threads), field);
}

ValueGrid closed_form_grid(double mu, double sigma, double h, Extent extent)
{
    check_spacing(h, extent);
    const Eigen::Index rows = grid_intervals(extent.x1, h) + 1, cols = grid_intervals(extent.x2, h) + 1;
    GridArray<double> U(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            U(i, j) = closed_form_iid(mu, sigma, static_cast<double>(i) * h, static_cast<double>(j) * h);
        }
    }
    return ValueGrid(h, std::move(U), {}, "closed_form_iid");
}

double boundary_residual(const ValueGrid& vg, const WeightField& field)
{
    if (vg.rows() == 0 || vg.cols() == 0) return 0.0;
    const GridIndex b = vg.base();
    const bool relative = b.i != 0 || b.j != 0;
    const auto c = coefficients_for_dims(field, vg.spacing(), vg.rows(), vg.cols(), b, relative);
    const double h = vg.spacing();

    double worst = 0.0;
    double sum = 0.0;
    for (Eigen::Index i = b.i; i < vg.rows(); ++i) {
        sum += h * c.mu(i, b.j);
        if (i > b.i) worst = std::max(worst, std::abs(vg(i, b.j) - sum));
    }
    sum = 0.0;
    for (Eigen::Index j = b.j; j < vg.cols(); ++j) {
        sum += h * c.mu(b.i, j);
        if (j > b.j) worst = std::max(worst, std::abs(vg(b.i, j) - sum));
    }
    return worst;
}

double boundary_trace(const WeightField& field, const Point& x, int intervals)
{
    if (intervals < 1) throw std::invalid_argument("quadrature needs at least one interval");
    const double length = x.x() + x.y();
    if (length == 0.0) return 0.0;
    double acc = 0.0;
    for (int k = 0; k < intervals; ++k) {
        const double t = (k + 0.5) / intervals;
        acc += field.continuum_mean(t * x);
    }
    return length * acc / intervals;
}

BoundaryTrace boundary_trace(const WeightField& field, double h, Extent extent)
{
    check_spacing(h, extent);
    BoundaryTrace trace;
    trace.h = h;
    const Eigen::Index n1 = grid_intervals(extent.x1, h), n2 = grid_intervals(extent.x2, h);
    trace.along_x1.resize(static_cast<std::size_t>(n1 + 1));
    trace.along_x2.resize(static_cast<std::size_t>(n2 + 1));
    for (Eigen::Index i = 0; i <= n1; ++i) {
        trace.along_x1[static_cast<std::size_t>(i)] =
            boundary_trace(field, Point(static_cast<double>(i) * h, 0.0), std::max<int>(1, static_cast<int>(i)));
    }
    for (Eigen::Index j = 0; j <= n2; ++j) {
        trace.along_x2[static_cast<std::size_t>(j)] =
            boundary_trace(field, Point(0.0, static_cast<double>(j) * h), std::max<int>(1, static_cast<int>(j)));
    }
    return trace;
}

GridArray<double> stability_barrier(const SchemeCoefficients<double>& c)
{
    const double mu_sup = c.mu.maxCoeff();
    const double sigma_sup = c.sigma.maxCoeff();
    GridArray<double> V(c.mu.rows(), c.mu.cols());
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            const double x1 = static_cast<double>(std::max<Eigen::Index>(i - c.base.i, 0)) * c.h;
            const double x2 = static_cast<double>(std::max<Eigen::Index>(j - c.base.j, 0)) * c.h;
            V(i, j) = mu_sup * (x1 + x2) + 2.0 * sigma_sup * std::sqrt(x1 * x2) + 1.0;
        }
    }
    return V;
}

}  // namespace dlpp
