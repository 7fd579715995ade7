// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dlpp/sweep.hpp"
#include "dlpp/value_grid.hpp"
#include "dlpp/weight_field.hpp"

namespace dlpp {

struct Extent {
    double x1 = 1.0;
    double x2 = 1.0;
};

/// Grid coefficients mu_{i,j} (mean incl. sources) and sigma_{i,j} sampled
/// at (ih, jh). `base` marks the lower-left corner of the active region.
template <typename Scalar>
struct SchemeCoefficients {
    Scalar h = 1;
    GridArray<Scalar> mu;
    GridArray<Scalar> sigma;
    GridIndex base;
};

/// One update of the monotone scheme: the root U >= max(a, b) + h mu of
///   (U - a - h mu)_+ (U - b - h mu)_+ = h^2 sigma^2.
template <typename Scalar>
inline Scalar scheme_update(Scalar a, Scalar b, Scalar h, Scalar mu, Scalar sigma)
{
    using std::sqrt;
    const Scalar d = a - b;
    const Scalar hs = h * sigma;
    return Scalar(0.5) * (a + b) + h * mu + Scalar(0.5) * sqrt(d * d + Scalar(4) * hs * hs);
}

/// Single sweep of the scheme over the active region [base, end]. Neighbours
/// outside the active region read as 0; entries outside it are 0.
template <typename Scalar>
BasicValueGrid<Scalar> solve_scheme(const SchemeCoefficients<Scalar>& c, int threads = 1)
{
    const Eigen::Index rows = c.mu.rows(), cols = c.mu.cols();
    GridArray<Scalar> U = GridArray<Scalar>::Zero(rows, cols);
    const Eigen::Index bi = c.base.i, bj = c.base.j;
    monotone_sweep(rows - bi, cols - bj, threads, [&](Eigen::Index di, Eigen::Index dj) {
        const Eigen::Index i = bi + di, j = bj + dj;
        const Scalar a = di > 0 ? U(i - 1, j) : Scalar(0);
        const Scalar b = dj > 0 ? U(i, j - 1) : Scalar(0);
        U(i, j) = scheme_update(a, b, c.h, c.mu(i, j), c.sigma(i, j));
    });
    return BasicValueGrid<Scalar>(c.h, std::move(U), c.base);
}

/// Number of grid intervals covering [0, extent] at spacing h.
Eigen::Index grid_intervals(double extent, double h);

/// Coefficients for U (base 0, mean includes boundary and line sources) or,
/// when relative is true, for W(z, .) at base z (bulk mean only).
SchemeCoefficients<double> scheme_coefficients(const WeightField& field, double h, Extent extent, GridIndex base = {},
                                               bool relative = false);

struct SolveOptions {
    int threads = 1;
};

/// Numerical U on [0, extent] at spacing h. Throws DomainError naming the
/// grid point if the field produces a non-finite value.
ValueGrid solve(const WeightField& field, double h, Extent extent, const SolveOptions& options = {});

/// Relative value field W(z, .) with z = base * h; zero-extended below z.
ValueGrid solve_relative(const WeightField& field, double h, Extent extent, GridIndex base,
                         const SolveOptions& options = {});

/// U(x) = mu (x1 + x2) + 2 sigma sqrt(x1 x2) for constant mu, sigma.
template <typename Scalar>
inline Scalar closed_form_iid(Scalar mu, Scalar sigma, Scalar x1, Scalar x2)
{
    using std::sqrt;
    return mu * (x1 + x2) + Scalar(2) * sigma * sqrt(x1 * x2);
}

/// Closed form evaluated on every grid point: the exact solution sampled on
/// the grid (useful as an oracle grid for the curve extractor).
ValueGrid closed_form_grid(double mu, double sigma, double h, Extent extent);

/// max over axis points past the base of |U(i, 0) - h sum_{k<=i} mu_{k,0}|, and
/// the same along the other axis. Zero for a grid with no axis points.
double boundary_residual(const ValueGrid& vg, const WeightField& field);

/// Boundary trace phi(x) = (x1 + x2) int_0^1 mu(tx) + mu_s(tx) dt on the
/// axes, by composite midpoint quadrature with the grid's own spacing.
struct BoundaryTrace {
    double h = 1;
    std::vector<double> along_x1;  // phi(ih, 0)
    std::vector<double> along_x2;  // phi(0, jh)
};

double boundary_trace(const WeightField& field, const Point& x, int intervals);
BoundaryTrace boundary_trace(const WeightField& field, double h, Extent extent);

/// V(x) = ||mu + mu_s||_inf (x1 + x2) + 2 ||sigma||_inf sqrt(x1 x2) + 1, with
/// the sup norms taken over the same grid samples the scheme used.
GridArray<double> stability_barrier(const SchemeCoefficients<double>& c);

/// Largest residual of the discrete equation over interior points, in units
/// of the round-off expected from evaluating it:
///   |(U - U_l - h mu)_+ (U - U_d - h mu)_+ - h^2 sigma^2|
///     / (eps * U * (A + B) + eps * h^2 sigma^2)
/// where A, B are the two factors and eps is machine epsilon.
template <typename Scalar>
Scalar scheme_residual_ulps(const BasicValueGrid<Scalar>& vg, const SchemeCoefficients<Scalar>& c)
{
    const auto& U = vg.values();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar worst = 0;
    for (Eigen::Index j = c.base.j + 1; j < U.cols(); ++j) {
        for (Eigen::Index i = c.base.i + 1; i < U.rows(); ++i) {
            const Scalar hm = c.h * c.mu(i, j);
            const Scalar A = std::max(Scalar(0), U(i, j) - U(i - 1, j) - hm);
            const Scalar B = std::max(Scalar(0), U(i, j) - U(i, j - 1) - hm);
            const Scalar target = c.h * c.h * c.sigma(i, j) * c.sigma(i, j);
            const Scalar res = std::abs(A * B - target);
            const Scalar scale = eps * (std::abs(U(i, j)) * (A + B) + target);
            if (res == 0) continue;
            worst = std::max(worst, scale > 0 ? res / scale : std::numeric_limits<Scalar>::infinity());
        }
    }
    return worst;
}

/// Caveat attached to grids whose field has interior line sources.
inline constexpr const char* kLineSourceCaveat =
    "interior line sources make U discontinuous across the source line; uniqueness of the viscosity "
    "solution is not established there and the scheme's selection is not certified";

}  // namespace dlpp
