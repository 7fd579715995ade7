// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "dlpp/hjb_solver.hpp"
#include "dlpp/value_grid.hpp"
#include "dlpp/weight_field.hpp"

namespace dlpp {

using Polyline = std::vector<Point>;

/// Contour {U = level} as polylines in continuum coordinates.
struct LevelSet {
    double level = 0.0;
    std::vector<Polyline> polylines;

    std::size_t vertex_count() const;
};

/// Marching squares with linear interpolation along cell edges. Corners with
/// U >= level count as inside; saddle cells are resolved by the cell mean.
/// Open chains come first (ordered by their first boundary edge), then
/// closed loops. Levels outside the grid's range give an empty set.
LevelSet level_set(const ValueGrid& vg, double level);

/// min + k (max - min) / 10 for k = 1..9.
std::vector<double> decile_levels(const ValueGrid& vg);

/// max over vertices of `from` of the distance to the polylines of `to`.
/// Returns +inf if `to` is empty while `from` is not, 0 if `from` is empty.
double one_sided_hausdorff(const LevelSet& from, const LevelSet& to);

/// max |a - b| over the points of the coarser grid, reading the finer grid at
/// the nearest grid point. Throws std::invalid_argument when the extents
/// differ by more than one grid spacing.
double sup_error(const ValueGrid& a, const ValueGrid& b);

struct ConvergenceRow {
    double h = 0.0;
    double sup_error = 0.0;
    double boundary_residual = 0.0;
    double runtime_seconds = 0.0;
};

struct ConvergenceOptions {
    Extent extent{1.0, 1.0};
    /// Spacing of the self-convergence reference, used when the field has no
    /// closed form. 0 picks a quarter of the finest h in the list.
    double reference_h = 0.0;
    int threads = 1;
};

struct ConvergenceTable {
    bool closed_form_reference = false;
    double reference_h = 0.0;
    std::vector<ConvergenceRow> rows;
};

/// Solves at each h (which must be strictly decreasing) and measures the
/// sup error against the closed form (constant fields) or a fine reference.
ConvergenceTable convergence_study(const WeightField& field, const std::vector<double>& h_list,
                                   const ConvergenceOptions& options = {});

}  // namespace dlpp
