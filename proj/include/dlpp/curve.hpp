// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "dlpp/value_grid.hpp"
#include "dlpp/weight_field.hpp"

namespace dlpp {

/// Coordinatewise non-decreasing polyline, stored origin first.
struct MonotoneCurve {
    std::vector<Point> points;
    double eps = 0.0;
    /// Maximizing s of each extraction step, in the order the steps were taken
    /// (from the endpoint back towards the origin).
    std::vector<double> s_star;

    const Point& endpoint() const { return points.back(); }
};

using SigmaFunction = std::function<double(const Point&)>;

struct StepChoice {
    double s = 0.0;
    double objective = 0.0;
};

/// U(x - ((1-s) eps, s eps)) + 2 sigma eps sqrt(s (1-s)); U is bilinearly
/// interpolated and read as 0 outside the closed quadrant.
double step_objective(const ValueGrid& vg, double sigma_x, const Point& x, double eps, double s);

/// Exhaustive search over s = 0, s_step, ..., 1. Ties keep the smallest s.
StepChoice best_step(const ValueGrid& vg, double sigma_x, const Point& x, double eps, double s_step);

struct ExtractOptions {
    double eps = 0.01;
    double s_step = 0.01;
};

/// Traces an eps-optimal maximizing curve from x0 back to the origin:
/// x_{k+1} = (x_k - (1 - s*, s*) eps)_+ until x_k reaches an axis, then the
/// origin is appended. Pass the sigma of whichever field produced vg (a
/// mollified pair works the same way).
MonotoneCurve extract_curve(const ValueGrid& vg, const SigmaFunction& sigma, const Point& x0,
                            const ExtractOptions& options = {});

MonotoneCurve extract_curve(const ValueGrid& vg, const WeightField& field, const Point& x0,
                            const ExtractOptions& options = {});

/// J(curve) = sum over segments of int_0^1 l(p + t d, d) dt with
/// l(x, p) = mu(x)(p1 + p2) + 2 sigma(x) sqrt(p1 p2), by composite midpoint
/// quadrature. The boundary source enters on axis segments and a line source
/// on segments lying along it. Throws std::invalid_argument if the curve is
/// not monotone.
double curve_energy(const MonotoneCurve& curve, const WeightField& field, int quadrature_points = 16);

/// Gap tolerance tol(eps, h) = eps_factor * eps + h_factor * sqrt(h).
struct CertifyTolerance {
    double eps_factor = 5.0;
    double h_factor = 1.0;

    double operator()(double eps, double h) const;
};

struct EnergyReport {
    double energy = 0.0;
    double reference = 0.0;  // U^h(x0)
    double gap = 0.0;        // reference - energy
    double epsilon = 0.0;
    double h = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

EnergyReport certify(const ValueGrid& vg, const WeightField& field, const MonotoneCurve& curve,
                     const CertifyTolerance& tolerance = {});

}  // namespace dlpp
