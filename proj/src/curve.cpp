// SPDX-License-Identifier: Apache-2.0
#include "dlpp/curve.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dlpp {

double step_objective(const ValueGrid& vg, double sigma_x, const Point& x, double eps, double s)
{
    const Point y = x - Point((1.0 - s) * eps, s * eps);
    const double u = (y.x() < 0.0 || y.y() < 0.0) ? 0.0 : vg.interpolate(y.x(), y.y());
    return u + 2.0 * sigma_x * eps * std::sqrt(s * (1.0 - s));
}

StepChoice best_step(const ValueGrid& vg, double sigma_x, const Point& x, double eps, double s_step)
{
    const double count = 1.0 / s_step;
    const long n = std::lround(count);
    if (!(s_step > 0.0) || n < 1 || std::abs(count - static_cast<double>(n)) > 1e-9 * count) {
        std::ostringstream os;
        os << "s_step must divide 1 (got " << s_step << ")";
        throw std::invalid_argument(os.str());
    }
    StepChoice best{0.0, -std::numeric_limits<double>::infinity()};
    for (long k = 0; k <= n; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(n);
        const double value = step_objective(vg, sigma_x, x, eps, s);
        if (value > best.objective) best = {s, value};
    }
    return best;
}

MonotoneCurve extract_curve(const ValueGrid& vg, const SigmaFunction& sigma, const Point& x0,
                            const ExtractOptions& options)
{
    if (!(options.eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!vg.contains(x0.x(), x0.y())) {
        std::ostringstream os;
        os << "start point (" << x0.x() << ", " << x0.y() << ") lies outside the grid";
        throw std::out_of_range(os.str());
    }

    MonotoneCurve curve;
    curve.eps = options.eps;
    std::vector<Point> trace{x0};
    Point x = x0;

    const double R = std::max(x0.x(), x0.y());
    const long max_steps = static_cast<long>(std::ceil(4.0 * R / options.eps)) + 2;
    while (x.x() > 0.0 && x.y() > 0.0) {
        if (static_cast<long>(curve.s_star.size()) > max_steps) {
            throw std::logic_error("curve extraction exceeded its step bound");
        }
        const auto choice = best_step(vg, sigma(x), x, options.eps, options.s_step);
        curve.s_star.push_back(choice.s);
        x = (x - Point((1.0 - choice.s) * options.eps, choice.s * options.eps)).cwiseMax(0.0);
        trace.push_back(x);
    }
    trace.push_back(Point::Zero());

    curve.points.assign(trace.rbegin(), trace.rend());
    return curve;
}

MonotoneCurve extract_curve(const ValueGrid& vg, const WeightField& field, const Point& x0,
                            const ExtractOptions& options)
{
    return extract_curve(vg, [&field](const Point& x) { return field.sigma(x); }, x0, options);
}

double curve_energy(const MonotoneCurve& curve, const WeightField& field, int quadrature_points)
{
    if (quadrature_points < 1) throw std::invalid_argument("quadrature_points must be >= 1");
    double total = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const Point& p = curve.points[k - 1];
        const Point& q = curve.points[k];
        const Point d = q - p;
        if (d.x() < 0.0 || d.y() < 0.0) {
            std::ostringstream os;
            os << "curve is not monotone between points " << k - 1 << " and " << k;
            throw std::invalid_argument(os.str());
        }
        if (d.x() == 0.0 && d.y() == 0.0) continue;

        double line_bonus = 0.0;
        for (const auto& line : field.line_sources()) {
            if (line.contains(p) && line.contains(q)) line_bonus += line.strength;
        }
        const double speed = d.x() + d.y();
        const double cross = std::sqrt(d.x() * d.y());
        double acc = 0.0;
        for (int m = 0; m < quadrature_points; ++m) {
            const Point x = p + ((m + 0.5) / quadrature_points) * d;
            acc += (field.continuum_mean(x) + line_bonus) * speed + 2.0 * field.sigma(x) * cross;
        }
        total += acc / quadrature_points;
    }
    return total;
}

double CertifyTolerance::operator()(double eps, double h) const
{
    return eps_factor * eps + h_factor * std::sqrt(h);
}

EnergyReport certify(const ValueGrid& vg, const WeightField& field, const MonotoneCurve& curve,
                     const CertifyTolerance& tolerance)
{
    if (curve.points.empty()) throw std::invalid_argument("empty curve");
    EnergyReport r;
    const Point& x0 = curve.endpoint();
    r.energy = curve_energy(curve, field);
    r.reference = vg.interpolate(x0.x(), x0.y());
    r.gap = r.reference - r.energy;
    r.epsilon = curve.eps;
    r.h = vg.spacing();
    r.tolerance = tolerance(r.epsilon, r.h);
    r.pass = r.gap <= r.tolerance;
    return r;
}

}  // namespace dlpp
