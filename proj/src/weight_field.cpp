// SPDX-License-Identifier: Apache-2.0
#include "dlpp/weight_field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace dlpp {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& s, std::string_view what)
{
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("preset parameter '" + std::string(what) + "' is not a number: '" + s + "'");
    }
}

void require_finite_nonnegative(double v, std::string_view what)
{
    if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << what << " must be finite and >= 0 (got " << v << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

std::string to_string(DistributionFamily family)
{
    return family == DistributionFamily::Exponential ? "exponential" : "geometric";
}

DistributionFamily parse_family(std::string_view name)
{
    auto n = lower(name);
    if (n == "exponential") return DistributionFamily::Exponential;
    if (n == "geometric") return DistributionFamily::Geometric;
    throw std::invalid_argument("unknown distribution family '" + std::string(name) + "' (expected exponential|geometric)");
}

std::string to_string(LineAxis axis)
{
    switch (axis) {
    case LineAxis::Horizontal: return "horizontal";
    case LineAxis::Vertical: return "vertical";
    case LineAxis::Diagonal: return "diagonal";
    }
    return "?";
}

LineAxis parse_axis(std::string_view name)
{
    auto n = lower(name);
    if (n == "horizontal") return LineAxis::Horizontal;
    if (n == "vertical") return LineAxis::Vertical;
    if (n == "diagonal") return LineAxis::Diagonal;
    throw std::invalid_argument("unknown line axis '" + std::string(name) + "' (expected horizontal|vertical|diagonal)");
}

bool LineSource::contains(long i, long j, double h) const
{
    const long idx = std::lround(offset / h);
    switch (axis) {
    case LineAxis::Horizontal: return j == idx;
    case LineAxis::Vertical: return i == idx;
    case LineAxis::Diagonal: return i - j == idx;
    }
    return false;
}

bool LineSource::contains(const Point& x, double tol) const
{
    switch (axis) {
    case LineAxis::Horizontal: return std::abs(x.y() - offset) <= tol;
    case LineAxis::Vertical: return std::abs(x.x() - offset) <= tol;
    case LineAxis::Diagonal: return std::abs(x.x() - x.y() - offset) <= tol;
    }
    return false;
}

double BoundarySource::operator()(const Point& x) const
{
    const bool on_x = x.y() == 0.0 && x.x() >= 0.0;
    const bool on_y = x.x() == 0.0 && x.y() >= 0.0;
    if (on_x && on_y) return std::max(x_axis, y_axis);
    if (on_x) return x_axis;
    if (on_y) return y_axis;
    return 0.0;
}

WeightField::WeightField(DistributionFamily family, Evaluator bulk_mean, std::string description)
    : family_(family), bulk_(std::move(bulk_mean)), description_(std::move(description))
{
}

WeightField WeightField::constant(double mu, DistributionFamily family)
{
    require_finite_nonnegative(mu, "constant mean");
    std::ostringstream os;
    os << "constant(" << mu << ")";
    WeightField f(family, [mu](const Point&) { return mu; }, os.str());
    f.constant_mu_ = mu;
    return f;
}

WeightField& WeightField::set_boundary_source(BoundarySource source)
{
    require_finite_nonnegative(source.x_axis, "boundary source (x axis)");
    require_finite_nonnegative(source.y_axis, "boundary source (y axis)");
    boundary_ = source;
    return *this;
}

WeightField& WeightField::add_line_source(LineSource source)
{
    require_finite_nonnegative(source.strength, "line source strength");
    if (!std::isfinite(source.offset)) throw DomainError("line source offset must be finite");
    lines_.push_back(source);
    return *this;
}

WeightField& WeightField::set_description(std::string description)
{
    description_ = std::move(description);
    return *this;
}

WeightField& WeightField::set_family(DistributionFamily family)
{
    family_ = family;
    return *this;
}

double WeightField::bulk_mean(const Point& x) const
{
    if (!bulk_) return 0.0;
    const double mu = bulk_(x);
    if (mu < 0.0) {
        std::ostringstream os;
        os << "bulk mean is negative at (" << x.x() << ", " << x.y() << "): " << mu;
        throw DomainError(os.str());
    }
    return mu;
}

double WeightField::sigma(const Point& x) const
{
    return sigma_from_mean(family_, bulk_mean(x));
}

double WeightField::continuum_mean(const Point& x) const
{
    return bulk_mean(x) + boundary_(x);
}

bool WeightField::has_diagonal_source() const
{
    return std::any_of(lines_.begin(), lines_.end(), [](const LineSource& l) { return l.axis == LineAxis::Diagonal; });
}

bool WeightField::has_interior_sources() const
{
    return std::any_of(lines_.begin(), lines_.end(), [](const LineSource& l) { return l.strength > 0.0; });
}

WeightField WeightField::bulk_only() const
{
    WeightField f = *this;
    f.boundary_ = {};
    f.lines_.clear();
    return f;
}

bool WeightField::is_constant(double* mu) const
{
    if (constant_mu_ < 0.0 || !boundary_.empty() || has_interior_sources()) return false;
    if (mu) *mu = constant_mu_;
    return true;
}

double sigma_from_mean(DistributionFamily family, double mu)
{
    require_finite_nonnegative(mu, "mean");
    if (family == DistributionFamily::Exponential) return mu;
    return std::sqrt(mu * (1.0 + mu));
}

double geometric_nu(double mu)
{
    require_finite_nonnegative(mu, "mean");
    if (mu == 0.0) return 0.0;
    // log1p(1/mu) == log(1+mu) - log(mu), without the cancellation for large mu.
    return 1.0 / std::log1p(1.0 / mu);
}

double geometric_q_from_nu(double nu)
{
    if (nu <= 0.0) return 1.0;
    return -std::expm1(-1.0 / nu);
}

double effective_mean_at(const WeightField& field, long i, long j, double h)
{
    const Point x(static_cast<double>(i) * h, static_cast<double>(j) * h);
    double mu = field.bulk_mean(x);
    if (i == 0 || j == 0) mu += field.boundary_mean(x);
    for (const auto& line : field.line_sources()) {
        if (line.contains(i, j, h)) mu += line.strength;
    }
    return mu;
}

double effective_mean(const WeightField& field, long i, long j, long N)
{
    return effective_mean_at(field, i, j, 1.0 / static_cast<double>(N));
}

namespace presets {

WeightField lambda1()
{
    return WeightField(
        DistributionFamily::Exponential,
        [](const Point& x) { return (x.x() >= 0.5 || x.y() >= 0.5) ? 1.0 : 0.0; }, "lambda1");
}

WeightField lambda2()
{
    return WeightField(
        DistributionFamily::Exponential,
        [](const Point& x) {
            const Point c1(0.25, 0.75), c2(0.75, 0.25);
            return std::exp(-10.0 * (x - c1).squaredNorm()) + std::exp(-10.0 * (x - c2).squaredNorm());
        },
        "lambda2");
}

WeightField lambda3()
{
    return WeightField(
        DistributionFamily::Exponential,
        [](const Point& x) {
            const Point c1(1.0, 0.0), c2(0.0, 1.0);
            return ((x - c1).squaredNorm() <= 0.49 || (x - c2).squaredNorm() <= 0.49) ? 0.5 : 1.0;
        },
        "lambda3");
}

WeightField geo_q()
{
    return WeightField(
        DistributionFamily::Geometric,
        [](const Point& x) {
            const double q = (x.x() >= 0.5 || x.y() >= 0.5) ? 0.5 : 1.0;
            return (1.0 - q) / q;
        },
        "geo_q");
}

WeightField slow_bond(double r)
{
    if (!(r > 0.0) || r > 1.0 || !std::isfinite(r)) {
        std::ostringstream os;
        os << "slow bond rate must lie in (0, 1] (got " << r << ")";
        throw DomainError(os.str());
    }
    WeightField f = WeightField::constant(1.0, DistributionFamily::Exponential);
    f.add_line_source({LineAxis::Diagonal, 0.0, 1.0 / r - 1.0});
    std::ostringstream os;
    os << "slow_bond(" << r << ")";
    f.set_description(os.str());
    return f;
}

WeightField line_source(LineAxis axis, double offset, double strength)
{
    WeightField f = WeightField::constant(1.0, DistributionFamily::Exponential);
    f.add_line_source({axis, offset, strength});
    std::ostringstream os;
    os << "line_source(" << to_string(axis) << "," << offset << "," << strength << ")";
    f.set_description(os.str());
    return f;
}

}  // namespace presets

std::vector<std::string> preset_names()
{
    return {"lambda1", "lambda2", "lambda3", "geo_q", "slow_bond(r)", "line_source(axis,offset,strength)",
            "constant(mu)"};
}

WeightField preset(std::string_view spec)
{
    const std::string s = trim(spec);
    std::string name = s;
    std::vector<std::string> args;
    if (auto open = s.find('('); open != std::string::npos) {
        if (s.back() != ')') throw std::invalid_argument("malformed preset '" + s + "'");
        name = trim(s.substr(0, open));
        std::stringstream inner(s.substr(open + 1, s.size() - open - 2));
        std::string item;
        while (std::getline(inner, item, ',')) args.push_back(trim(item));
    }
    name = lower(name);

    auto expect_args = [&](std::size_t n) {
        if (args.size() != n) {
            std::ostringstream os;
            os << "preset '" << name << "' takes " << n << " parameter(s), got " << args.size();
            throw std::invalid_argument(os.str());
        }
    };

    if (name == "lambda1") { expect_args(0); return presets::lambda1(); }
    if (name == "lambda2") { expect_args(0); return presets::lambda2(); }
    if (name == "lambda3") { expect_args(0); return presets::lambda3(); }
    if (name == "geo_q") { expect_args(0); return presets::geo_q(); }
    if (name == "slow_bond") {
        expect_args(1);
        return presets::slow_bond(parse_number(args[0], "r"));
    }
    if (name == "line_source") {
        expect_args(3);
        return presets::line_source(parse_axis(args[0]), parse_number(args[1], "offset"),
                                    parse_number(args[2], "strength"));
    }
    if (name == "constant") {
        expect_args(1);
        return WeightField::constant(parse_number(args[0], "mu"));
    }

    std::ostringstream os;
    os << "unknown preset '" << name << "'; available presets:";
    for (const auto& p : preset_names()) os << ' ' << p;
    throw std::invalid_argument(os.str());
}

bool Region::contains(const Point& x) const
{
    switch (kind) {
    case Kind::Rect: return x.x() >= a && x.x() <= c && x.y() >= b && x.y() <= d;
    case Kind::Disk: return (x - Point(a, b)).squaredNorm() <= c * c;
    case Kind::HalfPlane: return a * x.x() + b * x.y() >= c;
    }
    return false;
}

WeightField piecewise(DistributionFamily family, std::vector<Region> regions, double default_mu)
{
    require_finite_nonnegative(default_mu, "default_mu");
    for (const auto& r : regions) require_finite_nonnegative(r.mu, "region mu");
    std::ostringstream os;
    os << "piecewise(" << regions.size() << " regions, default " << default_mu << ")";
    return WeightField(
        family,
        [regions = std::move(regions), default_mu](const Point& x) {
            for (const auto& r : regions) {
                if (r.contains(x)) return r.mu;
            }
            return default_mu;
        },
        os.str());
}

}  // namespace dlpp
