// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dlpp {

/// Point in the closed quadrant [0,inf)^2.
using Point = Eigen::Vector2d;

enum class DistributionFamily { Exponential, Geometric };

std::string to_string(DistributionFamily family);
DistributionFamily parse_family(std::string_view name);

/// Raised for out-of-domain parameters (negative or non-finite means, bad r, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

enum class LineAxis { Horizontal, Vertical, Diagonal };

std::string to_string(LineAxis axis);
LineAxis parse_axis(std::string_view name);

/// Additive mean bonus on the lattice row (horizontal, x2 = offset), column
/// (vertical, x1 = offset) or diagonal (x1 - x2 = offset) nearest the offset.
struct LineSource {
    LineAxis axis = LineAxis::Horizontal;
    double offset = 0.0;
    double strength = 0.0;

    /// Whether lattice site (i,j) at spacing h lies on this source's trace.
    /// The trace index is round(offset / h).
    bool contains(long i, long j, double h) const;

    /// Continuum membership, used when integrating along curves.
    bool contains(const Point& x, double tol = 1e-12) const;
};

/// Constant extra mean on each coordinate axis. Zero on the open quadrant.
struct BoundarySource {
    double x_axis = 0.0;  // on {x2 = 0}
    double y_axis = 0.0;  // on {x1 = 0}

    double operator()(const Point& x) const;
    bool empty() const { return x_axis == 0.0 && y_axis == 0.0; }
};

/// Macroscopic description of the weights: bulk mean, boundary source,
/// interior line sources, and the distribution family.
class WeightField {
  public:
    using Evaluator = std::function<double(const Point&)>;

    WeightField() = default;
    WeightField(DistributionFamily family, Evaluator bulk_mean, std::string description);

    static WeightField constant(double mu, DistributionFamily family = DistributionFamily::Exponential);

    DistributionFamily family() const { return family_; }
    const std::string& description() const { return description_; }
    const BoundarySource& boundary_source() const { return boundary_; }
    const std::vector<LineSource>& line_sources() const { return lines_; }

    WeightField& set_boundary_source(BoundarySource source);
    WeightField& add_line_source(LineSource source);
    WeightField& set_description(std::string description);
    WeightField& set_family(DistributionFamily family);

    /// Bulk mean mu(x). Throws DomainError if the evaluator returns a negative value.
    double bulk_mean(const Point& x) const;
    double boundary_mean(const Point& x) const { return boundary_(x); }
    /// sigma(x) derived from the bulk mean and the family.
    double sigma(const Point& x) const;
    /// mu(x) + mu_s(x); line sources excluded (they only exist on a lattice).
    double continuum_mean(const Point& x) const;

    /// True when a diagonal line source is configured. Such fields lie outside
    /// the hypotheses under which the continuum limit holds.
    bool has_diagonal_source() const;
    bool has_interior_sources() const;

    /// Copy of the field with boundary and line sources removed.
    WeightField bulk_only() const;

    /// True when the bulk mean is the constant mu everywhere and there are no
    /// sources (the closed-form case).
    bool is_constant(double* mu = nullptr) const;

  private:
    DistributionFamily family_ = DistributionFamily::Exponential;
    Evaluator bulk_;
    BoundarySource boundary_;
    std::vector<LineSource> lines_;
    std::string description_;
    double constant_mu_ = -1.0;  // >= 0 only for constant()
};

/// sigma as a function of the mean: Exponential -> mu, Geometric -> sqrt(mu (1 + mu)).
double sigma_from_mean(DistributionFamily family, double mu);

/// Scale nu with floor(nu * Y) geometric of mean mu for Y ~ Exp(1); nu(0) = 0.
double geometric_nu(double mu);

/// Geometric parameter q = 1 - exp(-1/nu).
double geometric_q_from_nu(double nu);

/// Mean of lattice site (i,j) at spacing h: bulk mean at (ih, jh), plus the
/// boundary source when i == 0 or j == 0, plus every line source whose trace
/// contains (i,j).
double effective_mean_at(const WeightField& field, long i, long j, double h);

/// Same as effective_mean_at with h = 1/N.
double effective_mean(const WeightField& field, long i, long j, long N);

/// Named presets. Accepted forms: lambda1, lambda2, lambda3, geo_q,
/// slow_bond(r), line_source(axis,offset,strength), constant(mu).
WeightField preset(std::string_view spec);

/// Names accepted by preset(), for error messages and help text.
std::vector<std::string> preset_names();

namespace presets {
WeightField lambda1();
WeightField lambda2();
WeightField lambda3();
WeightField geo_q();
WeightField slow_bond(double r);
WeightField line_source(LineAxis axis, double offset, double strength);
}  // namespace presets

/// Piecewise-constant bulk mean built from simple regions; the first region
/// containing a point wins, otherwise default_mu.
struct Region {
    enum class Kind { Rect, Disk, HalfPlane };
    Kind kind = Kind::Rect;
    // Rect: [a, c] x [b, d]. Disk: center (a, b), radius c. HalfPlane: a x1 + b x2 >= c.
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double mu = 0.0;

    bool contains(const Point& x) const;
};

WeightField piecewise(DistributionFamily family, std::vector<Region> regions, double default_mu);

}  // namespace dlpp
