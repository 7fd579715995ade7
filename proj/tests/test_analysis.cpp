// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "dlpp/analysis.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/rng.hpp"

using namespace dlpp;

namespace {

ValueGrid linear_grid(double h, Eigen::Index n)
{
    GridArray<double> U(n + 1, n + 1);
    for (Eigen::Index j = 0; j <= n; ++j) {
        for (Eigen::Index i = 0; i <= n; ++i) U(i, j) = static_cast<double>(i) * h + static_cast<double>(j) * h;
    }
    return ValueGrid(h, U);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double median_sup_error(long N, const ValueGrid& solved)
{
    TrialOptions opts;
    opts.observable = [&solved](const PassageField& pf) { return sup_error(scaled_field(pf), solved); };
    std::vector<double> errors;
    for (const auto& t : run_trials(WeightField::constant(1.0), {N + 1, N + 1}, N, 5, 314, opts)) {
        errors.push_back(t.observable);
    }
    return median(errors);
}

}  // namespace

TEST_CASE("level_set")
{
    SUBCASE("linear function")
    {
        const double h = 0.05;
        const auto ls = level_set(linear_grid(h, 20), 1.0);
        REQUIRE(ls.polylines.size() == 1);
        const auto& line = ls.polylines.front();
        const Point a = line.front(), b = line.back();
        const bool forward = (a - Point(1, 0)).norm() <= h && (b - Point(0, 1)).norm() <= h;
        const bool backward = (a - Point(0, 1)).norm() <= h && (b - Point(1, 0)).norm() <= h;
        CHECK((forward || backward));
        for (const auto& p : line) CHECK(p.x() + p.y() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("levels outside the range are empty")
    {
        const auto vg = linear_grid(0.1, 10);
        CHECK(level_set(vg, -0.5).polylines.empty());
        CHECK(level_set(vg, 2.5).polylines.empty());
        CHECK(level_set(vg, -0.5).vertex_count() == 0);
    }
    SUBCASE("constant field contour follows the closed form")
    {
        const double h = 1.0 / 500;
        const auto ls = level_set(solve(WeightField::constant(1.0), h, {1.0, 1.0}), 1.0);
        REQUIRE(ls.vertex_count() > 0);
        // Exact level curve: sqrt(x1) + sqrt(x2) = 1, i.e. (s^2, (1 - s)^2) for s in [0, 1].
        std::vector<Point> exact;
        for (int k = 0; k <= 200000; ++k) {
            const double s = k / 200000.0;
            exact.emplace_back(s * s, (1.0 - s) * (1.0 - s));
        }
        double worst = 0.0;
        for (const auto& line : ls.polylines) {
            for (const auto& p : line) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& q : exact) best = std::min(best, (p - q).norm());
                worst = std::max(worst, best);
            }
        }
        MESSAGE("max distance to the exact contour: " << worst);
        CHECK(worst <= 2.0 * h);
    }
    SUBCASE("vertices re-evaluate to their level")
    {
        for (const char* name : {"lambda1", "lambda2", "lambda3", "geo_q"}) {
            const auto vg = solve(preset(name), 1.0 / 200, {1.0, 1.0});
            for (double t : decile_levels(vg)) {
                const auto ls = level_set(vg, t);
                CHECK(ls.level == t);
                for (const auto& line : ls.polylines) {
                    CHECK(line.size() >= 2);
                    for (const auto& p : line) CHECK(std::abs(vg.interpolate(p.x(), p.y()) - t) <= 1e-9);
                }
            }
        }
    }
    SUBCASE("deterministic")
    {
        const auto vg = solve(preset("lambda3"), 1.0 / 100, {1.0, 1.0});
        const auto a = level_set(vg, 1.0), b = level_set(vg, 1.0);
        REQUIRE(a.polylines.size() == b.polylines.size());
        for (std::size_t k = 0; k < a.polylines.size(); ++k) CHECK(a.polylines[k] == b.polylines[k]);
    }
}

TEST_CASE("decile levels")
{
    const auto levels = decile_levels(linear_grid(0.1, 10));
    REQUIRE(levels.size() == 9);
    CHECK(levels.front() == doctest::Approx(0.2));
    CHECK(levels.back() == doctest::Approx(1.8));
}

TEST_CASE("one_sided_hausdorff")
{
    LevelSet a{1.0, {{Point(0, 0), Point(1, 0)}}};
    LevelSet b{1.0, {{Point(0, 0.5), Point(2, 0.5)}}};
    CHECK(one_sided_hausdorff(a, b) == doctest::Approx(0.5));
    CHECK(one_sided_hausdorff(b, a) == doctest::Approx(std::sqrt(1.25)));
    CHECK(one_sided_hausdorff(LevelSet{}, a) == 0.0);
    CHECK(std::isinf(one_sided_hausdorff(a, LevelSet{})));
}

TEST_CASE("sup_error")
{
    const auto vg = solve(preset("lambda2"), 0.01, {1.0, 1.0});
    CHECK(sup_error(vg, vg) == 0.0);
    CHECK(sup_error(linear_grid(0.1, 10), linear_grid(0.05, 20)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(sup_error(linear_grid(0.1, 10), linear_grid(0.1, 5)), std::invalid_argument);

    const auto solved = solve(WeightField::constant(1.0), 1.0 / 1000, {1.0, 1.0});
    const auto one = scaled_field(last_passage(sample_lattice(WeightField::constant(1.0), {1001, 1001}, 1000, 42)));
    CHECK(sup_error(one, solved) <= 0.25);

    const double coarse = median_sup_error(200, solved);
    const double fine = median_sup_error(1000, solved);
    MESSAGE("median sup_error N=200: " << coarse << ", N=1000: " << fine);
    CHECK(fine < coarse);
}

TEST_CASE("convergence_study")
{
    SUBCASE("constant field against the closed form")
    {
        const auto table = convergence_study(WeightField::constant(1.0), {1.0 / 125, 1.0 / 250, 1.0 / 500});
        CHECK(table.closed_form_reference);
        REQUIRE(table.rows.size() == 3);
        CHECK(table.rows[1].sup_error < table.rows[0].sup_error);
        CHECK(table.rows[2].sup_error < table.rows[1].sup_error);
        CHECK(table.rows[0].boundary_residual / table.rows[2].boundary_residual >= 1.8);
    }
    SUBCASE("zero field")
    {
        const auto table = convergence_study(WeightField::constant(0.0), {0.1, 0.05, 0.01});
        for (const auto& r : table.rows) {
            CHECK(r.sup_error == 0.0);
            CHECK(r.boundary_residual == 0.0);
        }
    }
    SUBCASE("lambda1 self-convergence")
    {
        ConvergenceOptions opts;
        opts.reference_h = 1.0 / 2000;
        const auto table = convergence_study(preset("lambda1"), {1.0 / 125, 1.0 / 250, 1.0 / 500}, opts);
        CHECK_FALSE(table.closed_form_reference);
        CHECK(table.reference_h == opts.reference_h);
        CHECK(table.rows[1].sup_error < table.rows[0].sup_error);
        CHECK(table.rows[2].sup_error < table.rows[1].sup_error);
    }
    SUBCASE("h_list must decrease")
    {
        CHECK_THROWS_AS(convergence_study(WeightField::constant(1.0), {0.01, 0.02}), std::invalid_argument);
        CHECK_THROWS_AS(convergence_study(WeightField::constant(1.0), {}), std::invalid_argument);
    }
}
