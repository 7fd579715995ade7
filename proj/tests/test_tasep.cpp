// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"

#include "dlpp/hjb_solver.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/tasep.hpp"

using namespace dlpp;

namespace {

// Heights from counting covered cells per diagonal: h_j = |j| + 2 #{(m,n) : m - n = j, L(m,n) <= t}.
long counted_height(const PassageField& pf, long j, double t)
{
    long count = 0;
    for (Eigen::Index n = 0; n < pf.values().cols(); ++n) {
        const Eigen::Index m = n + j;
        if (m >= 0 && m < pf.values().rows() && pf(m, n) <= t) ++count;
    }
    return std::abs(j) + 2 * count;
}

PassageField two_by_two()
{
    GridArray<double> w(2, 2);
    w << 1, 3, 2, 4;  // L(0,0)=1, L(1,0)=3, L(0,1)=4, L(1,1)=8
    return last_passage(make_sample(w));
}

}  // namespace

TEST_CASE("height_function")
{
    SUBCASE("wedge at time zero")
    {
        const auto pf = last_passage(sample_lattice(WeightField::constant(1.0), {7, 5}, 7, 3));
        const auto p = height_function(pf, 0.0);
        CHECK(p.j_min == -4);
        CHECK(p.j_max() == 6);
        for (long j = -10; j <= 10; ++j) CHECK(p.at(j) == std::abs(j));
    }
    SUBCASE("two by two at t = 3.5")
    {
        const auto pf = two_by_two();
        REQUIRE(pf(1, 1) == 8.0);
        REQUIRE(pf(0, 1) == 4.0);
        const auto p = height_function(pf, 3.5);
        CHECK(p.at(-2) == 2);
        CHECK(p.at(-1) == 1);
        CHECK(p.at(0) == 2);
        CHECK(p.at(1) == 3);
        CHECK(p.at(2) == 2);
        const auto A = covered_cells(p, pf.dims());
        CHECK(A(0, 0));
        CHECK(A(1, 0));
        CHECK_FALSE(A(0, 1));
        CHECK_FALSE(A(1, 1));
    }
    SUBCASE("matches the per-diagonal count, steps are +-1, grows in t")
    {
        std::mt19937_64 gen(5);
        for (int draw = 0; draw < 20; ++draw) {
            const auto pf = last_passage(sample_lattice(preset("lambda3"), {9, 12}, 10, gen()));
            std::vector<long> prev;
            for (double t : {0.0, 0.4, 1.1, 2.5, 4.0, 9.0}) {
                const auto p = height_function(pf, t);
                for (long j = p.j_min - 2; j <= p.j_max() + 2; ++j) {
                    CHECK(p.at(j) == counted_height(pf, j, t));
                    CHECK(std::abs(p.at(j + 1) - p.at(j)) == 1);
                }
                if (!prev.empty()) {
                    for (std::size_t k = 0; k < prev.size(); ++k) CHECK(p.heights[k] >= prev[k]);
                }
                prev = p.heights;
            }
        }
    }
}

TEST_CASE("sub-level set reconstructed from heights")
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 50; ++draw) {
        const auto pf = last_passage(sample_lattice(WeightField::constant(1.0), {6, 6}, 6, gen()));
        const double top = pf(5, 5);
        for (int k = 0; k < 5; ++k) {
            const double t = 1.1 * top * u(gen);
            CHECK((covered_cells(height_function(pf, t), pf.dims()) == sublevel_set(pf, t)).all());
        }
    }
}

TEST_CASE("density_from_value")
{
    SUBCASE("diagonal of the constant field")
    {
        const auto d = density_from_value(solve(WeightField::constant(1.0), 1.0 / 500, {1.0, 1.0}));
        for (Eigen::Index i = 1; i < 500; ++i) {
            REQUIRE(d.defined(i, i));
            CHECK(std::abs(d.rho(i, i) - 0.5) <= 0.01);
        }
    }
    SUBCASE("linear function")
    {
        const double h = 0.05;
        GridArray<double> U(21, 21);
        for (Eigen::Index j = 0; j < 21; ++j) {
            for (Eigen::Index i = 0; i < 21; ++i) U(i, j) = 2.0 * i * h + 2.0 * j * h;
        }
        const auto d = density_from_value(ValueGrid(h, U));
        CHECK(d.defined.count() == 19 * 19);
        for (Eigen::Index j = 1; j < 20; ++j) {
            for (Eigen::Index i = 1; i < 20; ++i) CHECK(d.rho(i, j) == doctest::Approx(0.5).epsilon(1e-12));
        }
        CHECK(d.chart_s(5, 2) == doctest::Approx(3 * h));
        CHECK(d.chart_t(5, 2) == U(5, 2));
    }
    SUBCASE("off-diagonal point of the constant field")
    {
        const double h = 1.0 / 500;
        const auto exact = density_from_value(closed_form_grid(1.0, 1.0, h, {1.0, 1.5}));
        CHECK(exact.rho(125, 500) == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
        const auto numeric = density_from_value(solve(WeightField::constant(1.0), h, {1.0, 1.5}));
        CHECK(std::abs(numeric.rho(125, 500) - 2.0 / 3.0) <= 0.01);
    }
    SUBCASE("flat regions are undefined")
    {
        const auto d = density_from_value(solve(preset("lambda1"), 0.01, {1.0, 1.0}));
        CHECK_FALSE(d.defined(20, 20));
        CHECK(std::isnan(d.rho(20, 20)));
        CHECK(d.defined(80, 80));
    }
    SUBCASE("bounded in [0, 1] on every preset")
    {
        for (const char* name : {"lambda1", "lambda2", "lambda3", "geo_q"}) {
            const auto d = density_from_value(solve(preset(name), 1.0 / 400, {1.0, 1.0}));
            CHECK(d.defined.count() > 0);
            for (Eigen::Index j = 0; j < d.rho.cols(); ++j) {
                for (Eigen::Index i = 0; i < d.rho.rows(); ++i) {
                    if (!d.defined(i, j)) continue;
                    CHECK(d.rho(i, j) >= 0.0);
                    CHECK(d.rho(i, j) <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("kappa bounds")
{
    const auto [lo, hi] = kappa_bounds(0.5);
    CHECK(lo == 4.0);
    CHECK(hi == 5.0);
    const auto [lo1, hi1] = kappa_bounds(1.0);
    CHECK(lo1 == 4.0);
    CHECK(hi1 == 4.0);
    const auto [lo2, hi2] = kappa_bounds(0.1);
    CHECK(lo2 == doctest::Approx((0.01 + 2.2) / (0.2 * 1.1)));
    CHECK(hi2 == doctest::Approx(13.0));
    CHECK_THROWS_AS(kappa_bounds(0.0), DomainError);
}

TEST_CASE("slow bond estimate")
{
    CHECK_THROWS_AS(slow_bond_estimate(0.0, 100, 2, 1), DomainError);
    CHECK_THROWS_AS(slow_bond_estimate(-0.5, 100, 2, 1), DomainError);

    const auto r1 = slow_bond_estimate(1.0, 1000, 5, 42, 4);
    CHECK(r1.kappa_hat >= 3.8);
    CHECK(r1.kappa_hat <= 4.2);
    CHECK(r1.naive_pde == 4.0);
    CHECK(r1.per_trial.size() == 5);

    double prev = std::numeric_limits<double>::infinity();
    for (double r : {0.25, 0.5, 0.75, 1.0}) {
        const auto rep = slow_bond_estimate(r, 2000, 10, 7, 4);
        MESSAGE("r = " << r << " kappa_hat = " << rep.kappa_hat << " +- " << rep.std_error);
        CHECK(rep.kappa_hat <= prev);
        CHECK(rep.kappa_hat >= rep.lower - 0.2);
        CHECK(rep.kappa_hat <= rep.upper + 0.2);
        CHECK(rep.naive_pde == doctest::Approx(4.0 / r));
        CHECK_FALSE(rep.caveat.empty());
        prev = rep.kappa_hat;
    }
}
