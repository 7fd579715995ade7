// SPDX-License-Identifier: Apache-2.0
#include "dlpp/tasep.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dlpp {

long HeightProfile::at(long j) const
{
    if (j < j_min || j > j_max()) return std::abs(j);
    return heights[static_cast<std::size_t>(j - j_min)];
}

HeightProfile height_function(const PassageField& pf, double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
    const auto& L = pf.values();
    HeightProfile p;
    p.t = t;
    p.j_min = -static_cast<long>(L.cols() - 1);
    const long j_max = static_cast<long>(L.rows() - 1);
    p.heights.resize(static_cast<std::size_t>(j_max - p.j_min + 1));
    for (long j = p.j_min; j <= j_max; ++j) p.heights[static_cast<std::size_t>(j - p.j_min)] = std::abs(j);

    for (Eigen::Index n = 0; n < L.cols(); ++n) {
        for (Eigen::Index m = 0; m < L.rows(); ++m) {
            if (L(m, n) > t) continue;
            auto& h = p.heights[static_cast<std::size_t>(static_cast<long>(m - n) - p.j_min)];
            h = std::max(h, static_cast<long>(m + n + 2));
        }
    }
    return p;
}

GridArray<bool> covered_cells(const HeightProfile& profile, LatticeDims dims)
{
    GridArray<bool> A(dims.rows, dims.cols);
    for (Eigen::Index n = 0; n < dims.cols; ++n) {
        for (Eigen::Index m = 0; m < dims.rows; ++m) {
            A(m, n) = profile.at(static_cast<long>(m - n)) >= static_cast<long>(m + n + 2);
        }
    }
    return A;
}

GridArray<bool> sublevel_set(const PassageField& pf, double t)
{
    return pf.values() <= t;
}

DensitySample density_from_value(const ValueGrid& vg)
{
    const auto& U = vg.values();
    const Eigen::Index rows = vg.rows(), cols = vg.cols();
    DensitySample d;
    d.h = vg.spacing();
    d.rho = GridArray<double>::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
    d.defined = GridArray<bool>::Constant(rows, cols, false);
    d.chart_s.resize(rows, cols);
    d.chart_t = U;
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            d.chart_s(i, j) = static_cast<double>(i - j) * d.h;
            if (i == 0 || j == 0 || i + 1 >= rows || j + 1 >= cols) continue;
            const double d1 = (U(i + 1, j) - U(i - 1, j)) / (2.0 * d.h);
            const double d2 = (U(i, j + 1) - U(i, j - 1)) / (2.0 * d.h);
            if (!(d1 + d2 > 0.0)) continue;
            d.rho(i, j) = d1 / (d1 + d2);
            d.defined(i, j) = true;
        }
    }
    return d;
}

std::pair<double, double> kappa_bounds(double r)
{
    if (!(r > 0.0) || r > 1.0) throw DomainError("slow bond rate must lie in (0, 1]");
    const double lower = std::max(4.0, (r * r + 2.0 * (1.0 + r)) / (2.0 * r * (1.0 + r)));
    return {lower, 3.0 + 1.0 / r};
}

SlowBondReport slow_bond_estimate(double r, long N, int trials, std::uint64_t seed, int threads)
{
    if (!(r > 0.0) || r > 1.0) {
        std::ostringstream os;
        os << "slow bond rate must lie in (0, 1] (got " << r << ")";
        throw DomainError(os.str());
    }
    if (N < 1) throw std::invalid_argument("N must be >= 1");

    SlowBondReport rep;
    rep.r = r;
    rep.N = N;
    rep.trials = trials;
    rep.seed = seed;
    std::tie(rep.lower, rep.upper) = kappa_bounds(r);
    rep.naive_pde = 4.0 / r;
    rep.caveat =
        "naive_pde = 4/r is what the Hamilton-Jacobi continuum limit would predict for a diagonal source; for r < 1 "
        "it exceeds the upper bound 3 + 1/r, so that limit is invalid for sources along diagonal lines";

    TrialOptions opts;
    opts.threads = threads;
    opts.corner_only = true;
    const LatticeDims dims{N + 1, N + 1};
    const auto results = run_trials(presets::slow_bond(r), dims, N, trials, seed, opts);

    rep.per_trial.reserve(results.size());
    for (const auto& s : results) rep.per_trial.push_back(s.scaled_corner);
    const double n = static_cast<double>(rep.per_trial.size());
    rep.kappa_hat = std::accumulate(rep.per_trial.begin(), rep.per_trial.end(), 0.0) / n;
    if (rep.per_trial.size() > 1) {
        double ss = 0.0;
        for (double v : rep.per_trial) ss += (v - rep.kappa_hat) * (v - rep.kappa_hat);
        rep.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return rep;
}

}  // namespace dlpp
