// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dlpp/lattice.hpp"
#include "dlpp/value_grid.hpp"

namespace dlpp {

/// Height profile h_j(t) read off the growth cluster A(t) = {L <= t}.
///
/// Anchoring: h_j(0) = |j| (empty cluster, the wedge), and each covered cell
/// on diagonal j = m - n lifts h_j by 2, so h_j = max(|j|, m + n + 2) over
/// covered (m, n). With one-based cells (m + 1, n + 1) this is exactly
///   A(t) = {(m, n) : h_{m-n}(t) >= (m + 1) + (n + 1)}.
struct HeightProfile {
    double t = 0.0;
    long j_min = 0;
    std::vector<long> heights;  // heights[j - j_min]

    long j_max() const { return j_min + static_cast<long>(heights.size()) - 1; }
    /// h_j, continuing the wedge |j| outside the stored range.
    long at(long j) const;
};

HeightProfile height_function(const PassageField& pf, double t);

/// Sub-level set {L <= t} reconstructed from a height profile (true = covered).
GridArray<bool> covered_cells(const HeightProfile& profile, LatticeDims dims);

/// Direct sub-level set {L <= t}.
GridArray<bool> sublevel_set(const PassageField& pf, double t);

/// rho = D1 U / (D1 U + D2 U) with central differences at interior points.
/// Boundary points and points with D1 U + D2 U <= 0 are undefined (NaN).
struct DensitySample {
    double h = 1.0;
    GridArray<double> rho;
    GridArray<bool> defined;
    /// (s, t) chart of each point: s = x1 - x2, t = U(x).
    GridArray<double> chart_s;
    GridArray<double> chart_t;
};

DensitySample density_from_value(const ValueGrid& vg);

/// Inverse-current bounds max{4, (r^2 + 2(1 + r)) / (2r(1 + r))} <= kappa(r) <= 3 + 1/r.
std::pair<double, double> kappa_bounds(double r);

struct SlowBondReport {
    double r = 1.0;
    long N = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double kappa_hat = 0.0;
    double std_error = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    /// 4/r: what the continuum equation would predict. Not valid for
    /// diagonal sources and reported only for contrast.
    double naive_pde = 0.0;
    std::string caveat;
    std::vector<double> per_trial;
};

/// Mean of L(N, N)/N over independent slow-bond realizations (exponential
/// weights, mean 1/r on the diagonal), computed in low-memory mode.
SlowBondReport slow_bond_estimate(double r, long N, int trials, std::uint64_t seed, int threads = 1);

}  // namespace dlpp
