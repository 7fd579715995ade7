// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dlpp/value_grid.hpp"
#include "dlpp/weight_field.hpp"

namespace dlpp {

/// Lattice extents: sites (i, j) with 0 <= i < rows, 0 <= j < cols, i.e.
/// an (M+1) x (N+1) lattice has rows = M+1, cols = N+1.
struct LatticeDims {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    friend bool operator==(const LatticeDims&, const LatticeDims&) = default;
};

/// One realization of the weights X(i, j).
struct LatticeSample {
    LatticeDims dims;
    long scale_N = 1;
    GridArray<double> weights;
    std::uint64_t seed = 0;
    DistributionFamily family = DistributionFamily::Exponential;
    std::string field_description;
};

/// Weight of a single site. Exponential: m * Y(i,j) with m the effective mean.
/// Geometric: floor(n * Y(i,j)) with n = nu(mu) plus nu of each active source.
double site_weight(const WeightField& field, long i, long j, long scale_N, std::uint64_t seed);

LatticeSample sample_lattice(const WeightField& field, LatticeDims dims, long scale_N, std::uint64_t seed);

/// Build a sample from explicit weights (tests, imported data).
LatticeSample make_sample(GridArray<double> weights, long scale_N = 1, std::uint64_t seed = 0,
                          DistributionFamily family = DistributionFamily::Exponential);

/// Last passage times L(i, j) from the origin, with the sample retained for
/// backtracking.
class PassageField {
  public:
    PassageField(std::shared_ptr<const LatticeSample> sample, GridArray<double> L);

    const LatticeSample& sample() const { return *sample_; }
    const GridArray<double>& values() const { return L_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return L_(i, j); }
    LatticeDims dims() const { return sample_->dims; }

  private:
    std::shared_ptr<const LatticeSample> sample_;
    GridArray<double> L_;
};

/// L(i,j) = X(i,j) + max(L(i-1,j), L(i,j-1)), out-of-lattice terms 0.
/// threads > 1 uses the anti-diagonal wavefront; results are bit-identical.
PassageField last_passage(LatticeSample sample, int threads = 1);

/// L at the far corner (rows-1, cols-1) without storing the lattice: the
/// weights are drawn on the fly and only one column of L is kept.
double last_passage_corner(const WeightField& field, LatticeDims dims, long scale_N, std::uint64_t seed);

using LatticePath = std::vector<GridIndex>;

/// Backtracked maximizing path from the origin to endpoint. At each step the
/// predecessor with the larger L is taken; ties go to (i-1, j).
LatticePath optimal_path(const PassageField& pf, GridIndex endpoint);

/// Sum of the sample weights along a path, accumulated origin first.
double path_weight(const LatticeSample& sample, const LatticePath& path);

/// L(i, j) / N on the grid of spacing 1/N.
ValueGrid scaled_field(const PassageField& pf);

struct TrialOptions {
    int threads = 1;
    /// Only compute L at the far corner (no full field retained).
    bool corner_only = false;
    /// Optional extra observable evaluated on each full passage field.
    std::function<double(const PassageField&)> observable;
};

struct TrialSummary {
    int index = 0;
    std::uint64_t seed = 0;
    double corner = 0.0;         // L(rows-1, cols-1)
    double scaled_corner = 0.0;  // corner / N
    double observable = 0.0;
};

/// Independent trials; trial k uses rng::derive_seed(base_seed, k). Results
/// are ordered by k and do not depend on the worker count.
std::vector<TrialSummary> run_trials(const WeightField& field, LatticeDims dims, long scale_N, int n_trials,
                                     std::uint64_t base_seed, const TrialOptions& options = {});

}  // namespace dlpp
