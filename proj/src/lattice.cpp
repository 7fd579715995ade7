// SPDX-License-Identifier: Apache-2.0
#include "dlpp/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dlpp/rng.hpp"
#include "dlpp/sweep.hpp"

namespace dlpp {

namespace {

[[noreturn]] void bad_site(long i, long j, double value, const char* what)
{
    std::ostringstream os;
    os << what << " at lattice site (" << i << ", " << j << ") is not finite: " << value;
    throw DomainError(os.str());
}

void check_dims(LatticeDims dims, long scale_N)
{
    if (dims.rows <= 0 || dims.cols <= 0) throw std::invalid_argument("lattice dims must be positive");
    if (scale_N < 1) throw std::invalid_argument("scale N must be >= 1");
}

}  // namespace

double site_weight(const WeightField& field, long i, long j, long scale_N, std::uint64_t seed)
{
    const double y = rng::standard_exponential(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
    if (field.family() == DistributionFamily::Exponential) {
        const double m = effective_mean(field, i, j, scale_N);
        if (!std::isfinite(m)) bad_site(i, j, m, "mean");
        return m * y;
    }

    const double h = 1.0 / static_cast<double>(scale_N);
    const Point x(static_cast<double>(i) * h, static_cast<double>(j) * h);
    const double mu = field.bulk_mean(x);
    if (!std::isfinite(mu)) bad_site(i, j, mu, "mean");
    double nu = geometric_nu(mu);
    if (i == 0 || j == 0) nu += geometric_nu(field.boundary_mean(x));
    for (const auto& line : field.line_sources()) {
        if (line.contains(i, j, h)) nu += geometric_nu(line.strength);
    }
    return std::floor(nu * y);
}

LatticeSample sample_lattice(const WeightField& field, LatticeDims dims, long scale_N, std::uint64_t seed)
{
    check_dims(dims, scale_N);
    LatticeSample s;
    s.dims = dims;
    s.scale_N = scale_N;
    s.seed = seed;
    s.family = field.family();
    s.field_description = field.description();
    s.weights.resize(dims.rows, dims.cols);
    for (Eigen::Index j = 0; j < dims.cols; ++j) {
        for (Eigen::Index i = 0; i < dims.rows; ++i) {
            s.weights(i, j) = site_weight(field, static_cast<long>(i), static_cast<long>(j), scale_N, seed);
        }
    }
    return s;
}

LatticeSample make_sample(GridArray<double> weights, long scale_N, std::uint64_t seed, DistributionFamily family)
{
    if ((weights < 0.0).any()) throw DomainError("lattice weights must be nonnegative");
    LatticeSample s;
    s.dims = {weights.rows(), weights.cols()};
    check_dims(s.dims, scale_N);
    s.scale_N = scale_N;
    s.seed = seed;
    s.family = family;
    s.field_description = "explicit";
    s.weights = std::move(weights);
    return s;
}

PassageField::PassageField(std::shared_ptr<const LatticeSample> sample, GridArray<double> L)
    : sample_(std::move(sample)), L_(std::move(L))
{
}

PassageField last_passage(LatticeSample sample, int threads)
{
    auto shared = std::make_shared<const LatticeSample>(std::move(sample));
    const auto& X = shared->weights;
    GridArray<double> L(X.rows(), X.cols());
    monotone_sweep(X.rows(), X.cols(), threads, [&](Eigen::Index i, Eigen::Index j) {
        const double left = i > 0 ? L(i - 1, j) : 0.0;
        const double down = j > 0 ? L(i, j - 1) : 0.0;
        L(i, j) = X(i, j) + std::max(left, down);
    });
    return PassageField(std::move(shared), std::move(L));
}

double last_passage_corner(const WeightField& field, LatticeDims dims, long scale_N, std::uint64_t seed)
{
    check_dims(dims, scale_N);
    std::vector<double> column(static_cast<std::size_t>(dims.rows), 0.0);
    for (Eigen::Index j = 0; j < dims.cols; ++j) {
        double below = 0.0;  // L(i-1, j)
        for (Eigen::Index i = 0; i < dims.rows; ++i) {
            auto& cell = column[static_cast<std::size_t>(i)];  // holds L(i, j-1)
            const double x = site_weight(field, static_cast<long>(i), static_cast<long>(j), scale_N, seed);
            cell = x + std::max(below, cell);
            below = cell;
        }
    }
    return column.back();
}

LatticePath optimal_path(const PassageField& pf, GridIndex endpoint)
{
    const auto& L = pf.values();
    if (endpoint.i < 0 || endpoint.j < 0 || endpoint.i >= L.rows() || endpoint.j >= L.cols()) {
        std::ostringstream os;
        os << "endpoint (" << endpoint.i << ", " << endpoint.j << ") outside lattice " << L.rows() << "x" << L.cols();
        throw std::out_of_range(os.str());
    }
    LatticePath path;
    path.reserve(static_cast<std::size_t>(endpoint.i + endpoint.j + 1));
    GridIndex p = endpoint;
    path.push_back(p);
    while (p.i > 0 || p.j > 0) {
        if (p.j == 0 || (p.i > 0 && L(p.i - 1, p.j) >= L(p.i, p.j - 1))) {
            --p.i;
        } else {
            --p.j;
        }
        path.push_back(p);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double path_weight(const LatticeSample& sample, const LatticePath& path)
{
    double sum = 0.0;
    for (const auto& p : path) sum = sample.weights(p.i, p.j) + sum;
    return sum;
}

ValueGrid scaled_field(const PassageField& pf)
{
    const double N = static_cast<double>(pf.sample().scale_N);
    ValueGrid grid(1.0 / N, pf.values() / N, {}, pf.sample().field_description);
    return grid;
}

std::vector<TrialSummary> run_trials(const WeightField& field, LatticeDims dims, long scale_N, int n_trials,
                                     std::uint64_t base_seed, const TrialOptions& options)
{
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    check_dims(dims, scale_N);
    std::vector<TrialSummary> out(static_cast<std::size_t>(n_trials));

    auto run_one = [&](int k) {
        TrialSummary s;
        s.index = k;
        s.seed = rng::derive_seed(base_seed, static_cast<std::uint64_t>(k));
        if (options.corner_only) {
            s.corner = last_passage_corner(field, dims, scale_N, s.seed);
        } else {
            auto pf = last_passage(sample_lattice(field, dims, scale_N, s.seed));
            s.corner = pf(dims.rows - 1, dims.cols - 1);
            if (options.observable) s.observable = options.observable(pf);
        }
        s.scaled_corner = s.corner / static_cast<double>(scale_N);
        out[static_cast<std::size_t>(k)] = s;
    };

    const int workers = std::clamp(options.threads, 1, n_trials);
    if (workers == 1) {
        for (int k = 0; k < n_trials; ++k) run_one(k);
        return out;
    }

    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int k = next++; k < n_trials; k = next++) run_one(k);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace dlpp
