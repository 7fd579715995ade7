// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <barrier>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace dlpp {

/// Visit every (i, j) of a rows x cols grid so that (i-1, j) and (i, j-1)
/// are visited before (i, j).
///
/// threads <= 1 runs a column-major sweep. Otherwise the grid is processed
/// by anti-diagonals i + j = d, each diagonal split across the workers, with
/// a barrier between diagonals. Each visit sees the same inputs in both
/// modes, so an update that is a pure function of its neighbours yields
/// bit-identical grids.
template <typename Visit>
void monotone_sweep(Eigen::Index rows, Eigen::Index cols, int threads, Visit&& visit)
{
    if (rows <= 0 || cols <= 0) return;
    if (threads <= 1) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (Eigen::Index i = 0; i < rows; ++i) visit(i, j);
        }
        return;
    }

    const Eigen::Index diagonals = rows + cols - 1;
    std::barrier sync(threads);
    auto worker = [&](int t) {
        for (Eigen::Index d = 0; d < diagonals; ++d) {
            const Eigen::Index i_lo = std::max<Eigen::Index>(0, d - (cols - 1));
            const Eigen::Index i_hi = std::min<Eigen::Index>(d, rows - 1);
            const Eigen::Index n = i_hi - i_lo + 1;
            const Eigen::Index chunk = (n + threads - 1) / threads;
            const Eigen::Index begin = i_lo + chunk * t;
            const Eigen::Index end = std::min(i_hi + 1, begin + chunk);
            for (Eigen::Index i = begin; i < end; ++i) visit(i, d - i);
            sync.arrive_and_wait();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads - 1));
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
    worker(0);
}

}  // namespace dlpp
