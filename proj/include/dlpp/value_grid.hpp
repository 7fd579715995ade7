// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dlpp {

template <typename Scalar>
using GridArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Index pair (i, j) with i along x1 and j along x2.
struct GridIndex {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// Values on the uniform grid h*{0..n1} x h*{0..n2}. Entry (i, j) sits at
/// the continuum point (i h, j h). A non-zero base marks a relative value
/// field W(z, .) with z = base * h.
template <typename Scalar>
class BasicValueGrid {
  public:
    using Array = GridArray<Scalar>;

    BasicValueGrid() = default;
    BasicValueGrid(Scalar h, Array values, GridIndex base = {}, std::string description = {})
        : h_(h), values_(std::move(values)), base_(base), description_(std::move(description))
    {
        if (!(h_ > Scalar(0))) throw std::invalid_argument("grid spacing must be positive");
    }

    Scalar spacing() const { return h_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    Scalar extent_x() const { return h_ * static_cast<Scalar>(rows() - 1); }
    Scalar extent_y() const { return h_ * static_cast<Scalar>(cols() - 1); }
    GridIndex base() const { return base_; }
    const Array& values() const { return values_; }
    Array& values() { return values_; }
    const std::string& description() const { return description_; }
    void set_description(std::string d) { description_ = std::move(d); }

    /// Free-form caveats recorded alongside results (written to metadata).
    const std::vector<std::string>& notes() const { return notes_; }
    void add_note(std::string n) { notes_.push_back(std::move(n)); }

    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
    Scalar& operator()(Eigen::Index i, Eigen::Index j) { return values_(i, j); }

    bool contains(Scalar x1, Scalar x2) const
    {
        const Scalar slack = h_ * Scalar(1e-9);
        return x1 >= -slack && x2 >= -slack && x1 <= extent_x() + slack && x2 <= extent_y() + slack;
    }

    /// Nearest grid index to a continuum point (clamped to the grid).
    GridIndex nearest(Scalar x1, Scalar x2) const
    {
        auto snap = [this](Scalar v, Eigen::Index n) {
            auto k = static_cast<Eigen::Index>(std::llround(v / h_));
            return std::clamp<Eigen::Index>(k, 0, n - 1);
        };
        return {snap(x1, rows()), snap(x2, cols())};
    }

    /// Bilinear interpolation at a continuum point inside the grid. Points
    /// outside [0, extent] are clamped onto the grid.
    Scalar interpolate(Scalar x1, Scalar x2) const
    {
        const Scalar u = std::clamp(x1 / h_, Scalar(0), static_cast<Scalar>(rows() - 1));
        const Scalar v = std::clamp(x2 / h_, Scalar(0), static_cast<Scalar>(cols() - 1));
        auto i0 = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(u)), std::max<Eigen::Index>(rows() - 2, 0));
        auto j0 = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(v)), std::max<Eigen::Index>(cols() - 2, 0));
        const Eigen::Index i1 = std::min(i0 + 1, rows() - 1);
        const Eigen::Index j1 = std::min(j0 + 1, cols() - 1);
        const Scalar fu = u - static_cast<Scalar>(i0);
        const Scalar fv = v - static_cast<Scalar>(j0);
        const Scalar lo = values_(i0, j0) * (1 - fu) + values_(i1, j0) * fu;
        const Scalar hi = values_(i0, j1) * (1 - fu) + values_(i1, j1) * fu;
        return lo * (1 - fv) + hi * fv;
    }

  private:
    Scalar h_ = 1;
    Array values_;
    GridIndex base_;
    std::string description_;
    std::vector<std::string> notes_;
};

using ValueGrid = BasicValueGrid<double>;

}  // namespace dlpp
