#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pauliflow/common.hpp"

namespace pauliflow {

// Uniform periodic Cartesian grid, d in {1,2,3}, power-of-two points per
// axis. Coordinates are cell centers of the box [-L/2, L/2) per axis,
// x_i = -L/2 + i*h.
class UniformGrid {
  public:
    static constexpr std::int64_t kDefaultBudget = 1 << 28;  // scalars

    UniformGrid(int dim, std::vector<int> points, std::vector<double> extents,
                std::int64_t budget = kDefaultBudget);

    int dim() const { return dim_; }
    int n(int axis) const { return n_[axis]; }
    double extent(int axis) const { return extent_[axis]; }
    double spacing(int axis) const { return extent_[axis] / n_[axis]; }
    std::int64_t size() const { return size_; }
    double cell_volume() const;

    const std::vector<int>& dims() const { return n_; }
    double coord(int axis, int index) const {
        return -0.5 * extent_[axis] + index * spacing(axis);
    }

    // Signed wavenumbers in DFT bin order; index n/2 carries -pi*n/L.
    // wavenumbers_grad zeroes the Nyquist bin so first derivatives of real
    // fields stay real.
    const std::vector<double>& wavenumbers(int axis) const { return k_full_[axis]; }
    const std::vector<double>& wavenumbers_grad(int axis) const { return k_grad_[axis]; }

    // Row-major flattening (last axis fastest).
    std::int64_t index(const std::array<int, 3>& idx) const;
    std::int64_t stride(int axis) const { return stride_[axis]; }

    bool operator==(const UniformGrid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && extent_ == o.extent_;
    }
    bool operator!=(const UniformGrid& o) const { return !(*this == o); }

  private:
    int dim_;
    std::vector<int> n_;
    std::vector<double> extent_;
    std::vector<std::int64_t> stride_;
    std::int64_t size_;
    std::vector<std::vector<double>> k_full_;
    std::vector<std::vector<double>> k_grad_;
};

void require_same_grid(const UniformGrid& a, const UniformGrid& b,
                       const char* what);

}  // namespace pauliflow
