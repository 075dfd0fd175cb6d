#include "pauliflow/grid.hpp"

namespace pauliflow {

namespace {
bool power_of_two(int n) { return n > 1 && (n & (n - 1)) == 0; }
}  // namespace

UniformGrid::UniformGrid(int dim, std::vector<int> points,
                         std::vector<double> extents, std::int64_t budget)
    : dim_(dim), n_(std::move(points)), extent_(std::move(extents)) {
    if (dim_ < 1 || dim_ > 3) throw ValidationError("grid dim must be 1, 2 or 3");
    if (static_cast<int>(n_.size()) != dim_ || static_cast<int>(extent_.size()) != dim_)
        throw ValidationError("grid points/extents must match dim");
    size_ = 1;
    for (int a = 0; a < dim_; ++a) {
        if (!power_of_two(n_[a]))
            throw ValidationError("grid points per axis must be a power of two >= 2");
        if (!(extent_[a] > 0.0)) throw ValidationError("grid extent must be positive");
        size_ *= n_[a];
    }
    if (size_ > budget)
        throw BudgetError("grid size " + std::to_string(size_) +
                          " exceeds memory budget " + std::to_string(budget));

    stride_.assign(dim_, 1);
    for (int a = dim_ - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * n_[a + 1];

    k_full_.resize(dim_);
    k_grad_.resize(dim_);
    for (int a = 0; a < dim_; ++a) {
        k_full_[a].resize(n_[a]);
        k_grad_[a].resize(n_[a]);
        double dk = 2.0 * PI / extent_[a];
        for (int m = 0; m < n_[a]; ++m) {
            int s = (m <= n_[a] / 2 - 1) ? m : m - n_[a];
            k_full_[a][m] = dk * s;
            k_grad_[a][m] = (m == n_[a] / 2) ? 0.0 : dk * s;
        }
    }
}

double UniformGrid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing(a);
    return v;
}

std::int64_t UniformGrid::index(const std::array<int, 3>& idx) const {
    std::int64_t r = 0;
    for (int a = 0; a < dim_; ++a) r += idx[a] * stride_[a];
    return r;
}

void require_same_grid(const UniformGrid& a, const UniformGrid& b,
                       const char* what) {
    if (a != b) throw ValidationError(std::string("grid mismatch in ") + what);
}

}  // namespace pauliflow
