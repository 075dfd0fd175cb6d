#pragma once

#include <array>
#include <functional>
#include <vector>

#include "pauliflow/common.hpp"
#include "pauliflow/grid.hpp"

namespace pauliflow {

// Real scalar field on a grid.
class RealField {
  public:
    explicit RealField(UniformGrid grid, double fill = 0.0)
        : grid_(std::move(grid)), v_(grid_.size(), fill) {}
    RealField(UniformGrid grid, std::vector<double> values);

    const UniformGrid& grid() const { return grid_; }
    double& operator[](std::int64_t i) { return v_[i]; }
    double operator[](std::int64_t i) const { return v_[i]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

    double integral() const;  // cell_volume * sum
    double mean() const;
    double l2_norm() const;  // sqrt(cell_volume * sum v^2)
    double max_abs() const;
    void check_finite(const char* what) const;

    // Pointwise construction from coordinates.
    static RealField sample(const UniformGrid& g,
                            const std::function<double(const std::array<double, 3>&)>& f);

  private:
    UniformGrid grid_;
    std::vector<double> v_;
};

using VectorField = std::vector<RealField>;

// Complex scalar field; used for spinor components and spectral scratch.
class ComplexField {
  public:
    explicit ComplexField(UniformGrid grid)
        : grid_(std::move(grid)), v_(grid_.size(), cdouble{0.0, 0.0}) {}

    const UniformGrid& grid() const { return grid_; }
    cdouble& operator[](std::int64_t i) { return v_[i]; }
    cdouble operator[](std::int64_t i) const { return v_[i]; }
    std::vector<cdouble>& values() { return v_; }
    const std::vector<cdouble>& values() const { return v_; }

  private:
    UniformGrid grid_;
    std::vector<cdouble> v_;
};

// 2-spinor field Psi = (psi1, psi2)^T, |Psi|^2 = |psi1|^2 + |psi2|^2.
class SpinorField {
  public:
    explicit SpinorField(UniformGrid grid);

    const UniformGrid& grid() const { return grid_; }
    std::vector<cdouble>& comp(int c) { return comp_[c]; }
    const std::vector<cdouble>& comp(int c) const { return comp_[c]; }
    std::int64_t size() const { return grid_.size(); }

    double norm() const;                       // L2 norm with cell weights
    cdouble inner(const SpinorField& o) const;  // <this, o>, conj on this
    void scale(cdouble s);
    void normalize();
    void check_finite(const char* what) const;

    // Gaussian packet: envelope exp(-|x-c|^2/(4 sigma^2)) modulated by
    // exp(i k.x), normalized; spin = (a_up, a_down) normalized internally.
    static SpinorField gaussian(const UniformGrid& g, const std::array<double, 3>& center,
                                double sigma, const std::array<double, 3>& wavevec,
                                const std::array<cdouble, 2>& spin);

    // Hermite excitation ladder on a common Gaussian envelope; orbitals with
    // distinct orders are mutually orthogonal.
    static SpinorField hermite(const UniformGrid& g, const std::array<double, 3>& center,
                               double sigma, const std::array<int, 3>& order,
                               const std::array<cdouble, 2>& spin);

  private:
    UniformGrid grid_;
    std::array<std::vector<cdouble>, 2> comp_;
};

// Pauli matrices and the 2x2 complex algebra used for pointwise spin ops.
struct Mat2 {
    cdouble a00, a01, a10, a11;

    Mat2 operator*(const Mat2& o) const {
        return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
                a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
    }
    Mat2 operator+(const Mat2& o) const {
        return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11};
    }
    Mat2 operator*(cdouble s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
    Mat2 adjoint() const {
        return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
    }
    cdouble trace() const { return a00 + a11; }
    void apply(cdouble& up, cdouble& dn) const {
        cdouble u = a00 * up + a01 * dn;
        cdouble d = a10 * up + a11 * dn;
        up = u;
        dn = d;
    }
};

namespace pauli {
inline constexpr Mat2 identity{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2 sigma1{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 sigma2{0.0, cdouble{0.0, -1.0}, cdouble{0.0, 1.0}, 0.0};
inline constexpr Mat2 sigma3{1.0, 0.0, 0.0, -1.0};

inline Mat2 sigma_dot(const std::array<double, 3>& b) {
    return {cdouble{b[2], 0.0}, cdouble{b[0], -b[1]},
            cdouble{b[0], b[1]}, cdouble{-b[2], 0.0}};
}
}  // namespace pauli

}  // namespace pauliflow
