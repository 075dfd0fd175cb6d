#pragma once

#include "pauliflow/gauge.hpp"
#include "pauliflow/mixed_state.hpp"

namespace pauliflow {

// Phase-space grid of the discrete Wigner transform. The transform samples
// offsets with x +- hbar y/2 on the state's grid and x on the refined
// half-spaced lattice (2n points per axis), which makes every (u,v) pair
// appear exactly once: zero-padded offsets keep the mirror ghost of the
// naive full-period lattice outside the box, and the xi-grid is the exact
// Fourier dual of the offset lattice with spacing pi*hbar/(2L) per axis and
// extent covering half the physical momentum band. Momentum content beyond
// the band wraps; min_admissible_hbar gives the coverage bound.
class PhaseSpaceGrid {
  public:
    PhaseSpaceGrid(UniformGrid state_grid, double hbar);

    const UniformGrid& xgrid() const { return x_; }       // the state's grid
    const UniformGrid& xfine() const { return xfine_; }   // half-spaced output lattice
    double hbar() const { return hbar_; }
    int nx(int axis) const { return xfine_.n(axis); }     // = 2 n_state
    int nxi(int axis) const { return xfine_.n(axis); }
    double x(int axis, int j) const { return xfine_.coord(axis, j); }
    double dxi(int axis) const { return PI * hbar_ / (2.0 * x_.extent(axis)); }
    // xi value at DFT-ordered index l (signed, Nyquist negative).
    double xi(int axis, int l) const {
        int n_ = nxi(axis);
        int s = (l <= n_ / 2 - 1) ? l : l - n_;
        return s * dxi(axis);
    }
    double xi_max(int axis) const { return 0.5 * nxi(axis) * dxi(axis); }
    std::int64_t x_size() const { return xfine_.size(); }
    std::int64_t xi_size() const { return xfine_.size(); }
    double cell_volume() const;  // (dx/2)^d * dxi^d

    static double min_admissible_hbar(const UniformGrid& g, double p_band);
    // Clamps hbar up to the band-coverage bound; reports whether it moved.
    static double snap_hbar(const UniformGrid& g, double requested, double p_band,
                            bool* snapped = nullptr);

  private:
    UniformGrid x_;
    UniformGrid xfine_;
    double hbar_;
};

// Scalar phase-space field on [x][xi] (row-major, xi fastest).
class PhaseSpaceField {
  public:
    explicit PhaseSpaceField(PhaseSpaceGrid g)
        : grid_(std::move(g)), v_(grid_.x_size() * grid_.xi_size(), 0.0) {}

    const PhaseSpaceGrid& grid() const { return grid_; }
    double& operator[](std::int64_t i) { return v_[i]; }
    double operator[](std::int64_t i) const { return v_[i]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double integral() const;
    double l2_norm() const;

  private:
    PhaseSpaceGrid grid_;
    std::vector<double> v_;
};

// 2x2 matrix-valued Wigner transform F(x, xi); layout [x][xi][2x2].
class WignerMatrix {
  public:
    explicit WignerMatrix(PhaseSpaceGrid g);

    const PhaseSpaceGrid& grid() const { return grid_; }
    std::int64_t points() const { return npts_; }  // x * xi points
    cdouble* at(std::int64_t flat) { return data_.data() + 4 * flat; }
    const cdouble* at(std::int64_t flat) const { return data_.data() + 4 * flat; }
    std::vector<cdouble>& data() { return data_; }
    const std::vector<cdouble>& data() const { return data_; }

    double max_hermiticity_defect() const;  // max |F - F^dagger|
    double max_imag_trace() const;
    PhaseSpaceField trace() const;
    double l2_norm() const;  // Frobenius over entries with phase-space weights

  private:
    PhaseSpaceGrid grid_;
    std::int64_t npts_;
    std::vector<cdouble> data_;
};

// Discrete Wigner transform of the mixed state,
// F(x,xi) = (2 pi)^{-d} sum_m dy^d e^{-i xi y_m} R(x + m h, x - m h),
// spectrally exact for band-limited orbitals; marginal identities hold to
// roundoff. The default zero-pads the offsets so pointwise values are
// ghost-free for contained states; periodic_wrap=true keeps the torus
// convention under which the Pauli-Wigner identity closes exactly (the
// periodic Wigner function carries a mirror image at x +- L/2).
WignerMatrix wigner_transform(const MixedState& state, bool periodic_wrap = false);

// Trace-only transform (memory-light path for larger grids).
PhaseSpaceField wigner_trace_transform(const MixedState& state);

// int f dxi and int xi f dxi (canonical momentum moment).
RealField wigner_density_moment(const WignerMatrix& f);
std::vector<RealField> wigner_current_moment(const WignerMatrix& f);

// Gaussian smoothing at scale sqrt(hbar) per axis in x and xi; nonnegative
// up to roundoff, mass preserving.
PhaseSpaceField husimi(const WignerMatrix& f);
PhaseSpaceField husimi(const PhaseSpaceField& f);

// Pseudo-differential operator theta[g]: multiply by
// delta[g](x,y) = (i/hbar)(g(x + hbar y/2) - g(x - hbar y/2)) in the
// y-representation. Matrix symbols act two-sidedly:
// (i/hbar)(G(x+) Phi - Phi G(x-)).
WignerMatrix theta_apply(const RealField& g, const WignerMatrix& phi);
WignerMatrix theta_apply_sigma_b(const GaugeField& gauge, const WignerMatrix& phi);

// Analytic-symbol variant: g is evaluated at the unwrapped displaced
// coordinates, so non-periodic symbols (linear g) are treated exactly.
WignerMatrix theta_apply(const std::function<double(const std::array<double, 3>&)>& g,
                         const WignerMatrix& phi);

// Spectral d/dxi_axis (multiplication by i y in the y-representation).
WignerMatrix xi_gradient(const WignerMatrix& phi, int axis);

// L2 norm of the Pauli-Wigner residual
// dF/dt + xi.grad_x F - F_y[beta[A]] *_xi grad_x F - theta[A](xi F)
//   + 1/2 theta[|A|^2] F - (hbar/2) theta[sigma.B] F + theta[V] F.
double pauli_wigner_residual(const WignerMatrix& f, const RealField& v,
                             const GaugeField& gauge, const WignerMatrix& df_dt);

}  // namespace pauliflow
