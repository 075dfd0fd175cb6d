#pragma once

#include <optional>

#include "pauliflow/poisson.hpp"
#include "pauliflow/propagator.hpp"
#include "pauliflow/spectral.hpp"

namespace pauliflow {

// Vlasov distribution on a reduced phase-space grid: 1d1v (B absent) or
// 2d2v with scalar out-of-plane B(x,y). Layout [x...][p...], p fastest;
// momentum band [-pmax, pmax) per axis, open (zero inflow) in p.
class PhaseSpaceDensity {
  public:
    PhaseSpaceDensity(UniformGrid xgrid, int np, double pmax,
                      std::optional<RealField> b_profile = std::nullopt);

    const UniformGrid& xgrid() const { return x_; }
    int dim() const { return x_.dim(); }
    int np() const { return np_; }
    double pmax() const { return pmax_; }
    double dp() const { return 2.0 * pmax_ / np_; }
    double p_coord(int i) const { return -pmax_ + i * dp(); }
    bool has_b() const { return b_.has_value(); }
    const RealField& b_profile() const { return *b_; }

    std::int64_t p_size() const;       // np^dim
    std::int64_t size() const;         // x * p points
    double cell_volume() const;        // dx^d * dp^d
    std::vector<double>& values() { return f_; }
    const std::vector<double>& values() const { return f_; }
    double& operator[](std::int64_t i) { return f_[i]; }
    double operator[](std::int64_t i) const { return f_[i]; }

    double mass() const;
    double l1_norm() const;
    double l2_norm() const;
    double kinetic_energy() const;  // int 1/2 |p|^2 f

    static PhaseSpaceDensity gaussian_blob(const UniformGrid& xgrid, int np,
                                           double pmax,
                                           const std::array<double, 3>& x0,
                                           const std::array<double, 3>& p0,
                                           double sigma_x, double sigma_p,
                                           std::optional<RealField> b = std::nullopt);

  private:
    UniformGrid x_;
    int np_;
    double pmax_;
    std::optional<RealField> b_;
    std::vector<double> f_;
};

struct VlasovStats {
    double outflow_mass = 0.0;  // mass lost through the momentum band
    double clipped_mass = 0.0;  // interpolation undershoots clipped to zero
};

struct VlasovMoments {
    RealField density;
    std::vector<RealField> current;
};

VlasovMoments vlasov_moments(const PhaseSpaceDensity& f);

// One Strang step: half x-advection (shift p*dt/2, periodic cubic spline),
// full p-advection along characteristics dp/dt = -grad V + p x B (exact
// rotation about the drift for the local B composed with the force kick),
// half x-advection.
void vlasov_step(PhaseSpaceDensity& f, const RealField& v, double dt,
                 VlasovStats* stats = nullptr);

struct VlasovConfig {
    double dt = 1e-2;
    double t_end = 1.0;
    double coupling = 1.0;  // -Lap V = coupling * (rho - mean rho)
    int snapshot_stride = 0;
    double mass_loss_abort = 1e-4;
};

using VlasovSink = std::function<void(int step, double t, const PhaseSpaceDensity&)>;

struct VlasovResult {
    PhaseSpaceDensity f;
    std::vector<StepReport> reports;  // mass / kinetic / field-energy stream
    VlasovStats stats;
};

VlasovResult vlasov_poisson_propagate(const PhaseSpaceDensity& f0,
                                      const VlasovConfig& cfg,
                                      const VlasovSink& sink = {});

}  // namespace pauliflow
