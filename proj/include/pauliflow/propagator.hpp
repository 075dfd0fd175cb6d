#pragma once

#include <functional>
#include <optional>

#include "pauliflow/kernels.hpp"
#include "pauliflow/observables.hpp"
#include "pauliflow/poisswell.hpp"

namespace pauliflow {

enum class Scheme { strang_split, rk4_pseudospectral };
enum class Nonlinearity { none, poisson, hartree, poisson_plus_xalpha };

struct SolverConfig {
    Scheme scheme = Scheme::strang_split;
    double dt = 1e-3;
    double t_end = 1.0;
    Nonlinearity nonlinearity = Nonlinearity::none;
    PoissonConfig poisson;
    std::optional<InteractionKernel> kernel;  // hartree nonlinearity
    double xalpha_coeff = 0.0;
    bool poisswell = false;
    PoisswellOptions poisswell_opt;
    int spin_current_sign = +1;
    int snapshot_stride = 0;  // 0 disables snapshots
    double blowup_factor = 1e3;
};

struct StepReport {
    double t = 0.0;
    double mass = 0.0;
    EnergyBreakdown energy;
    int sc_iterations = 0;
    double norm_drift = 0.0;  // max_j | ||Psi_j|| - 1 |
};

// exp(+i (dt/2) sigma.B) in closed form cos(theta) I + i sin(theta) sigma.n,
// theta = dt |B| / 2; exactly unitary. The 1/hbar of the propagator cancels
// the hbar of the Stern-Gerlach term.
Mat2 stern_gerlach_rotation(const std::array<double, 3>& b, double dt);

// One Strang step with the self-consistent potential frozen at the
// step-initial density. The magnetic kinetic energy is dimension-split into
// exact unitary factors exp(-i tau (hbar k_j - A_j)^2 / (2 hbar)) valid for
// splitting-compatible gauges, arranged palindromically around the pointwise
// potential/Stern-Gerlach half steps.
void strang_step(MixedState& state, const GaugeField& gauge, const RealField& v_sc,
                 double dt);

// Classical 4-stage step on i hbar dPsi/dt = H Psi; handles general gauges
// including div A != 0.
void rk4_step(MixedState& state, const GaugeField& gauge, const RealField& v_sc,
              double dt);

// Largest stable dt for rk4 from a spectral bound on ||H||.
double rk4_stability_budget(const MixedState& state, const GaugeField& gauge,
                            const RealField& v_sc);

struct PropagationResult {
    MixedState state;
    GaugeField gauge;  // updated when poisswell is active
    std::vector<StepReport> reports;
};

using SnapshotSink =
    std::function<void(int step, double t, const MixedState&, const RealField& v_sc)>;

// Builds V_sc for the configured nonlinearity (coupling applied).
RealField self_consistent_potential(const RealField& rho, const SolverConfig& cfg);

PropagationResult propagate(const MixedState& initial, const GaugeField& gauge,
                            const SolverConfig& cfg, const SnapshotSink& sink = {});

}  // namespace pauliflow
