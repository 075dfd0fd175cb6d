#include "pauliflow/propagator.hpp"

#include <cmath>

#include "pauliflow/fft.hpp"
#include "pauliflow/spectral.hpp"

namespace pauliflow {

Mat2 stern_gerlach_rotation(const std::array<double, 3>& b, double dt) {
    double bn = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (!(std::isfinite(bn))) throw NumericalError("non-finite B in spin rotation");
    if (bn == 0.0) return pauli::identity;
    double theta = 0.5 * dt * bn;
    std::array<double, 3> n{b[0] / bn, b[1] / bn, b[2] / bn};
    Mat2 sn = pauli::sigma_dot(n);
    double c = std::cos(theta), s = std::sin(theta);
    return pauli::identity * cdouble{c, 0.0} + sn * cdouble{0.0, s};
}

namespace {

struct AxisStep {
    int axis;
    std::vector<cdouble> phase;
};

// Phase table for the axis factor exp(-i tau (hbar k_a - A_a)^2/(2 hbar));
// A_a is constant along axis a, so the symbol is diagonal in the mixed
// representation (Fourier along a, physical elsewhere).
std::vector<cdouble> axis_phase(const UniformGrid& g, const GaugeField& gauge,
                                int axis, double tau, double hbar) {
    std::vector<cdouble> phase(g.size());
    const auto& k = g.wavenumbers(axis);
    const std::int64_t stride = g.stride(axis);
    const int n = g.n(axis);
    const bool mag = gauge.has_magnetic();
    for (std::int64_t base = 0; base < g.size(); base += stride * n) {
        for (std::int64_t j = 0; j < stride; ++j) {
            double a_val = mag ? gauge.a()[axis][base + j] : 0.0;
            for (int m = 0; m < n; ++m) {
                double sym = hbar * k[m] - a_val;
                phase[base + m * stride + j] =
                    std::exp(-I * (tau / (2.0 * hbar)) * sym * sym);
            }
        }
    }
    return phase;
}

void apply_axis_step(const UniformGrid& g, const AxisStep& s, SpinorField& psi) {
    for (int c = 0; c < 2; ++c) {
        auto& v = psi.comp(c);
        fft::forward_axis(g.dims(), s.axis, v.data());
        for (std::int64_t i = 0; i < g.size(); ++i) v[i] *= s.phase[i];
        fft::backward_axis(g.dims(), s.axis, v.data());
    }
}

// One Strang step: pointwise potential/spin half steps wrapped around the
// palindromic kinetic sweep T_0(dt/2)...T_{d-1}(dt)...T_0(dt/2). All factors
// are exactly unitary.
class StrangStepper {
  public:
    StrangStepper(const UniformGrid& g, const GaugeField& gauge, double hbar, double dt)
        : grid_(g), gauge_(gauge), hbar_(hbar), dt_(dt) {
        if (gauge.has_magnetic() && !gauge.splitting_compatible())
            throw ValidationError(
                "strang_split requires a splitting-compatible gauge; use "
                "rk4_pseudospectral");
        const int d = g.dim();
        for (int a = 0; a < d - 1; ++a)
            seq_.push_back({a, axis_phase(g, gauge, a, 0.5 * dt, hbar)});
        seq_.push_back({d - 1, axis_phase(g, gauge, d - 1, dt, hbar)});
        for (int a = d - 2; a >= 0; --a)
            seq_.push_back({a, axis_phase(g, gauge, a, 0.5 * dt, hbar)});

        spin_active_ = gauge.has_magnetic() && gauge.max_abs_b() > 0.0;
        if (spin_active_) {
            spin_half_.resize(g.size());
            for (std::int64_t i = 0; i < g.size(); ++i)
                spin_half_[i] = stern_gerlach_rotation(gauge.b_at(i), 0.5 * dt);
        }
    }

    // First half: potential/spin with the incoming V_sc, then the kinetic
    // sweep. The caller recomputes V_sc from the post-kinetic density and
    // calls second_half; that potential is then valid as the first half of
    // the next step (density is invariant under pointwise factors).
    void first_half(MixedState& state, const RealField& v_sc) {
        std::vector<cdouble> phase = make_phase(v_sc);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < state.num_orbitals(); ++j) {
            SpinorField& psi = state.orbital_mut(j);
            pointwise_half(psi, phase);
            for (const auto& s : seq_) apply_axis_step(grid_, s, psi);
        }
    }

    void second_half(MixedState& state, const RealField& v_sc) {
        std::vector<cdouble> phase = make_phase(v_sc);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < state.num_orbitals(); ++j)
            pointwise_half(state.orbital_mut(j), phase);
    }

  private:
    std::vector<cdouble> make_phase(const RealField& v_sc) const {
        std::vector<cdouble> phase(grid_.size());
        for (std::int64_t i = 0; i < grid_.size(); ++i)
            phase[i] =
                std::exp(-I * (0.5 * dt_ / hbar_) * (gauge_.v_ext()[i] + v_sc[i]));
        return phase;
    }

    void pointwise_half(SpinorField& psi, const std::vector<cdouble>& phase) const {
        auto& up = psi.comp(0);
        auto& dn = psi.comp(1);
        for (std::int64_t i = 0; i < grid_.size(); ++i) {
            up[i] *= phase[i];
            dn[i] *= phase[i];
            if (spin_active_) spin_half_[i].apply(up[i], dn[i]);
        }
    }

    const UniformGrid& grid_;
    const GaugeField& gauge_;
    double hbar_, dt_;
    std::vector<AxisStep> seq_;
    bool spin_active_ = false;
    std::vector<Mat2> spin_half_;
};

}  // namespace

void strang_step(MixedState& state, const GaugeField& gauge, const RealField& v_sc,
                 double dt) {
    require_same_grid(state.grid(), gauge.grid(), "strang_step");
    StrangStepper stepper(state.grid(), gauge, state.hbar(), dt);
    stepper.first_half(state, v_sc);
    stepper.second_half(state, v_sc);
}

double rk4_stability_budget(const MixedState& state, const GaugeField& gauge,
                            const RealField& v_sc) {
    const UniformGrid& g = state.grid();
    const double hbar = state.hbar();
    double kmax2 = 0.0, kmax = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        double ka = PI * g.n(a) / g.extent(a);
        kmax2 += ka * ka;
        kmax = std::max(kmax, ka);
    }
    double vmax = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i)
        vmax = std::max(vmax, std::abs(gauge.v_ext()[i] + v_sc[i]));
    double amax = gauge.max_abs_a();
    double bmax = gauge.max_abs_b();
    double hnorm = 0.5 * hbar * hbar * kmax2 + vmax + hbar * kmax * amax * g.dim() +
                   0.5 * amax * amax * g.dim() + 0.5 * hbar * bmax;
    // RK4 imaginary-axis stability limit |lambda dt| <= 2*sqrt(2), with margin.
    return 0.9 * 2.0 * std::sqrt(2.0) * hbar / hnorm;
}

void rk4_step(MixedState& state, const GaugeField& gauge, const RealField& v_sc,
              double dt) {
    const UniformGrid& g = state.grid();
    require_same_grid(g, gauge.grid(), "rk4_step");
    const double hbar = state.hbar();
    const cdouble factor = -I / hbar;

#pragma omp parallel for schedule(static)
    for (int j = 0; j < state.num_orbitals(); ++j) {
        SpinorField& psi = state.orbital_mut(j);
        auto rhs = [&](const SpinorField& y) {
            SpinorField h = apply_hamiltonian(y, gauge, v_sc, hbar);
            for (int c = 0; c < 2; ++c)
                for (auto& z : h.comp(c)) z *= factor;
            return h;
        };
        SpinorField k1 = rhs(psi);
        SpinorField y2(g), y3(g), y4(g);
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < g.size(); ++i)
                y2.comp(c)[i] = psi.comp(c)[i] + 0.5 * dt * k1.comp(c)[i];
        SpinorField k2 = rhs(y2);
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < g.size(); ++i)
                y3.comp(c)[i] = psi.comp(c)[i] + 0.5 * dt * k2.comp(c)[i];
        SpinorField k3 = rhs(y3);
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < g.size(); ++i)
                y4.comp(c)[i] = psi.comp(c)[i] + dt * k3.comp(c)[i];
        SpinorField k4 = rhs(y4);
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < g.size(); ++i)
                psi.comp(c)[i] += (dt / 6.0) * (k1.comp(c)[i] + 2.0 * k2.comp(c)[i] +
                                                2.0 * k3.comp(c)[i] + k4.comp(c)[i]);
    }
}

namespace {

// Stage-consistent rk4 for self-consistent couplings: the potential is
// rebuilt from the ensemble density at every stage, so the nonlinear system
// keeps its fourth order.
void rk4_step_self_consistent(MixedState& state, const GaugeField& gauge,
                              const SolverConfig& cfg, double dt) {
    const UniformGrid& g = state.grid();
    const double hbar = state.hbar();
    const cdouble factor = -I / hbar;
    const int m = state.num_orbitals();

    auto stage = [&](const MixedState& y) {
        RealField v = self_consistent_potential(density(y), cfg);
        std::vector<SpinorField> k;
        k.reserve(m);
        for (int j = 0; j < m; ++j) {
            SpinorField h = apply_hamiltonian(y.orbital(j), gauge, v, hbar);
            for (int c = 0; c < 2; ++c)
                for (auto& z : h.comp(c)) z *= factor;
            k.push_back(std::move(h));
        }
        return k;
    };
    auto shifted = [&](const std::vector<SpinorField>& k, double a) {
        std::vector<SpinorField> orbs;
        orbs.reserve(m);
        for (int j = 0; j < m; ++j) {
            SpinorField y(g);
            for (int c = 0; c < 2; ++c)
                for (std::int64_t i = 0; i < g.size(); ++i)
                    y.comp(c)[i] = state.orbital(j).comp(c)[i] + a * dt * k[j].comp(c)[i];
            orbs.push_back(std::move(y));
        }
        return MixedState::from_propagation(hbar, state.weights(), std::move(orbs));
    };

    auto k1 = stage(state);
    auto k2 = stage(shifted(k1, 0.5));
    auto k3 = stage(shifted(k2, 0.5));
    auto k4 = stage(shifted(k3, 1.0));
    for (int j = 0; j < m; ++j)
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < g.size(); ++i)
                state.orbital_mut(j).comp(c)[i] +=
                    (dt / 6.0) * (k1[j].comp(c)[i] + 2.0 * k2[j].comp(c)[i] +
                                  2.0 * k3[j].comp(c)[i] + k4[j].comp(c)[i]);
}

}  // namespace

RealField self_consistent_potential(const RealField& rho, const SolverConfig& cfg) {
    const UniformGrid& g = rho.grid();
    switch (cfg.nonlinearity) {
        case Nonlinearity::none:
            return RealField(g);
        case Nonlinearity::poisson: {
            RealField v = solve_poisson(rho, cfg.poisson);
            for (std::int64_t i = 0; i < g.size(); ++i) v[i] *= cfg.poisson.coupling;
            return v;
        }
        case Nonlinearity::hartree: {
            if (!cfg.kernel) throw ValidationError("hartree nonlinearity needs a kernel");
            return hartree_potential(rho, *cfg.kernel);
        }
        case Nonlinearity::poisson_plus_xalpha: {
            RealField v = solve_poisson(rho, cfg.poisson);
            RealField x = xalpha_potential(rho, cfg.xalpha_coeff);
            for (std::int64_t i = 0; i < g.size(); ++i)
                v[i] = cfg.poisson.coupling * v[i] + x[i];
            return v;
        }
    }
    throw ValidationError("unknown nonlinearity");
}

namespace {

// Interaction energy of the conserved functional for each coupling:
// 1/2 <rho, V> for Poisson/Hartree, -(3 alpha/4) int rho^{4/3} for Xalpha.
double interaction_energy(const RealField& rho, const SolverConfig& cfg) {
    const UniformGrid& g = rho.grid();
    double vol = g.cell_volume();
    switch (cfg.nonlinearity) {
        case Nonlinearity::none:
            return 0.0;
        case Nonlinearity::poisson: {
            RealField v = solve_poisson(rho, cfg.poisson);
            double s = 0.0;
            for (std::int64_t i = 0; i < g.size(); ++i) s += rho[i] * v[i];
            return 0.5 * cfg.poisson.coupling * s * vol;
        }
        case Nonlinearity::hartree: {
            RealField v = hartree_potential(rho, *cfg.kernel);
            double s = 0.0;
            for (std::int64_t i = 0; i < g.size(); ++i) s += rho[i] * v[i];
            return 0.5 * s * vol;
        }
        case Nonlinearity::poisson_plus_xalpha: {
            RealField v = solve_poisson(rho, cfg.poisson);
            double s = 0.0, x = 0.0;
            for (std::int64_t i = 0; i < g.size(); ++i) {
                s += rho[i] * v[i];
                x += std::pow(std::max(rho[i], 0.0), 4.0 / 3.0);
            }
            return 0.5 * cfg.poisson.coupling * s * vol -
                   0.75 * cfg.xalpha_coeff * x * vol;
        }
    }
    return 0.0;
}

StepReport make_report(double t, const MixedState& state, const GaugeField& gauge,
                       const SolverConfig& cfg, int sc_iters) {
    StepReport r;
    r.t = t;
    r.mass = state.total_mass();
    RealField rho = density(state);
    RealField zero(state.grid());
    r.energy = energy(state, gauge, zero);
    r.energy.self = interaction_energy(rho, cfg);
    r.sc_iterations = sc_iters;
    double drift = 0.0;
    for (int j = 0; j < state.num_orbitals(); ++j)
        drift = std::max(drift, std::abs(state.orbital(j).norm() - 1.0));
    r.norm_drift = drift;
    return r;
}

}  // namespace

PropagationResult propagate(const MixedState& initial, const GaugeField& gauge_in,
                            const SolverConfig& cfg, const SnapshotSink& sink) {
    if (!(cfg.dt > 0.0)) throw ValidationError("dt must be positive");
    if (!(cfg.t_end > 0.0)) throw ValidationError("t_end must be positive");

    MixedState state = initial;
    GaugeField gauge = gauge_in;
    std::vector<StepReport> reports;

    long nsteps = std::lround(cfg.t_end / cfg.dt);
    if (nsteps < 1 || std::abs(nsteps * cfg.dt - cfg.t_end) > 1e-9 * cfg.t_end)
        throw ValidationError("t_end must be an integer multiple of dt");

    RealField rho = density(state);
    RealField v_sc = self_consistent_potential(rho, cfg);
    if (cfg.scheme == Scheme::rk4_pseudospectral) {
        double budget = rk4_stability_budget(state, gauge, v_sc);
        if (cfg.dt > budget)
            throw ValidationError("rk4 dt " + std::to_string(cfg.dt) +
                                  " exceeds stability budget " + std::to_string(budget));
    }

    StepReport first = make_report(0.0, state, gauge, cfg, 0);
    reports.push_back(first);
    double e0 = first.energy.total();
    if (sink && cfg.snapshot_stride > 0) sink(0, 0.0, state, v_sc);

    std::optional<StrangStepper> stepper;
    if (cfg.scheme == Scheme::strang_split && !cfg.poisswell)
        stepper.emplace(state.grid(), gauge, state.hbar(), cfg.dt);

    for (long step = 1; step <= nsteps; ++step) {
        int sc_iters = 0;
        if (cfg.poisswell) {
            PoisswellOptions opt = cfg.poisswell_opt;
            opt.spin_sign = cfg.spin_current_sign;
            PoisswellResult pw = poisswell_update(state, gauge, opt);
            gauge = std::move(pw.gauge);
            sc_iters = pw.iterations;
        }

        if (cfg.scheme == Scheme::strang_split) {
            // Symmetric self-consistent splitting: the second potential half
            // step uses the post-kinetic density; it doubles as the first
            // half of the next step since pointwise factors leave the
            // density unchanged.
            if (cfg.poisswell) {
                StrangStepper fresh(state.grid(), gauge, state.hbar(), cfg.dt);
                fresh.first_half(state, v_sc);
                v_sc = self_consistent_potential(density(state), cfg);
                fresh.second_half(state, v_sc);
            } else {
                stepper->first_half(state, v_sc);
                v_sc = self_consistent_potential(density(state), cfg);
                stepper->second_half(state, v_sc);
            }
        } else {
            if (cfg.nonlinearity == Nonlinearity::none) {
                rk4_step(state, gauge, v_sc, cfg.dt);
            } else {
                rk4_step_self_consistent(state, gauge, cfg, cfg.dt);
            }
        }

        double t = step * cfg.dt;
        StepReport r = make_report(t, state, gauge, cfg, sc_iters);
        reports.push_back(r);

        double scale = std::max(std::abs(e0), 1e-12);
        if (std::abs(r.energy.total() - e0) > cfg.blowup_factor * scale)
            throw NumericalError("energy blow-up detected at t=" + std::to_string(t) +
                                 ": E=" + std::to_string(r.energy.total()) +
                                 " vs E0=" + std::to_string(e0));
        if (sink && cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0)
            sink(static_cast<int>(step), t, state, v_sc);
    }

    return PropagationResult{std::move(state), std::move(gauge), std::move(reports)};
}

}  // namespace pauliflow
