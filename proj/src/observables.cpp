#include "pauliflow/observables.hpp"

#include <cmath>

#include "pauliflow/spectral.hpp"

namespace pauliflow {

RealField density(const MixedState& state) {
    const UniformGrid& g = state.grid();
    RealField rho(g);
    for (int j = 0; j < state.num_orbitals(); ++j) {
        double w = state.weight(j);
        const auto& up = state.orbital(j).comp(0);
        const auto& dn = state.orbital(j).comp(1);
        for (std::int64_t i = 0; i < g.size(); ++i)
            rho[i] += w * (std::norm(up[i]) + std::norm(dn[i]));
    }
    return rho;
}

std::array<RealField, 3> magnetization(const MixedState& state) {
    const UniformGrid& g = state.grid();
    std::array<RealField, 3> m{RealField(g), RealField(g), RealField(g)};
    for (int j = 0; j < state.num_orbitals(); ++j) {
        double w = state.weight(j);
        const auto& up = state.orbital(j).comp(0);
        const auto& dn = state.orbital(j).comp(1);
        for (std::int64_t i = 0; i < g.size(); ++i) {
            cdouble z = std::conj(up[i]) * dn[i];
            m[0][i] += w * 2.0 * z.real();
            m[1][i] += w * 2.0 * z.imag();
            m[2][i] += w * (std::norm(up[i]) - std::norm(dn[i]));
        }
    }
    return m;
}

std::array<double, 3> spin_expectation(const MixedState& state) {
    auto m = magnetization(state);
    return {m[0].integral(), m[1].integral(), m[2].integral()};
}

std::vector<RealField> convective_current(const MixedState& state,
                                          const GaugeField& gauge) {
    const UniformGrid& g = state.grid();
    require_same_grid(g, gauge.grid(), "pauli_current");
    const double hbar = state.hbar();
    std::vector<RealField> j;
    for (int a = 0; a < g.dim(); ++a) j.emplace_back(g);

    std::vector<cdouble> dpsi(g.size());
    for (int jj = 0; jj < state.num_orbitals(); ++jj) {
        double w = state.weight(jj);
        for (int c = 0; c < 2; ++c) {
            const auto& psi = state.orbital(jj).comp(c);
            for (int a = 0; a < g.dim(); ++a) {
                derivative_complex(g, psi, dpsi, a);
                const RealField* aa =
                    gauge.has_magnetic() ? &gauge.a()[a] : nullptr;
                for (std::int64_t i = 0; i < g.size(); ++i) {
                    cdouble d = hbar * dpsi[i];
                    if (aa) d -= I * (*aa)[i] * psi[i];
                    j[a][i] += w * std::imag(std::conj(psi[i]) * d);
                }
            }
        }
    }
    return j;
}

std::vector<RealField> pauli_current(const MixedState& state, const GaugeField& gauge,
                                     int spin_sign) {
    if (spin_sign != 1 && spin_sign != -1)
        throw ValidationError("spin_current_sign must be +1 or -1");
    const UniformGrid& g = state.grid();
    std::vector<RealField> j = convective_current(state, gauge);
    if (g.dim() == 1) return j;  // curl term has no in-plane part in 1d

    auto m = magnetization(state);
    auto c = curl3(g, m[0], m[1], m[2]);
    const double s = spin_sign * state.hbar();
    for (int a = 0; a < g.dim(); ++a)
        for (std::int64_t i = 0; i < g.size(); ++i) j[a][i] += s * c[a][i];
    return j;
}

namespace {

// Covariant derivative D_a psi = hbar d_a psi - i A_a psi for one component.
void covariant_derivative(const UniformGrid& g, const std::vector<cdouble>& psi,
                          const RealField* a_comp, double hbar, int axis,
                          std::vector<cdouble>& out) {
    derivative_complex(g, psi, out, axis);
    for (std::int64_t i = 0; i < g.size(); ++i) {
        out[i] *= hbar;
        if (a_comp) out[i] -= I * (*a_comp)[i] * psi[i];
    }
}

}  // namespace

EnergyBreakdown energy(const MixedState& state, const GaugeField& gauge,
                       const RealField& v_sc) {
    const UniformGrid& g = state.grid();
    require_same_grid(g, gauge.grid(), "energy");
    require_same_grid(g, v_sc.grid(), "energy V_sc");
    const double hbar = state.hbar();
    const double vol = g.cell_volume();

    EnergyBreakdown e;
    std::vector<cdouble> d(g.size());
    for (int jj = 0; jj < state.num_orbitals(); ++jj) {
        double w = state.weight(jj);
        const SpinorField& psi = state.orbital(jj);

        for (int c = 0; c < 2; ++c) {
            for (int a = 0; a < g.dim(); ++a) {
                const RealField* aa = gauge.has_magnetic() ? &gauge.a()[a] : nullptr;
                covariant_derivative(g, psi.comp(c), aa, hbar, a, d);
                double s = 0.0;
                for (std::int64_t i = 0; i < g.size(); ++i) s += std::norm(d[i]);
                e.kinetic += 0.5 * w * s * vol;
            }
            for (std::int64_t i = 0; i < g.size(); ++i)
                e.external += w * gauge.v_ext()[i] * std::norm(psi.comp(c)[i]) * vol;
        }

        if (gauge.has_magnetic() && gauge.max_abs_b() > 0.0) {
            const auto& up = psi.comp(0);
            const auto& dn = psi.comp(1);
            double sg = 0.0;
            for (std::int64_t i = 0; i < g.size(); ++i) {
                auto b = gauge.b_at(i);
                Mat2 sb = pauli::sigma_dot(b);
                cdouble u = up[i], v = dn[i];
                // <psi, sigma.B psi> at the point
                cdouble val = std::conj(u) * (sb.a00 * u + sb.a01 * v) +
                              std::conj(v) * (sb.a10 * u + sb.a11 * v);
                sg += val.real();
            }
            e.stern_gerlach += -0.5 * hbar * w * sg * vol;
        }
    }

    auto gv = gradient(v_sc);
    double s = 0.0;
    for (const auto& comp : gv)
        for (std::int64_t i = 0; i < g.size(); ++i) s += comp[i] * comp[i];
    e.self = 0.5 * s * vol;
    return e;
}

double energy_space_distance(const SpinorField& a, const SpinorField& b,
                             const GaugeField& gauge) {
    const UniformGrid& g = a.grid();
    require_same_grid(g, b.grid(), "energy_space_distance");
    SpinorField diff(g);
    for (int c = 0; c < 2; ++c)
        for (std::int64_t i = 0; i < g.size(); ++i)
            diff.comp(c)[i] = a.comp(c)[i] - b.comp(c)[i];

    double l2 = diff.norm();
    double acc = l2 * l2;
    std::vector<cdouble> d(g.size());
    for (int c = 0; c < 2; ++c)
        for (int ax = 0; ax < g.dim(); ++ax) {
            const RealField* aa = gauge.has_magnetic() ? &gauge.a()[ax] : nullptr;
            covariant_derivative(g, diff.comp(c), aa, 1.0, ax, d);
            for (std::int64_t i = 0; i < g.size(); ++i)
                acc += std::norm(d[i]) * g.cell_volume();
        }

    if (gauge.has_magnetic() && gauge.max_abs_b() > 0.0) {
        // (sigma.B)_+ = |B| P_+ with P_+ the projector onto the +|B| eigenvector.
        for (std::int64_t i = 0; i < g.size(); ++i) {
            auto bv = gauge.b_at(i);
            double bn = std::sqrt(bv[0] * bv[0] + bv[1] * bv[1] + bv[2] * bv[2]);
            if (bn == 0.0) continue;
            Mat2 proj = (pauli::identity +
                         pauli::sigma_dot({bv[0] / bn, bv[1] / bn, bv[2] / bn})) *
                        cdouble{0.5, 0.0};
            cdouble u = diff.comp(0)[i], v = diff.comp(1)[i];
            cdouble pu = proj.a00 * u + proj.a01 * v;
            cdouble pv = proj.a10 * u + proj.a11 * v;
            acc += bn * (std::norm(pu) + std::norm(pv)) * g.cell_volume();
        }
    }
    return std::sqrt(acc);
}

SpinorField apply_hamiltonian(const SpinorField& psi, const GaugeField& gauge,
                              const RealField& v_sc, double hbar) {
    const UniformGrid& g = psi.grid();
    require_same_grid(g, gauge.grid(), "apply_hamiltonian");
    require_same_grid(g, v_sc.grid(), "apply_hamiltonian V_sc");

    SpinorField out(g);
    std::vector<cdouble> d(g.size()), dd(g.size());
    for (int c = 0; c < 2; ++c) {
        const auto& in = psi.comp(c);
        auto& res = out.comp(c);
        for (int a = 0; a < g.dim(); ++a) {
            const RealField* aa = gauge.has_magnetic() ? &gauge.a()[a] : nullptr;
            covariant_derivative(g, in, aa, hbar, a, d);
            covariant_derivative(g, d, aa, hbar, a, dd);
            for (std::int64_t i = 0; i < g.size(); ++i) res[i] -= 0.5 * dd[i];
        }
        for (std::int64_t i = 0; i < g.size(); ++i)
            res[i] += (gauge.v_ext()[i] + v_sc[i]) * in[i];
    }
    if (gauge.has_magnetic() && gauge.max_abs_b() > 0.0) {
        auto& up = out.comp(0);
        auto& dn = out.comp(1);
        const auto& u_in = psi.comp(0);
        const auto& d_in = psi.comp(1);
        for (std::int64_t i = 0; i < g.size(); ++i) {
            Mat2 sb = pauli::sigma_dot(gauge.b_at(i));
            up[i] -= 0.5 * hbar * (sb.a00 * u_in[i] + sb.a01 * d_in[i]);
            dn[i] -= 0.5 * hbar * (sb.a10 * u_in[i] + sb.a11 * d_in[i]);
        }
    }
    return out;
}

}  // namespace pauliflow
