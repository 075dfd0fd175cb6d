#pragma once

#include "pauliflow/gauge.hpp"
#include "pauliflow/mixed_state.hpp"

namespace pauliflow {

struct EnergyBreakdown {
    double kinetic = 0.0;       // sum_j lambda_j 1/2 ||(hbar grad - iA) Psi_j||^2
    double stern_gerlach = 0.0; // -sum_j lambda_j (hbar/2) <Psi_j, sigma.B Psi_j>
    double external = 0.0;      // sum_j lambda_j <Psi_j, V_ext Psi_j>
    double self = 0.0;          // 1/2 int |grad V_sc|^2
    double total() const { return kinetic + stern_gerlach + external + self; }
};

// rho_diag(x) = sum_j lambda_j |Psi_j(x)|^2.
RealField density(const MixedState& state);

// Magnetization m_k = sum_j lambda_j (conj(Psi_j) sigma_k Psi_j), k=1..3.
std::array<RealField, 3> magnetization(const MixedState& state);

std::array<double, 3> spin_expectation(const MixedState& state);

// Pauli current J = sum_j lambda_j [ Im(conj(Psi)(hbar grad - iA)Psi)
//                                    + s hbar curl(conj(Psi) sigma Psi) ],
// in-plane components only; spin_sign s is +1 or -1 (the paper prints both).
std::vector<RealField> pauli_current(const MixedState& state, const GaugeField& gauge,
                                     int spin_sign = +1);

// Convective part alone (the current minus its spin-curl term).
std::vector<RealField> convective_current(const MixedState& state,
                                          const GaugeField& gauge);

EnergyBreakdown energy(const MixedState& state, const GaugeField& gauge,
                       const RealField& v_sc);

// H Psi = -1/2 (hbar grad - iA)^2 Psi + (V_ext + V_sc) Psi
//         - (hbar/2) (sigma.B) Psi, evaluated pseudo-spectrally.
SpinorField apply_hamiltonian(const SpinorField& psi, const GaugeField& gauge,
                              const RealField& v_sc, double hbar);

// Energy-space distance: ||d||_2^2 + ||(grad - iA)d||_2^2 + ||(sigma.B)_+^{1/2} d||_2^2
// for d = a - b, square-rooted.
double energy_space_distance(const SpinorField& a, const SpinorField& b,
                             const GaugeField& gauge);

}  // namespace pauliflow
