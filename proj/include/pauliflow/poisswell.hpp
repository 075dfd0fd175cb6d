#pragma once

#include "pauliflow/gauge.hpp"
#include "pauliflow/mixed_state.hpp"

namespace pauliflow {

struct PoisswellOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double damping = 1.0;  // Picard update fraction; <1 damps strong coupling
    int spin_sign = +1;
};

struct PoisswellResult {
    GaugeField gauge;
    int iterations = 0;
    double residual = 0.0;                 // last ||A_{k+1} - A_k||_2
    std::vector<double> residual_history;  // per accepted iterate
};

// Quasi-static magnetostatic update: Picard fixed point of
// A = solve_poisson(J(Psi, A)) component-wise on the periodic box (c = 1).
// Throws NumericalError with the last residual if max_iter is exhausted.
PoisswellResult poisswell_update(const MixedState& state, const GaugeField& gauge_prev,
                                 const PoisswellOptions& opt = {});

}  // namespace pauliflow
