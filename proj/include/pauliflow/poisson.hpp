#pragma once

#include "pauliflow/field.hpp"

namespace pauliflow {

enum class PoissonMode { periodic_zero_mean, free_space_truncated_kernel };

struct PoissonConfig {
    PoissonMode mode = PoissonMode::periodic_zero_mean;
    double coupling = 1.0;   // Hartree strength multiplying V_sc downstream
    double softening = 0.0;  // reduced-dimension kernel parameter
};

// Solves -Lap V = rho - mean(rho) (periodic) or -Lap V = rho with decay at
// infinity (free space, 3d only, truncated Green kernel on a 4x padded box).
RealField solve_poisson(const RealField& rho, const PoissonConfig& cfg);

RealField solve_poisson_periodic(const RealField& rho);
RealField solve_poisson_free_space(const RealField& rho);

}  // namespace pauliflow
