#pragma once

#include "pauliflow/field.hpp"

namespace pauliflow {

// Pseudo-spectral derivatives on periodic grids. First derivatives zero the
// Nyquist bin; the Laplacian keeps the full |k|^2 symbol.
RealField derivative(const RealField& f, int axis);
std::vector<RealField> gradient(const RealField& f);
RealField laplacian(const RealField& f);
RealField divergence(const std::vector<RealField>& v);

// d/dx_axis of a complex array on the given grid, in place or into out.
void derivative_complex(const UniformGrid& g, const std::vector<cdouble>& in,
                        std::vector<cdouble>& out, int axis);

// Curl of a 3-component vector field sampled on a d-dimensional grid
// (missing axes are treated as constant). Returns all 3 components.
std::array<RealField, 3> curl3(const UniformGrid& g, const RealField& vx,
                               const RealField& vy, const RealField& vz);

// Curl of the in-plane gauge components: 3d -> 3 components, 2d -> scalar
// out-of-plane component (returned as a single field).
std::vector<RealField> curl(const std::vector<RealField>& a);

}  // namespace pauliflow
