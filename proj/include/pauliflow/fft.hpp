#pragma once

#include <vector>

#include "pauliflow/common.hpp"

namespace pauliflow::fft {

// In-place complex-to-complex transforms on row-major arrays (last axis
// fastest). Plans are cached globally with FFTW_ESTIMATE so repeated runs
// are deterministic. forward() is unnormalized, backward() divides by the
// transform length, so backward(forward(x)) == x.
void forward(const std::vector<int>& dims, cdouble* data);
void backward(const std::vector<int>& dims, cdouble* data);

// Transform along a single axis of a row-major array; backward_axis
// normalizes by dims[axis].
void forward_axis(const std::vector<int>& dims, int axis, cdouble* data);
void backward_axis(const std::vector<int>& dims, int axis, cdouble* data);

}  // namespace pauliflow::fft
