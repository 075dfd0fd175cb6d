#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pauliflow {

using cdouble = std::complex<double>;
inline constexpr cdouble I{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

// Error taxonomy; the CLI maps these onto exit codes 2/3/4.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pauliflow
