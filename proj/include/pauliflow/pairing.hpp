#pragma once

#include <string>

#include "pauliflow/mixed_state.hpp"
#include "pauliflow/wigner.hpp"

namespace pauliflow {

// One smooth phase-space test function: per-axis tensor of Gaussian-Hermite
// profiles in x and p,
//   phi(x,p) = amp * prod_a He_{nx_a}((x_a-cx_a)/sx_a) e^{-(x_a-cx_a)^2/(2 sx_a^2)}
//                   * He_{np_a}((p_a-cp_a)/sp_a) e^{-(p_a-cp_a)^2/(2 sp_a^2)}.
struct PhaseSpaceTestFunction {
    double amplitude = 1.0;
    std::array<double, 3> center_x{0, 0, 0};
    std::array<double, 3> sigma_x{1, 1, 1};
    std::array<int, 3> order_x{0, 0, 0};
    std::array<double, 3> center_p{0, 0, 0};
    std::array<double, 3> sigma_p{1, 1, 1};
    std::array<int, 3> order_p{0, 0, 0};

    double evaluate(const std::array<double, 3>& x, const std::array<double, 3>& p,
                    int dim) const;
};

struct TestFunctionBasket {
    std::vector<PhaseSpaceTestFunction> functions;
    std::string version;

    static TestFunctionBasket load(const std::string& path);
};

// <Tr F_state, phi> for every basket function, evaluated without forming F:
// the pairing reduces to a banded double sum over the state's momentum
// support, exact for the discrete (u,v) quadrature of the Weyl pairing.
std::vector<double> weak_pairings(const MixedState& state,
                                  const TestFunctionBasket& basket);

}  // namespace pauliflow
