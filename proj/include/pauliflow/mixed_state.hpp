#pragma once

#include "pauliflow/field.hpp"

namespace pauliflow {

// Weighted orbital family {lambda_j, Psi_j}. Orthonormality is enforced at
// construction only; propagation by a common unitary preserves it.
class MixedState {
  public:
    // Validates sum(lambda)=1 (1e-12), unit norms (1e-10) and pairwise
    // orthogonality (1e-8).
    MixedState(double hbar, std::vector<double> weights,
               std::vector<SpinorField> orbitals);

    // hbar-scaled constructor: additionally requires the weight condition
    // hbar^{-d} sum lambda_j^2 <= c_bound.
    static MixedState scaled(double hbar, std::vector<double> weights,
                             std::vector<SpinorField> orbitals, double c_bound);

    static MixedState pure(double hbar, SpinorField orbital);

    // Internal path for propagator output; skips the orthogonality sweep.
    static MixedState from_propagation(double hbar, std::vector<double> weights,
                                       std::vector<SpinorField> orbitals);

    double hbar() const { return hbar_; }
    int num_orbitals() const { return static_cast<int>(orbitals_.size()); }
    double weight(int j) const { return weights_[j]; }
    const std::vector<double>& weights() const { return weights_; }
    const SpinorField& orbital(int j) const { return orbitals_[j]; }
    SpinorField& orbital_mut(int j) { return orbitals_[j]; }
    const UniformGrid& grid() const { return orbitals_.front().grid(); }

    double total_mass() const;  // sum lambda_j ||Psi_j||^2
    // hbar^{-d} sum lambda_j^2 (Assumption-1 quantity).
    double weight_condition() const;

  private:
    MixedState() = default;
    double hbar_ = 1.0;
    std::vector<double> weights_;
    std::vector<SpinorField> orbitals_;
};

}  // namespace pauliflow
