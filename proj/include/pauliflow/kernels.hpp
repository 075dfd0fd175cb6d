#pragma once

#include <optional>

#include "pauliflow/field.hpp"
#include "pauliflow/poisson.hpp"

namespace pauliflow {

enum class KernelTag { coulomb_3d, softened_coulomb, user_table };

// Even pair-interaction kernel W. Sign convention follows W(x) = -lambda/|x|
// (resp. -lambda/sqrt(|x|^2 + a^2)); user tables are sampled at minimum-image
// displacements and validated even.
class InteractionKernel {
  public:
    static InteractionKernel coulomb3d(double lambda);
    static InteractionKernel softened_coulomb(double lambda, double softening);
    static InteractionKernel user_table(RealField table);

    KernelTag tag() const { return tag_; }
    double lambda() const { return lambda_; }
    double softening() const { return softening_; }
    const RealField& table() const { return *table_; }

    // Pointwise value at displacement x (softened/coulomb forms only).
    double operator()(double dist) const;

  private:
    KernelTag tag_ = KernelTag::softened_coulomb;
    double lambda_ = 0.0;
    double softening_ = 0.0;
    std::optional<RealField> table_;
};

// V_H = W * rho. Softened and tabulated kernels convolve periodically at
// minimum image via spectral multiplication; coulomb_3d routes through the
// free-space Poisson solver (W*rho = -4 pi lambda V_free).
RealField hartree_potential(const RealField& rho, const InteractionKernel& kernel);

// Local exchange surrogate: -alpha * rho^{1/3}.
RealField xalpha_potential(const RealField& rho, double alpha_coeff);

// Kernel samples at minimum-image displacement, W(x_i - x_0) with x_0 the
// box origin offset; used by both the spectral convolution and the N-body
// pair interaction.
RealField tabulate_min_image(const UniformGrid& g, const InteractionKernel& kernel);

}  // namespace pauliflow
