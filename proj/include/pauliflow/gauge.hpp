#pragma once

#include "pauliflow/field.hpp"
#include "pauliflow/spectral.hpp"

namespace pauliflow {

// Magnetic potential A, cached field B = curl A, and external potential.
// In 2d, B reduces to the scalar out-of-plane component; in 1d magnetic
// terms are disabled (A and B empty).
class GaugeField {
  public:
    // A must have grid.dim() components (empty for 1d). analytic_b overrides
    // the spectral curl for gauges that wrap discontinuously (Landau).
    GaugeField(UniformGrid grid, std::vector<RealField> a, RealField v_ext,
               std::vector<RealField> analytic_b = {});

    static GaugeField zero(const UniformGrid& g);
    // Landau gauge A = (-B0 y, 0[, 0]); requires dim >= 2.
    static GaugeField uniform_b_landau(const UniformGrid& g, double b0);
    static GaugeField user_table(const UniformGrid& g, std::vector<RealField> a,
                                 RealField v_ext);

    const UniformGrid& grid() const { return grid_; }
    bool has_magnetic() const { return !a_.empty(); }
    const std::vector<RealField>& a() const { return a_; }
    const RealField& v_ext() const { return v_ext_; }
    // B components: 3 fields in 3d, 1 field (Bz) in 2d, none in 1d.
    const std::vector<RealField>& b() const { return b_; }
    std::array<double, 3> b_at(std::int64_t i) const;
    double max_abs_b() const;
    double max_abs_a() const;

    // A_j independent of x_j for every component (verified numerically).
    bool splitting_compatible() const { return splitting_compatible_; }
    // max |div A| relative to field scale; zero for Coulomb-gauge presets.
    double div_a_max() const { return div_a_max_; }

  private:
    UniformGrid grid_;
    std::vector<RealField> a_;
    RealField v_ext_;
    std::vector<RealField> b_;
    bool splitting_compatible_ = true;
    double div_a_max_ = 0.0;
};

}  // namespace pauliflow
