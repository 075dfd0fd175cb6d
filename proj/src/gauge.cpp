#include "pauliflow/gauge.hpp"

#include <cmath>

namespace pauliflow {

namespace {

// Max deviation of component a_j from its mean along axis j.
double axis_variation(const RealField& f, int axis) {
    const UniformGrid& g = f.grid();
    const std::int64_t stride = g.stride(axis);
    const int n = g.n(axis);
    const std::int64_t total = g.size();
    double worst = 0.0;
    for (std::int64_t base = 0; base < total; base += stride * n) {
        for (std::int64_t j = 0; j < stride; ++j) {
            double mean = 0.0;
            for (int m = 0; m < n; ++m) mean += f[base + m * stride + j];
            mean /= n;
            for (int m = 0; m < n; ++m)
                worst = std::max(worst, std::abs(f[base + m * stride + j] - mean));
        }
    }
    return worst;
}

}  // namespace

GaugeField::GaugeField(UniformGrid grid, std::vector<RealField> a, RealField v_ext,
                       std::vector<RealField> analytic_b)
    : grid_(std::move(grid)), a_(std::move(a)), v_ext_(std::move(v_ext)) {
    require_same_grid(grid_, v_ext_.grid(), "gauge V_ext");
    if (grid_.dim() == 1 && !a_.empty())
        throw ValidationError("magnetic potential not supported in 1d");
    if (!a_.empty() && static_cast<int>(a_.size()) != grid_.dim())
        throw ValidationError("gauge A must have dim components");
    for (const auto& comp : a_) require_same_grid(grid_, comp.grid(), "gauge A");

    if (!a_.empty()) {
        // Linear gauges (Landau) wrap discontinuously on the periodic box, so
        // presets pass their curl analytically; tabulated periodic A gets the
        // spectral curl.
        b_ = analytic_b.empty() ? curl(a_) : std::move(analytic_b);
        double scale = std::max(1.0, max_abs_a());
        for (int j = 0; j < grid_.dim(); ++j) {
            if (axis_variation(a_[j], j) > 1e-12 * scale) {
                splitting_compatible_ = false;
                break;
            }
        }
        div_a_max_ = divergence(a_).max_abs();
    }
}

GaugeField GaugeField::zero(const UniformGrid& g) {
    std::vector<RealField> a;
    if (g.dim() >= 2)
        for (int j = 0; j < g.dim(); ++j) a.emplace_back(g);
    return GaugeField(g, std::move(a), RealField(g));
}

GaugeField GaugeField::uniform_b_landau(const UniformGrid& g, double b0) {
    if (g.dim() < 2)
        throw ValidationError("uniform_b_landau requires dim >= 2");
    std::vector<RealField> a;
    RealField ax = RealField::sample(
        g, [&](const std::array<double, 3>& x) { return -b0 * x[1]; });
    a.push_back(std::move(ax));
    for (int j = 1; j < g.dim(); ++j) a.emplace_back(g);

    std::vector<RealField> b;
    if (g.dim() == 2) {
        b.emplace_back(g, b0);
    } else {
        b.emplace_back(g);
        b.emplace_back(g);
        b.emplace_back(g, b0);
    }
    return GaugeField(g, std::move(a), RealField(g), std::move(b));
}

GaugeField GaugeField::user_table(const UniformGrid& g, std::vector<RealField> a,
                                  RealField v_ext) {
    return GaugeField(g, std::move(a), std::move(v_ext));
}

std::array<double, 3> GaugeField::b_at(std::int64_t i) const {
    if (b_.empty()) return {0.0, 0.0, 0.0};
    if (grid_.dim() == 2) return {0.0, 0.0, b_[0][i]};
    return {b_[0][i], b_[1][i], b_[2][i]};
}

double GaugeField::max_abs_b() const {
    double m = 0.0;
    for (const auto& f : b_) m = std::max(m, f.max_abs());
    return m;
}

double GaugeField::max_abs_a() const {
    double m = 0.0;
    for (const auto& f : a_) m = std::max(m, f.max_abs());
    return m;
}

}  // namespace pauliflow
