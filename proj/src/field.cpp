#include "pauliflow/field.hpp"

#include <cmath>

namespace pauliflow {

RealField::RealField(UniformGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
    if (static_cast<std::int64_t>(v_.size()) != grid_.size())
        throw ValidationError("field values do not match grid size");
}

double RealField::integral() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s * grid_.cell_volume();
}

double RealField::mean() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s / static_cast<double>(v_.size());
}

double RealField::l2_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return std::sqrt(s * grid_.cell_volume());
}

double RealField::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

void RealField::check_finite(const char* what) const {
    for (double x : v_)
        if (!std::isfinite(x))
            throw NumericalError(std::string("non-finite value in ") + what);
}

RealField RealField::sample(const UniformGrid& g,
                            const std::function<double(const std::array<double, 3>&)>& f) {
    RealField out(g);
    std::array<int, 3> idx{0, 0, 0};
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::int64_t flat = 0;
    const int d = g.dim();
    // Row-major walk over up to 3 axes.
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    for (int i0 = 0; i0 < n0; ++i0) {
        x[0] = g.coord(0, i0);
        for (int i1 = 0; i1 < n1; ++i1) {
            if (d > 1) x[1] = g.coord(1, i1);
            for (int i2 = 0; i2 < n2; ++i2) {
                if (d > 2) x[2] = g.coord(2, i2);
                out[flat++] = f(x);
            }
        }
    }
    (void)idx;
    return out;
}

SpinorField::SpinorField(UniformGrid grid) : grid_(std::move(grid)) {
    comp_[0].assign(grid_.size(), cdouble{0.0, 0.0});
    comp_[1].assign(grid_.size(), cdouble{0.0, 0.0});
}

double SpinorField::norm() const {
    double s = 0.0;
    for (int c = 0; c < 2; ++c)
        for (const cdouble& z : comp_[c]) s += std::norm(z);
    return std::sqrt(s * grid_.cell_volume());
}

cdouble SpinorField::inner(const SpinorField& o) const {
    require_same_grid(grid_, o.grid_, "spinor inner product");
    cdouble s{0.0, 0.0};
    for (int c = 0; c < 2; ++c) {
        const auto& a = comp_[c];
        const auto& b = o.comp_[c];
        for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    }
    return s * grid_.cell_volume();
}

void SpinorField::scale(cdouble s) {
    for (int c = 0; c < 2; ++c)
        for (cdouble& z : comp_[c]) z *= s;
}

void SpinorField::normalize() {
    double n = norm();
    if (n <= 0.0) throw NumericalError("cannot normalize zero spinor");
    scale(1.0 / n);
}

void SpinorField::check_finite(const char* what) const {
    for (int c = 0; c < 2; ++c)
        for (const cdouble& z : comp_[c])
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw NumericalError(std::string("non-finite value in ") + what);
}

namespace {

double hermite_poly(int n, double x) {
    // Probabilists' Hermite He_n.
    double h0 = 1.0, h1 = x;
    if (n == 0) return h0;
    if (n == 1) return h1;
    for (int k = 2; k <= n; ++k) {
        double h2 = x * h1 - (k - 1) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

SpinorField modulated_envelope(const UniformGrid& g, const std::array<double, 3>& center,
                               double sigma, const std::array<double, 3>& wavevec,
                               const std::array<int, 3>& order,
                               const std::array<cdouble, 2>& spin) {
    SpinorField out(g);
    double sa = std::sqrt(std::norm(spin[0]) + std::norm(spin[1]));
    if (sa <= 0.0) throw ValidationError("zero spin amplitude");
    cdouble s0 = spin[0] / sa, s1 = spin[1] / sa;

    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;

    // Periodize the modulated packet over box images so the sampled state is
    // smooth across the wrap; a seam jump would leave spurious high-k content.
    auto packet = [&](double x0, double x1, double x2) {
        double env = std::exp(-(x0 * x0 + x1 * x1 + x2 * x2) / (4.0 * sigma * sigma));
        env *= hermite_poly(order[0], x0 / sigma);
        if (d > 1) env *= hermite_poly(order[1], x1 / sigma);
        if (d > 2) env *= hermite_poly(order[2], x2 / sigma);
        double phase = wavevec[0] * (x0 + center[0]) + wavevec[1] * (x1 + center[1]) +
                       wavevec[2] * (x2 + center[2]);
        return env * std::exp(I * phase);
    };
    const int images = 2;
    int m1max = d > 1 ? images : 0, m2max = d > 2 ? images : 0;

    std::int64_t flat = 0;
    for (int i0 = 0; i0 < n0; ++i0) {
        double x0 = g.coord(0, i0) - center[0];
        for (int i1 = 0; i1 < n1; ++i1) {
            double x1 = d > 1 ? g.coord(1, i1) - center[1] : 0.0;
            for (int i2 = 0; i2 < n2; ++i2) {
                double x2 = d > 2 ? g.coord(2, i2) - center[2] : 0.0;
                cdouble z{0.0, 0.0};
                for (int m0 = -images; m0 <= images; ++m0)
                    for (int m1 = -m1max; m1 <= m1max; ++m1)
                        for (int m2 = -m2max; m2 <= m2max; ++m2)
                            z += packet(x0 + m0 * g.extent(0),
                                        x1 + (d > 1 ? m1 * g.extent(1) : 0.0),
                                        x2 + (d > 2 ? m2 * g.extent(2) : 0.0));
                out.comp(0)[flat] = s0 * z;
                out.comp(1)[flat] = s1 * z;
                ++flat;
            }
        }
    }
    out.normalize();
    return out;
}

}  // namespace

SpinorField SpinorField::gaussian(const UniformGrid& g, const std::array<double, 3>& center,
                                  double sigma, const std::array<double, 3>& wavevec,
                                  const std::array<cdouble, 2>& spin) {
    return modulated_envelope(g, center, sigma, wavevec, {0, 0, 0}, spin);
}

SpinorField SpinorField::hermite(const UniformGrid& g, const std::array<double, 3>& center,
                                 double sigma, const std::array<int, 3>& order,
                                 const std::array<cdouble, 2>& spin) {
    return modulated_envelope(g, center, sigma, {0.0, 0.0, 0.0}, order, spin);
}

}  // namespace pauliflow
