#include "pauliflow/poisson.hpp"

#include <cmath>

#include "pauliflow/fft.hpp"

namespace pauliflow {

RealField solve_poisson_periodic(const RealField& rho) {
    const UniformGrid& g = rho.grid();
    std::vector<cdouble> buf(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) buf[i] = rho[i];
    fft::forward(g.dims(), buf.data());

    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    std::array<int, 3> idx{0, 0, 0};
    std::int64_t flat = 0;
    for (idx[0] = 0; idx[0] < n0; ++idx[0])
        for (idx[1] = 0; idx[1] < n1; ++idx[1])
            for (idx[2] = 0; idx[2] < n2; ++idx[2]) {
                double k2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    double k = g.wavenumbers(a)[idx[a]];
                    k2 += k * k;
                }
                buf[flat] = (k2 > 0.0) ? buf[flat] / k2 : cdouble{0.0, 0.0};
                ++flat;
            }
    fft::backward(g.dims(), buf.data());
    RealField out(g);
    for (std::int64_t i = 0; i < g.size(); ++i) out[i] = buf[i].real();
    return out;
}

RealField solve_poisson_free_space(const RealField& rho) {
    const UniformGrid& g = rho.grid();
    if (g.dim() != 3)
        throw ValidationError("free-space Poisson requires d=3; use a softened kernel otherwise");

    // Truncated-kernel convolution: G_R = 1/(4 pi |x|) cut at R = box diameter,
    // evaluated on a 4x padded box whose period keeps all kernel images clear
    // of the source box. The transform of G_R is analytic, so the solve is
    // spectrally accurate for smooth rho.
    double r2 = 0.0, lmin = g.extent(0);
    for (int a = 0; a < 3; ++a) {
        r2 += g.extent(a) * g.extent(a);
        lmin = std::min(lmin, g.extent(a));
    }
    const double radius = std::sqrt(r2);
    const int pad = 4;
    if (pad * lmin - radius <= radius)
        throw ValidationError("free-space Poisson: box too anisotropic for kernel truncation");

    std::vector<int> pdims = {pad * g.n(0), pad * g.n(1), pad * g.n(2)};
    std::int64_t psize = std::int64_t(pdims[0]) * pdims[1] * pdims[2];
    std::vector<cdouble> buf(psize, cdouble{0.0, 0.0});

    auto pidx = [&](int i0, int i1, int i2) {
        return (std::int64_t(i0) * pdims[1] + i1) * pdims[2] + i2;
    };
    for (int i0 = 0; i0 < g.n(0); ++i0)
        for (int i1 = 0; i1 < g.n(1); ++i1)
            for (int i2 = 0; i2 < g.n(2); ++i2)
                buf[pidx(i0, i1, i2)] =
                    rho[(std::int64_t(i0) * g.n(1) + i1) * g.n(2) + i2];

    fft::forward(pdims, buf.data());

    std::array<std::vector<double>, 3> kp;
    for (int a = 0; a < 3; ++a) {
        kp[a].resize(pdims[a]);
        double dk = 2.0 * PI / (pad * g.extent(a));
        for (int m = 0; m < pdims[a]; ++m) {
            int s = (m <= pdims[a] / 2 - 1) ? m : m - pdims[a];
            kp[a][m] = dk * s;
        }
    }
    std::int64_t flat = 0;
    for (int i0 = 0; i0 < pdims[0]; ++i0)
        for (int i1 = 0; i1 < pdims[1]; ++i1)
            for (int i2 = 0; i2 < pdims[2]; ++i2) {
                double k2 = kp[0][i0] * kp[0][i0] + kp[1][i1] * kp[1][i1] +
                            kp[2][i2] * kp[2][i2];
                double ghat = (k2 > 0.0)
                                  ? (1.0 - std::cos(radius * std::sqrt(k2))) / k2
                                  : 0.5 * radius * radius;
                buf[flat++] *= ghat;
            }
    fft::backward(pdims, buf.data());

    RealField out(g);
    for (int i0 = 0; i0 < g.n(0); ++i0)
        for (int i1 = 0; i1 < g.n(1); ++i1)
            for (int i2 = 0; i2 < g.n(2); ++i2)
                out[(std::int64_t(i0) * g.n(1) + i1) * g.n(2) + i2] =
                    buf[pidx(i0, i1, i2)].real();
    return out;
}

RealField solve_poisson(const RealField& rho, const PoissonConfig& cfg) {
    rho.check_finite("poisson source");
    if (cfg.mode == PoissonMode::periodic_zero_mean) return solve_poisson_periodic(rho);
    return solve_poisson_free_space(rho);
}

}  // namespace pauliflow
