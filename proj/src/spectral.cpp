#include "pauliflow/spectral.hpp"

#include "pauliflow/fft.hpp"

namespace pauliflow {

namespace {

// Multiply the axis-transformed array by i*k along the given axis.
void multiply_ik(const UniformGrid& g, std::vector<cdouble>& hat, int axis) {
    const auto& k = g.wavenumbers_grad(axis);
    const std::int64_t stride = g.stride(axis);
    const int n = g.n(axis);
    const std::int64_t total = g.size();
    for (std::int64_t base = 0; base < total; base += stride * n) {
        for (int m = 0; m < n; ++m) {
            cdouble ik = I * k[m];
            cdouble* p = hat.data() + base + m * stride;
            for (std::int64_t j = 0; j < stride; ++j) p[j] *= ik;
        }
    }
}

}  // namespace

void derivative_complex(const UniformGrid& g, const std::vector<cdouble>& in,
                        std::vector<cdouble>& out, int axis) {
    out = in;
    fft::forward_axis(g.dims(), axis, out.data());
    multiply_ik(g, out, axis);
    fft::backward_axis(g.dims(), axis, out.data());
}

RealField derivative(const RealField& f, int axis) {
    const UniformGrid& g = f.grid();
    std::vector<cdouble> buf(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) buf[i] = f[i];
    fft::forward_axis(g.dims(), axis, buf.data());
    multiply_ik(g, buf, axis);
    fft::backward_axis(g.dims(), axis, buf.data());
    RealField out(g);
    for (std::int64_t i = 0; i < g.size(); ++i) out[i] = buf[i].real();
    return out;
}

std::vector<RealField> gradient(const RealField& f) {
    std::vector<RealField> out;
    for (int a = 0; a < f.grid().dim(); ++a) out.push_back(derivative(f, a));
    return out;
}

RealField laplacian(const RealField& f) {
    const UniformGrid& g = f.grid();
    std::vector<cdouble> buf(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) buf[i] = f[i];
    fft::forward(g.dims(), buf.data());

    // Accumulate -|k|^2 over all axes on the fully transformed array.
    std::array<int, 3> idx{0, 0, 0};
    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    std::int64_t flat = 0;
    for (idx[0] = 0; idx[0] < n0; ++idx[0])
        for (idx[1] = 0; idx[1] < n1; ++idx[1])
            for (idx[2] = 0; idx[2] < n2; ++idx[2]) {
                double k2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    double k = g.wavenumbers(a)[idx[a]];
                    k2 += k * k;
                }
                buf[flat++] *= -k2;
            }
    fft::backward(g.dims(), buf.data());
    RealField out(g);
    for (std::int64_t i = 0; i < g.size(); ++i) out[i] = buf[i].real();
    return out;
}

RealField divergence(const std::vector<RealField>& v) {
    const UniformGrid& g = v.at(0).grid();
    RealField out(g);
    for (std::size_t a = 0; a < v.size(); ++a) {
        RealField da = derivative(v[a], static_cast<int>(a));
        for (std::int64_t i = 0; i < g.size(); ++i) out[i] += da[i];
    }
    return out;
}

std::array<RealField, 3> curl3(const UniformGrid& g, const RealField& vx,
                               const RealField& vy, const RealField& vz) {
    auto deriv_or_zero = [&](const RealField& f, int axis) {
        if (axis >= g.dim()) return RealField(g);
        return derivative(f, axis);
    };
    RealField dvz_dy = deriv_or_zero(vz, 1);
    RealField dvy_dz = deriv_or_zero(vy, 2);
    RealField dvx_dz = deriv_or_zero(vx, 2);
    RealField dvz_dx = deriv_or_zero(vz, 0);
    RealField dvy_dx = deriv_or_zero(vy, 0);
    RealField dvx_dy = deriv_or_zero(vx, 1);

    RealField cx(g), cy(g), cz(g);
    for (std::int64_t i = 0; i < g.size(); ++i) {
        cx[i] = dvz_dy[i] - dvy_dz[i];
        cy[i] = dvx_dz[i] - dvz_dx[i];
        cz[i] = dvy_dx[i] - dvx_dy[i];
    }
    return {cx, cy, cz};
}

std::vector<RealField> curl(const std::vector<RealField>& a) {
    const UniformGrid& g = a.at(0).grid();
    if (g.dim() == 3) {
        auto c = curl3(g, a[0], a[1], a[2]);
        return {c[0], c[1], c[2]};
    }
    if (g.dim() == 2) {
        // Out-of-plane component d(Ay)/dx - d(Ax)/dy.
        RealField day_dx = derivative(a[1], 0);
        RealField dax_dy = derivative(a[0], 1);
        RealField bz(g);
        for (std::int64_t i = 0; i < g.size(); ++i) bz[i] = day_dx[i] - dax_dy[i];
        return {bz};
    }
    throw ValidationError("curl requires dim >= 2");
}

}  // namespace pauliflow
