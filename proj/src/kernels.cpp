#include "pauliflow/kernels.hpp"

#include <cmath>

#include "pauliflow/fft.hpp"

namespace pauliflow {

InteractionKernel InteractionKernel::coulomb3d(double lambda) {
    InteractionKernel k;
    k.tag_ = KernelTag::coulomb_3d;
    k.lambda_ = lambda;
    return k;
}

InteractionKernel InteractionKernel::softened_coulomb(double lambda, double softening) {
    if (!(softening > 0.0))
        throw ValidationError("softened Coulomb kernel requires softening > 0");
    InteractionKernel k;
    k.tag_ = KernelTag::softened_coulomb;
    k.lambda_ = lambda;
    k.softening_ = softening;
    return k;
}

InteractionKernel InteractionKernel::user_table(RealField table) {
    const UniformGrid& g = table.grid();
    // W(x) = W(-x): compare index i with its periodic reflection.
    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    double scale = std::max(1.0, table.max_abs());
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                std::int64_t a = (std::int64_t(i0) * n1 + i1) * n2 + i2;
                std::int64_t b = (std::int64_t((n0 - i0) % n0) * n1 + (n1 - i1) % n1) * n2 +
                                 (n2 - i2) % n2;
                if (std::abs(table[a] - table[b]) > 1e-12 * scale)
                    throw ValidationError("interaction kernel table must be even");
            }
    InteractionKernel k;
    k.tag_ = KernelTag::user_table;
    k.table_ = std::move(table);
    return k;
}

double InteractionKernel::operator()(double dist) const {
    switch (tag_) {
        case KernelTag::coulomb_3d:
            return -lambda_ / dist;
        case KernelTag::softened_coulomb:
            return -lambda_ / std::sqrt(dist * dist + softening_ * softening_);
        default:
            throw ValidationError("pointwise evaluation requires an analytic kernel");
    }
}

RealField tabulate_min_image(const UniformGrid& g, const InteractionKernel& kernel) {
    // Offsets live in DFT order: index m along an axis maps to displacement
    // m*h for m < n/2 and (m-n)*h beyond, i.e. the minimum image.
    RealField tab(g);
    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    auto disp = [&](int axis, int m) {
        int n = g.n(axis);
        int s = (m <= n / 2) ? m : m - n;
        return s * g.spacing(axis);
    };
    std::int64_t flat = 0;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                double x = disp(0, i0);
                double y = d > 1 ? disp(1, i1) : 0.0;
                double z = d > 2 ? disp(2, i2) : 0.0;
                tab[flat++] = kernel(std::sqrt(x * x + y * y + z * z));
            }
    return tab;
}

RealField hartree_potential(const RealField& rho, const InteractionKernel& kernel) {
    const UniformGrid& g = rho.grid();

    if (kernel.tag() == KernelTag::coulomb_3d) {
        if (g.dim() != 3)
            throw ValidationError("coulomb_3d kernel requires d=3; use softened_coulomb");
        RealField v = solve_poisson_free_space(rho);
        RealField out(g);
        double s = -4.0 * PI * kernel.lambda();
        for (std::int64_t i = 0; i < g.size(); ++i) out[i] = s * v[i];
        return out;
    }

    RealField tab = (kernel.tag() == KernelTag::user_table)
                        ? kernel.table()
                        : tabulate_min_image(g, kernel);
    require_same_grid(g, tab.grid(), "hartree kernel table");

    std::vector<cdouble> what(g.size()), rhat(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) {
        what[i] = tab[i];
        rhat[i] = rho[i];
    }
    fft::forward(g.dims(), what.data());
    fft::forward(g.dims(), rhat.data());
    double vol = g.cell_volume();
    for (std::int64_t i = 0; i < g.size(); ++i) rhat[i] *= what[i] * vol;
    fft::backward(g.dims(), rhat.data());

    RealField out(g);
    for (std::int64_t i = 0; i < g.size(); ++i) out[i] = rhat[i].real();
    return out;
}

RealField xalpha_potential(const RealField& rho, double alpha_coeff) {
    const UniformGrid& g = rho.grid();
    RealField out(g);
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double r = rho[i];
        if (r < -1e-12) throw ValidationError("xalpha requires a nonnegative density");
        out[i] = -alpha_coeff * std::cbrt(std::max(r, 0.0));
    }
    return out;
}

}  // namespace pauliflow
