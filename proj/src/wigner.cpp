#include "pauliflow/wigner.hpp"

#include <cmath>
#include <limits>

#include "pauliflow/fft.hpp"

namespace pauliflow {

namespace {

UniformGrid refine(const UniformGrid& g) {
    std::vector<int> n;
    std::vector<double> ext;
    for (int a = 0; a < g.dim(); ++a) {
        n.push_back(2 * g.n(a));
        ext.push_back(g.extent(a));
    }
    return UniformGrid(g.dim(), n, ext, std::numeric_limits<std::int64_t>::max());
}

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(UniformGrid state_grid, double hbar)
    : x_(std::move(state_grid)), xfine_(refine(x_)), hbar_(hbar) {
    if (!(hbar_ > 0.0)) throw ValidationError("phase-space grid requires hbar > 0");
}

double PhaseSpaceGrid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < x_.dim(); ++a) v *= xfine_.spacing(a) * dxi(a);
    return v;
}

double PhaseSpaceGrid::min_admissible_hbar(const UniformGrid& g, double p_band) {
    double worst = 0.0;
    for (int a = 0; a < g.dim(); ++a)
        worst = std::max(worst, 2.0 * g.extent(a) * p_band / (PI * g.n(a)));
    return worst;
}

double PhaseSpaceGrid::snap_hbar(const UniformGrid& g, double requested, double p_band,
                                 bool* snapped) {
    double lo = min_admissible_hbar(g, p_band);
    if (snapped) *snapped = requested < lo;
    return std::max(requested, lo);
}

double PhaseSpaceField::integral() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s * grid_.cell_volume();
}

double PhaseSpaceField::l2_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return std::sqrt(s * grid_.cell_volume());
}

WignerMatrix::WignerMatrix(PhaseSpaceGrid g)
    : grid_(std::move(g)),
      npts_(grid_.x_size() * grid_.xi_size()),
      data_(4 * npts_, cdouble{0.0, 0.0}) {}

double WignerMatrix::max_hermiticity_defect() const {
    double worst = 0.0;
    for (std::int64_t p = 0; p < npts_; ++p) {
        const cdouble* m = at(p);
        worst = std::max(worst, std::abs(m[0] - std::conj(m[0])));
        worst = std::max(worst, std::abs(m[3] - std::conj(m[3])));
        worst = std::max(worst, std::abs(m[1] - std::conj(m[2])));
    }
    return worst;
}

double WignerMatrix::max_imag_trace() const {
    double worst = 0.0;
    for (std::int64_t p = 0; p < npts_; ++p)
        worst = std::max(worst, std::abs((at(p)[0] + at(p)[3]).imag()));
    return worst;
}

PhaseSpaceField WignerMatrix::trace() const {
    PhaseSpaceField f(grid_);
    for (std::int64_t p = 0; p < npts_; ++p)
        f[p] = (at(p)[0] + at(p)[3]).real();
    return f;
}

double WignerMatrix::l2_norm() const {
    double s = 0.0;
    for (const cdouble& z : data_) s += std::norm(z);
    return std::sqrt(s * grid_.cell_volume());
}

namespace {

// Geometry shared by the transform and the theta operators. Output point j
// (fine lattice) has per-axis parity p = j&1; the offset index m (DFT order
// on the doubled range N = 2n) pairs state samples
//   u = (j+p)/2 + s(m),  v = (j-p)/2 - s(m)
// and the offset coordinate is y_m = (2 s(m) + p) h / hbar. The per-axis
// half-bin phase exp(-i pi l~ p / N) relates the DFT to e^{-i xi y}.
struct FineGeometry {
    explicit FineGeometry(const PhaseSpaceGrid& ps)
        : state(ps.xgrid()), fine(ps.xfine()) {}

    int signed_m(int axis, int m) const {
        int nn = fine.n(axis);
        return (m <= nn / 2 - 1) ? m : m - nn;
    }
    std::array<int, 3> decompose(std::int64_t flat) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = fine.dim() - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % fine.n(a));
            flat /= fine.n(a);
        }
        return idx;
    }

    const UniformGrid& state;
    const UniformGrid& fine;
};

void for_each_index(const UniformGrid& g,
                    const std::function<void(std::int64_t, const std::array<int, 3>&)>& fn) {
    const int d = g.dim();
    std::array<int, 3> m{0, 0, 0};
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    std::int64_t flat = 0;
    for (m[0] = 0; m[0] < n0; ++m[0])
        for (m[1] = 0; m[1] < n1; ++m[1])
            for (m[2] = 0; m[2] < n2; ++m[2]) fn(flat++, m);
}

// Parity phase exp(-i pi l~ p / N) accumulated over axes, tabulated per
// xi-flat-index for a given output parity vector.
std::vector<cdouble> parity_phase(const FineGeometry& geo,
                                  const std::array<int, 3>& parity, int sign) {
    const UniformGrid& f = geo.fine;
    std::vector<cdouble> ph(f.size());
    for_each_index(f, [&](std::int64_t lf, const std::array<int, 3>& l) {
        double arg = 0.0;
        for (int a = 0; a < f.dim(); ++a) {
            if (!parity[a]) continue;
            int ls = geo.signed_m(a, l[a]);
            arg += PI * ls / f.n(a);
        }
        ph[lf] = std::exp(cdouble{0.0, sign * -1.0 * arg});
    });
    return ph;
}

}  // namespace

WignerMatrix wigner_transform(const MixedState& state, bool periodic_wrap) {
    const UniformGrid& g = state.grid();
    PhaseSpaceGrid ps(g, state.hbar());
    WignerMatrix out(ps);
    FineGeometry geo(ps);

    double pref = 1.0;
    for (int a = 0; a < g.dim(); ++a) pref *= g.spacing(a) / (PI * state.hbar());
    const std::int64_t nxi = ps.xi_size();
    const int d = g.dim();

#pragma omp parallel
    {
        std::array<std::vector<cdouble>, 4> c;
        for (auto& v : c) v.resize(nxi);

#pragma omp for schedule(static)
        for (std::int64_t jf = 0; jf < ps.x_size(); ++jf) {
            auto j = geo.decompose(jf);
            std::array<int, 3> parity{0, 0, 0}, bu{0, 0, 0}, bv{0, 0, 0};
            for (int a = 0; a < d; ++a) {
                parity[a] = j[a] & 1;
                bu[a] = (j[a] + parity[a]) / 2;
                bv[a] = (j[a] - parity[a]) / 2;
            }
            for (auto& v : c) std::fill(v.begin(), v.end(), cdouble{0.0, 0.0});

            for_each_index(geo.fine, [&](std::int64_t mf, const std::array<int, 3>& m) {
                std::int64_t u = 0, v = 0;
                for (int a = 0; a < d; ++a) {
                    int s = geo.signed_m(a, m[a]);
                    int ua = bu[a] + s, va = bv[a] - s;
                    if (periodic_wrap) {
                        ua = (ua % g.n(a) + g.n(a)) % g.n(a);
                        va = (va % g.n(a) + g.n(a)) % g.n(a);
                    } else if (ua < 0 || ua >= g.n(a) || va < 0 || va >= g.n(a)) {
                        return;
                    }
                    u += std::int64_t(ua) * g.stride(a);
                    v += std::int64_t(va) * g.stride(a);
                }
                for (int jj = 0; jj < state.num_orbitals(); ++jj) {
                    double w = state.weight(jj);
                    const SpinorField& psi = state.orbital(jj);
                    cdouble u0 = psi.comp(0)[u], u1 = psi.comp(1)[u];
                    cdouble v0 = std::conj(psi.comp(0)[v]), v1 = std::conj(psi.comp(1)[v]);
                    c[0][mf] += w * u0 * v0;
                    c[1][mf] += w * u0 * v1;
                    c[2][mf] += w * u1 * v0;
                    c[3][mf] += w * u1 * v1;
                }
            });
            std::vector<cdouble> ph = parity_phase(geo, parity, +1);
            cdouble* dst = out.data().data() + 4 * (jf * nxi);
            for (int e = 0; e < 4; ++e) {
                fft::forward(geo.fine.dims(), c[e].data());
                for (std::int64_t l = 0; l < nxi; ++l)
                    dst[4 * l + e] = pref * ph[l] * c[e][l];
            }
        }
    }
    return out;
}

PhaseSpaceField wigner_trace_transform(const MixedState& state) {
    const UniformGrid& g = state.grid();
    PhaseSpaceGrid ps(g, state.hbar());
    PhaseSpaceField out(ps);
    FineGeometry geo(ps);

    double pref = 1.0;
    for (int a = 0; a < g.dim(); ++a) pref *= g.spacing(a) / (PI * state.hbar());
    const std::int64_t nxi = ps.xi_size();
    const int d = g.dim();

#pragma omp parallel
    {
        std::vector<cdouble> c(nxi);
#pragma omp for schedule(static)
        for (std::int64_t jf = 0; jf < ps.x_size(); ++jf) {
            auto j = geo.decompose(jf);
            std::array<int, 3> parity{0, 0, 0}, bu{0, 0, 0}, bv{0, 0, 0};
            for (int a = 0; a < d; ++a) {
                parity[a] = j[a] & 1;
                bu[a] = (j[a] + parity[a]) / 2;
                bv[a] = (j[a] - parity[a]) / 2;
            }
            std::fill(c.begin(), c.end(), cdouble{0.0, 0.0});
            for_each_index(geo.fine, [&](std::int64_t mf, const std::array<int, 3>& m) {
                std::int64_t u = 0, v = 0;
                for (int a = 0; a < d; ++a) {
                    int s = geo.signed_m(a, m[a]);
                    int ua = bu[a] + s, va = bv[a] - s;
                    if (ua < 0 || ua >= g.n(a) || va < 0 || va >= g.n(a)) return;
                    u += std::int64_t(ua) * g.stride(a);
                    v += std::int64_t(va) * g.stride(a);
                }
                for (int jj = 0; jj < state.num_orbitals(); ++jj) {
                    double w = state.weight(jj);
                    const SpinorField& psi = state.orbital(jj);
                    c[mf] += w * (psi.comp(0)[u] * std::conj(psi.comp(0)[v]) +
                                  psi.comp(1)[u] * std::conj(psi.comp(1)[v]));
                }
            });
            std::vector<cdouble> ph = parity_phase(geo, parity, +1);
            fft::forward(geo.fine.dims(), c.data());
            for (std::int64_t l = 0; l < nxi; ++l)
                out[jf * nxi + l] = pref * (ph[l] * c[l]).real();
        }
    }
    return out;
}

RealField wigner_density_moment(const WignerMatrix& f) {
    const PhaseSpaceGrid& ps = f.grid();
    double dv = 1.0;
    for (int a = 0; a < ps.xgrid().dim(); ++a) dv *= ps.dxi(a);

    RealField rho(ps.xfine());
    const std::int64_t nxi = ps.xi_size();
    for (std::int64_t xf = 0; xf < ps.x_size(); ++xf) {
        double s = 0.0;
        const cdouble* base = f.data().data() + 4 * (xf * nxi);
        for (std::int64_t l = 0; l < nxi; ++l)
            s += (base[4 * l] + base[4 * l + 3]).real();
        rho[xf] = s * dv;
    }
    return rho;
}

std::vector<RealField> wigner_current_moment(const WignerMatrix& f) {
    const PhaseSpaceGrid& ps = f.grid();
    const UniformGrid& fine = ps.xfine();
    const int d = fine.dim();
    double dv = 1.0;
    for (int a = 0; a < d; ++a) dv *= ps.dxi(a);

    std::vector<RealField> j;
    for (int a = 0; a < d; ++a) j.emplace_back(fine);

    const std::int64_t nxi = ps.xi_size();
    std::array<int, 3> li{0, 0, 0};
    for (std::int64_t xf = 0; xf < ps.x_size(); ++xf) {
        const cdouble* base = f.data().data() + 4 * (xf * nxi);
        std::int64_t l = 0;
        int n0 = fine.n(0), n1 = d > 1 ? fine.n(1) : 1, n2 = d > 2 ? fine.n(2) : 1;
        for (li[0] = 0; li[0] < n0; ++li[0])
            for (li[1] = 0; li[1] < n1; ++li[1])
                for (li[2] = 0; li[2] < n2; ++li[2]) {
                    double tr = (base[4 * l] + base[4 * l + 3]).real();
                    for (int a = 0; a < d; ++a) j[a][xf] += ps.xi(a, li[a]) * tr;
                    ++l;
                }
        for (int a = 0; a < d; ++a) j[a][xf] *= dv;
    }
    return j;
}

namespace {

std::vector<int> phase_space_dims(const PhaseSpaceGrid& ps, int comps) {
    std::vector<int> dims;
    for (int a = 0; a < ps.xgrid().dim(); ++a) dims.push_back(ps.nx(a));
    for (int a = 0; a < ps.xgrid().dim(); ++a) dims.push_back(ps.nxi(a));
    if (comps > 1) dims.push_back(comps);
    return dims;
}

PhaseSpaceField husimi_impl(const PhaseSpaceGrid& ps, const std::vector<double>& in) {
    const double hbar = ps.hbar();
    std::vector<cdouble> buf(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i];

    std::vector<int> dims = phase_space_dims(ps, 1);
    const int d = ps.xgrid().dim();

    // x axes: periodic Gaussian transfer exp(-hbar k^2 / 2) on the fine grid
    for (int a = 0; a < d; ++a) {
        fft::forward_axis(dims, a, buf.data());
        const auto& k = ps.xfine().wavenumbers(a);
        std::int64_t stride = 1;
        for (std::size_t b = a + 1; b < dims.size(); ++b) stride *= dims[b];
        const int n = dims[a];
        for (std::int64_t base = 0; base < static_cast<std::int64_t>(buf.size());
             base += stride * n)
            for (int m = 0; m < n; ++m) {
                double t = std::exp(-0.5 * hbar * k[m] * k[m]);
                cdouble* p = buf.data() + base + m * stride;
                for (std::int64_t q = 0; q < stride; ++q) p[q] *= t;
            }
        fft::backward_axis(dims, a, buf.data());
    }
    // xi axes: conjugate variable is the offset lattice with spacing 2h/hbar
    for (int a = 0; a < d; ++a) {
        int axis = d + a;
        fft::forward_axis(dims, axis, buf.data());
        const double dy = 2.0 * ps.xgrid().spacing(a) / hbar;
        std::int64_t stride = 1;
        for (std::size_t b = axis + 1; b < dims.size(); ++b) stride *= dims[b];
        const int n = dims[axis];
        for (std::int64_t base = 0; base < static_cast<std::int64_t>(buf.size());
             base += stride * n)
            for (int m = 0; m < n; ++m) {
                int s = (m <= n / 2 - 1) ? m : m - n;
                double y = s * dy;
                double t = std::exp(-0.5 * hbar * y * y);
                cdouble* p = buf.data() + base + m * stride;
                for (std::int64_t q = 0; q < stride; ++q) p[q] *= t;
            }
        fft::backward_axis(dims, axis, buf.data());
    }

    PhaseSpaceField out(ps);
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = buf[i].real();
    return out;
}

}  // namespace

PhaseSpaceField husimi(const PhaseSpaceField& f) {
    return husimi_impl(f.grid(), f.values());
}

PhaseSpaceField husimi(const WignerMatrix& f) {
    return husimi_impl(f.grid(), f.trace().values());
}

namespace {

enum class SymbolKind { scalar, scalar_function, sigma_b };

// Apply theta[g] in the y-representation, per fine-lattice x point. Field
// symbols wrap L-periodically onto the state grid; analytic symbols are
// evaluated at the unwrapped displaced coordinates.
WignerMatrix theta_impl(const WignerMatrix& phi, SymbolKind kind,
                        const RealField* g_scalar, const GaugeField* gauge,
                        const std::function<double(const std::array<double, 3>&)>* gfun) {
    const PhaseSpaceGrid& ps = phi.grid();
    const UniformGrid& g = ps.xgrid();
    const double hbar = ps.hbar();
    WignerMatrix out(ps);
    FineGeometry geo(ps);
    const std::int64_t nxi = ps.xi_size();
    const int d = g.dim();

#pragma omp parallel
    {
        std::array<std::vector<cdouble>, 4> e;
        for (auto& v : e) v.resize(nxi);

#pragma omp for schedule(static)
        for (std::int64_t jf = 0; jf < ps.x_size(); ++jf) {
            auto j = geo.decompose(jf);
            std::array<int, 3> parity{0, 0, 0}, bu{0, 0, 0}, bv{0, 0, 0};
            for (int a = 0; a < d; ++a) {
                parity[a] = j[a] & 1;
                bu[a] = (j[a] + parity[a]) / 2;
                bv[a] = (j[a] - parity[a]) / 2;
            }
            std::vector<cdouble> ph_fwd = parity_phase(geo, parity, +1);

            const cdouble* src = phi.data().data() + 4 * (jf * nxi);
            for (int c = 0; c < 4; ++c) {
                for (std::int64_t l = 0; l < nxi; ++l)
                    e[c][l] = src[4 * l + c] / ph_fwd[l];
                fft::backward(geo.fine.dims(), e[c].data());  // xi -> offset rep
            }
            for_each_index(geo.fine, [&](std::int64_t mf, const std::array<int, 3>& m) {
                // state-grid indices of the displaced points, L-periodic wrap
                std::int64_t u = 0, v = 0;
                std::array<double, 3> xp{0, 0, 0}, xm{0, 0, 0};
                for (int a = 0; a < d; ++a) {
                    int s = geo.signed_m(a, m[a]);
                    int ua = ((bu[a] + s) % g.n(a) + g.n(a)) % g.n(a);
                    int va = ((bv[a] - s) % g.n(a) + g.n(a)) % g.n(a);
                    u += std::int64_t(ua) * g.stride(a);
                    v += std::int64_t(va) * g.stride(a);
                    if (kind == SymbolKind::scalar_function) {
                        double x = ps.x(a, j[a]);
                        double off = (s + 0.5 * parity[a]) * g.spacing(a);
                        xp[a] = x + off;
                        xm[a] = x - off;
                    }
                }
                switch (kind) {
                    case SymbolKind::scalar: {
                        cdouble dl = (I / hbar) * ((*g_scalar)[u] - (*g_scalar)[v]);
                        for (int c = 0; c < 4; ++c) e[c][mf] *= dl;
                        break;
                    }
                    case SymbolKind::scalar_function: {
                        cdouble dl = (I / hbar) * ((*gfun)(xp) - (*gfun)(xm));
                        for (int c = 0; c < 4; ++c) e[c][mf] *= dl;
                        break;
                    }
                    case SymbolKind::sigma_b: {
                        Mat2 gu = pauli::sigma_dot(gauge->b_at(u));
                        Mat2 gv = pauli::sigma_dot(gauge->b_at(v));
                        Mat2 p{e[0][mf], e[1][mf], e[2][mf], e[3][mf]};
                        Mat2 r = (gu * p - p * gv) * (I / hbar);
                        e[0][mf] = r.a00;
                        e[1][mf] = r.a01;
                        e[2][mf] = r.a10;
                        e[3][mf] = r.a11;
                        break;
                    }
                }
            });
            cdouble* dst = out.data().data() + 4 * (jf * nxi);
            for (int c = 0; c < 4; ++c) {
                fft::forward(geo.fine.dims(), e[c].data());
                for (std::int64_t l = 0; l < nxi; ++l)
                    dst[4 * l + c] = ph_fwd[l] * e[c][l];
            }
        }
    }
    return out;
}

// Derivative of the matrix field along x-axis a (spectral on the fine grid).
void wigner_x_derivative(const PhaseSpaceGrid& ps, const std::vector<cdouble>& in,
                         std::vector<cdouble>& out, int axis) {
    std::vector<int> dims = phase_space_dims(ps, 4);
    out = in;
    fft::forward_axis(dims, axis, out.data());
    const auto& k = ps.xfine().wavenumbers_grad(axis);
    std::int64_t stride = 1;
    for (std::size_t b = axis + 1; b < dims.size(); ++b) stride *= dims[b];
    const int n = dims[axis];
    for (std::int64_t base = 0; base < static_cast<std::int64_t>(out.size());
         base += stride * n)
        for (int m = 0; m < n; ++m) {
            cdouble ik = I * k[m];
            cdouble* p = out.data() + base + m * stride;
            for (std::int64_t q = 0; q < stride; ++q) p[q] *= ik;
        }
    fft::backward_axis(dims, axis, out.data());
}

// Multiply by beta[A_a](x, y) = (A_a(x+) + A_a(x-))/2 in the offset rep.
void beta_multiply(const PhaseSpaceGrid& ps, const RealField& a_comp,
                   std::vector<cdouble>& data) {
    const UniformGrid& g = ps.xgrid();
    const std::int64_t nxi = ps.xi_size();
    FineGeometry geo(ps);
    const int d = g.dim();
#pragma omp parallel
    {
        std::array<std::vector<cdouble>, 4> e;
        for (auto& v : e) v.resize(nxi);
#pragma omp for schedule(static)
        for (std::int64_t jf = 0; jf < ps.x_size(); ++jf) {
            auto j = geo.decompose(jf);
            std::array<int, 3> parity{0, 0, 0}, bu{0, 0, 0}, bv{0, 0, 0};
            for (int a = 0; a < d; ++a) {
                parity[a] = j[a] & 1;
                bu[a] = (j[a] + parity[a]) / 2;
                bv[a] = (j[a] - parity[a]) / 2;
            }
            std::vector<cdouble> ph_fwd = parity_phase(geo, parity, +1);
            cdouble* src = data.data() + 4 * (jf * nxi);
            for (int c = 0; c < 4; ++c) {
                for (std::int64_t l = 0; l < nxi; ++l)
                    e[c][l] = src[4 * l + c] / ph_fwd[l];
                fft::backward(geo.fine.dims(), e[c].data());
            }
            for_each_index(geo.fine, [&](std::int64_t mf, const std::array<int, 3>& m) {
                std::int64_t u = 0, v = 0;
                for (int a = 0; a < d; ++a) {
                    int s = geo.signed_m(a, m[a]);
                    int ua = ((bu[a] + s) % g.n(a) + g.n(a)) % g.n(a);
                    int va = ((bv[a] - s) % g.n(a) + g.n(a)) % g.n(a);
                    u += std::int64_t(ua) * g.stride(a);
                    v += std::int64_t(va) * g.stride(a);
                }
                double beta = 0.5 * (a_comp[u] + a_comp[v]);
                for (int c = 0; c < 4; ++c) e[c][mf] *= beta;
            });
            for (int c = 0; c < 4; ++c) {
                fft::forward(geo.fine.dims(), e[c].data());
                for (std::int64_t l = 0; l < nxi; ++l)
                    src[4 * l + c] = ph_fwd[l] * e[c][l];
            }
        }
    }
}

void axpy(std::vector<cdouble>& y, const std::vector<cdouble>& x, cdouble a) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void multiply_xi(const PhaseSpaceGrid& ps, std::vector<cdouble>& data, int axis) {
    const UniformGrid& fine = ps.xfine();
    const std::int64_t nxi = ps.xi_size();
    const int d = fine.dim();
    std::array<int, 3> li{0, 0, 0};
    for (std::int64_t xf = 0; xf < ps.x_size(); ++xf) {
        cdouble* base = data.data() + 4 * (xf * nxi);
        std::int64_t l = 0;
        int n0 = fine.n(0), n1 = d > 1 ? fine.n(1) : 1, n2 = d > 2 ? fine.n(2) : 1;
        for (li[0] = 0; li[0] < n0; ++li[0])
            for (li[1] = 0; li[1] < n1; ++li[1])
                for (li[2] = 0; li[2] < n2; ++li[2]) {
                    double xv = ps.xi(axis, li[axis]);
                    for (int c = 0; c < 4; ++c) base[4 * l + c] *= xv;
                    ++l;
                }
    }
}

}  // namespace

WignerMatrix theta_apply(const RealField& g, const WignerMatrix& phi) {
    require_same_grid(g.grid(), phi.grid().xgrid(), "theta_apply symbol");
    return theta_impl(phi, SymbolKind::scalar, &g, nullptr, nullptr);
}

WignerMatrix theta_apply(const std::function<double(const std::array<double, 3>&)>& g,
                         const WignerMatrix& phi) {
    return theta_impl(phi, SymbolKind::scalar_function, nullptr, nullptr, &g);
}

WignerMatrix theta_apply_sigma_b(const GaugeField& gauge, const WignerMatrix& phi) {
    require_same_grid(gauge.grid(), phi.grid().xgrid(), "theta_apply sigma.B");
    return theta_impl(phi, SymbolKind::sigma_b, nullptr, &gauge, nullptr);
}

WignerMatrix xi_gradient(const WignerMatrix& phi, int axis) {
    // F(xi) = sum_m c_m e^{-i xi y_m}, so d/dxi multiplies c_m by -i y_m,
    // y_m = (2 s(m) + parity) h / hbar.
    const PhaseSpaceGrid& ps = phi.grid();
    const UniformGrid& g = ps.xgrid();
    WignerMatrix out(ps);
    FineGeometry geo(ps);
    const std::int64_t nxi = ps.xi_size();
    const double h_over_hbar = g.spacing(axis) / ps.hbar();
    const int d = g.dim();

#pragma omp parallel
    {
        std::array<std::vector<cdouble>, 4> e;
        for (auto& v : e) v.resize(nxi);
#pragma omp for schedule(static)
        for (std::int64_t jf = 0; jf < ps.x_size(); ++jf) {
            auto j = geo.decompose(jf);
            std::array<int, 3> parity{0, 0, 0};
            for (int a = 0; a < d; ++a) parity[a] = j[a] & 1;
            std::vector<cdouble> ph_fwd = parity_phase(geo, parity, +1);

            const cdouble* src = phi.data().data() + 4 * (jf * nxi);
            for (int c = 0; c < 4; ++c) {
                for (std::int64_t l = 0; l < nxi; ++l)
                    e[c][l] = src[4 * l + c] / ph_fwd[l];
                fft::backward(geo.fine.dims(), e[c].data());
            }
            for_each_index(geo.fine, [&](std::int64_t mf, const std::array<int, 3>& m) {
                double y = (2.0 * geo.signed_m(axis, m[axis]) + parity[axis]) * h_over_hbar;
                cdouble miy = -I * y;
                for (int c = 0; c < 4; ++c) e[c][mf] *= miy;
            });
            cdouble* dst = out.data().data() + 4 * (jf * nxi);
            for (int c = 0; c < 4; ++c) {
                fft::forward(geo.fine.dims(), e[c].data());
                for (std::int64_t l = 0; l < nxi; ++l)
                    dst[4 * l + c] = ph_fwd[l] * e[c][l];
            }
        }
    }
    return out;
}

double pauli_wigner_residual(const WignerMatrix& f, const RealField& v,
                             const GaugeField& gauge, const WignerMatrix& df_dt) {
    const PhaseSpaceGrid& ps = f.grid();
    const UniformGrid& g = ps.xgrid();
    require_same_grid(g, v.grid(), "pauli_wigner_residual");
    require_same_grid(g, gauge.grid(), "pauli_wigner_residual gauge");
    if (f.points() != df_dt.points())
        throw ValidationError("pauli_wigner_residual operand mismatch");
    const double hbar = ps.hbar();
    const bool mag = gauge.has_magnetic() && gauge.max_abs_a() > 0.0;

    std::vector<cdouble> r = df_dt.data();
    std::vector<cdouble> t;

    // xi . grad_x F and - F_y[beta[A]] *_xi grad_x F
    for (int a = 0; a < g.dim(); ++a) {
        wigner_x_derivative(ps, f.data(), t, a);
        std::vector<cdouble> tx = t;
        multiply_xi(ps, tx, a);
        axpy(r, tx, cdouble{1.0, 0.0});
        if (mag) {
            beta_multiply(ps, gauge.a()[a], t);
            axpy(r, t, cdouble{-1.0, 0.0});
        }
    }

    if (mag) {
        // - theta[A](xi F)
        for (int a = 0; a < g.dim(); ++a) {
            WignerMatrix xf(ps);
            xf.data() = f.data();
            multiply_xi(ps, xf.data(), a);
            WignerMatrix th = theta_apply(gauge.a()[a], xf);
            axpy(r, th.data(), cdouble{-1.0, 0.0});
        }
        // + 1/2 theta[|A|^2] F
        RealField a2(g);
        for (int a = 0; a < g.dim(); ++a)
            for (std::int64_t i = 0; i < g.size(); ++i)
                a2[i] += gauge.a()[a][i] * gauge.a()[a][i];
        WignerMatrix th2 = theta_apply(a2, f);
        axpy(r, th2.data(), cdouble{0.5, 0.0});
    }
    if (gauge.has_magnetic() && gauge.max_abs_b() > 0.0) {
        // - (hbar/2) theta[sigma.B] F
        WignerMatrix ths = theta_apply_sigma_b(gauge, f);
        axpy(r, ths.data(), cdouble{-0.5 * hbar, 0.0});
    }
    // + theta[V] F
    WignerMatrix thv = theta_apply(v, f);
    axpy(r, thv.data(), cdouble{1.0, 0.0});

    double s = 0.0;
    for (const cdouble& z : r) s += std::norm(z);
    return std::sqrt(s * ps.cell_volume());
}

}  // namespace pauliflow
