#include "pauliflow/vlasov.hpp"

#include <cmath>

namespace pauliflow {

PhaseSpaceDensity::PhaseSpaceDensity(UniformGrid xgrid, int np, double pmax,
                                     std::optional<RealField> b_profile)
    : x_(std::move(xgrid)), np_(np), pmax_(pmax), b_(std::move(b_profile)) {
    if (x_.dim() > 2)
        throw ValidationError("vlasov geometry supports 1d1v and 2d2v only");
    if (np_ < 4 || (np_ & (np_ - 1)) != 0)
        throw ValidationError("momentum points must be a power of two >= 4");
    if (!(pmax_ > 0.0)) throw ValidationError("momentum band must be positive");
    if (b_ && x_.dim() != 2)
        throw ValidationError("a B profile requires 2d2v geometry");
    if (b_) require_same_grid(x_, b_->grid(), "vlasov B profile");
    f_.assign(size(), 0.0);
}

std::int64_t PhaseSpaceDensity::p_size() const {
    std::int64_t s = 1;
    for (int a = 0; a < x_.dim(); ++a) s *= np_;
    return s;
}

std::int64_t PhaseSpaceDensity::size() const { return x_.size() * p_size(); }

double PhaseSpaceDensity::cell_volume() const {
    double v = x_.cell_volume();
    for (int a = 0; a < x_.dim(); ++a) v *= dp();
    return v;
}

double PhaseSpaceDensity::mass() const {
    double s = 0.0;
    for (double v : f_) s += v;
    return s * cell_volume();
}

double PhaseSpaceDensity::l1_norm() const {
    double s = 0.0;
    for (double v : f_) s += std::abs(v);
    return s * cell_volume();
}

double PhaseSpaceDensity::l2_norm() const {
    double s = 0.0;
    for (double v : f_) s += v * v;
    return std::sqrt(s * cell_volume());
}

double PhaseSpaceDensity::kinetic_energy() const {
    const int d = x_.dim();
    const std::int64_t npts = p_size();
    double s = 0.0;
    for (std::int64_t xf = 0; xf < x_.size(); ++xf) {
        const double* slab = f_.data() + xf * npts;
        if (d == 1) {
            for (int i = 0; i < np_; ++i) {
                double p = p_coord(i);
                s += 0.5 * p * p * slab[i];
            }
        } else {
            for (int i = 0; i < np_; ++i)
                for (int j = 0; j < np_; ++j) {
                    double px = p_coord(i), py = p_coord(j);
                    s += 0.5 * (px * px + py * py) * slab[i * np_ + j];
                }
        }
    }
    return s * cell_volume();
}

PhaseSpaceDensity PhaseSpaceDensity::gaussian_blob(
    const UniformGrid& xgrid, int np, double pmax, const std::array<double, 3>& x0,
    const std::array<double, 3>& p0, double sigma_x, double sigma_p,
    std::optional<RealField> b) {
    PhaseSpaceDensity f(xgrid, np, pmax, std::move(b));
    const int d = xgrid.dim();
    double norm = 1.0;
    for (int a = 0; a < d; ++a)
        norm /= (2.0 * PI * sigma_x * sigma_p);

    const std::int64_t npts = f.p_size();
    for (std::int64_t xf = 0; xf < xgrid.size(); ++xf) {
        std::array<int, 3> xi{0, 0, 0};
        std::int64_t rem = xf;
        for (int a = d - 1; a >= 0; --a) {
            xi[a] = static_cast<int>(rem % xgrid.n(a));
            rem /= xgrid.n(a);
        }
        double xq = 0.0;
        for (int a = 0; a < d; ++a) {
            // periodized distance to the blob center
            double dx = xgrid.coord(a, xi[a]) - x0[a];
            double L = xgrid.extent(a);
            dx -= L * std::round(dx / L);
            xq += dx * dx;
        }
        double envx = std::exp(-0.5 * xq / (sigma_x * sigma_x));
        double* slab = f.values().data() + xf * npts;
        if (d == 1) {
            for (int i = 0; i < np; ++i) {
                double dpv = f.p_coord(i) - p0[0];
                slab[i] = norm * envx * std::exp(-0.5 * dpv * dpv / (sigma_p * sigma_p));
            }
        } else {
            for (int i = 0; i < np; ++i)
                for (int j = 0; j < np; ++j) {
                    double dpx = f.p_coord(i) - p0[0];
                    double dpy = f.p_coord(j) - p0[1];
                    slab[i * np + j] =
                        norm * envx *
                        std::exp(-0.5 * (dpx * dpx + dpy * dpy) / (sigma_p * sigma_p));
                }
        }
    }
    return f;
}

namespace {

// Cubic B-spline prefilter: solve (c_{i-1} + 4 c_i + c_{i+1})/6 = f_i.
void prefilter_periodic(std::vector<double>& line, std::vector<double>& scratch) {
    const int n = static_cast<int>(line.size());
    // Sherman-Morrison on the cyclic tridiagonal system
    std::vector<double>& u = scratch;
    u.assign(n, 0.0);
    u[0] = 1.0;
    u[n - 1] = 1.0;
    const double a = 1.0 / 6.0, b = 4.0 / 6.0;
    // modified diagonal removes the corner entries
    auto thomas = [&](std::vector<double>& rhs) {
        static thread_local std::vector<double> cp, dp_;
        cp.assign(n, 0.0);
        dp_.assign(n, 0.0);
        double b0 = b - a;  // both ends modified by -a (gamma = a)
        cp[0] = a / b0;
        dp_[0] = rhs[0] / b0;
        for (int i = 1; i < n; ++i) {
            double bi = (i == 0 || i == n - 1) ? b0 : b;
            double m = bi - a * cp[i - 1];
            cp[i] = a / m;
            dp_[i] = (rhs[i] - a * dp_[i - 1]) / m;
        }
        rhs[n - 1] = dp_[n - 1];
        for (int i = n - 2; i >= 0; --i) rhs[i] = dp_[i] - cp[i] * rhs[i + 1];
    };
    std::vector<double> z = line;
    thomas(z);
    thomas(u);
    double frac = a * (z[0] + z[n - 1]) / (1.0 + a * (u[0] + u[n - 1]));
    for (int i = 0; i < n; ++i) line[i] = z[i] - frac * u[i];
}

void prefilter_zero(std::vector<double>& line) {
    const int n = static_cast<int>(line.size());
    const double a = 1.0 / 6.0, b = 4.0 / 6.0;
    static thread_local std::vector<double> cp, dp_;
    cp.assign(n, 0.0);
    dp_.assign(n, 0.0);
    cp[0] = a / b;
    dp_[0] = line[0] / b;
    for (int i = 1; i < n; ++i) {
        double m = b - a * cp[i - 1];
        cp[i] = a / m;
        dp_[i] = (line[i] - a * dp_[i - 1]) / m;
    }
    line[n - 1] = dp_[n - 1];
    for (int i = n - 2; i >= 0; --i) line[i] = dp_[i] - cp[i] * line[i + 1];
}

inline void bspline_weights(double t, double w[4]) {
    double t2 = t * t, t3 = t2 * t;
    w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
    w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
    w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
    w[3] = t3 / 6.0;
}

// Evaluate a periodic spline (coefficients c) at index coordinate s.
double eval_periodic(const std::vector<double>& c, double s) {
    const int n = static_cast<int>(c.size());
    double fl = std::floor(s);
    int j = static_cast<int>(fl);
    double w[4];
    bspline_weights(s - fl, w);
    double v = 0.0;
    for (int q = -1; q <= 2; ++q) {
        int idx = ((j + q) % n + n) % n;
        v += w[q + 1] * c[idx];
    }
    return v;
}

// Evaluate a zero-extended spline at index coordinate s; outside the band
// the value is zero (open boundary).
double eval_zero(const double* c, int n, double s) {
    double fl = std::floor(s);
    int j = static_cast<int>(fl);
    if (j < -3 || j > n + 1) return 0.0;
    double w[4];
    bspline_weights(s - fl, w);
    double v = 0.0;
    for (int q = -1; q <= 2; ++q) {
        int idx = j + q;
        if (idx >= 0 && idx < n) v += w[q + 1] * c[idx];
    }
    return v;
}

// x-advection by tau: f(x, p) <- f(x - p_a tau, p) along every x axis.
void advect_x(PhaseSpaceDensity& f, double tau) {
    const UniformGrid& g = f.xgrid();
    const int d = g.dim();
    const int np = f.np();
    const std::int64_t psz = f.p_size();
    auto& data = f.values();

    for (int axis = 0; axis < d; ++axis) {
        const int nx = g.n(axis);
        const double h = g.spacing(axis);
        // stride of the x-axis in the flattened [x][p] layout
        std::int64_t xstride = psz;
        for (int b = axis + 1; b < d; ++b) xstride *= g.n(b);
        const std::int64_t nlines = f.size() / nx;

#pragma omp parallel
        {
            std::vector<double> line(nx), scratch;
#pragma omp for schedule(static)
            for (std::int64_t lidx = 0; lidx < nlines; ++lidx) {
                // decompose lidx into (outer block, inner offset)
                std::int64_t inner = lidx % xstride;
                std::int64_t outer = lidx / xstride;
                std::int64_t base = outer * xstride * nx + inner;

                // momentum component along this axis sets the shift
                std::int64_t pflat = inner % psz;
                int pidx = (d == 1) ? static_cast<int>(pflat)
                                    : static_cast<int>(axis == 0 ? pflat / np
                                                                 : pflat % np);
                double shift = f.p_coord(pidx) * tau / h;  // in index units

                for (int i = 0; i < nx; ++i) line[i] = data[base + i * xstride];
                prefilter_periodic(line, scratch);
                for (int i = 0; i < nx; ++i)
                    data[base + i * xstride] = eval_periodic(line, i - shift);
            }
        }
    }
}

// p-advection by tau along characteristics dp/dt = E + p x B, E = -grad V.
void advect_p(PhaseSpaceDensity& f, const std::vector<RealField>& e_field, double tau) {
    const UniformGrid& g = f.xgrid();
    const int d = g.dim();
    const int np = f.np();
    const double dpv = f.dp();
    auto& data = f.values();

    if (d == 1) {
#pragma omp parallel
        {
            std::vector<double> line(np);
#pragma omp for schedule(static)
            for (std::int64_t xf = 0; xf < g.size(); ++xf) {
                double shift = e_field[0][xf] * tau / dpv;
                double* slab = data.data() + xf * np;
                for (int i = 0; i < np; ++i) line[i] = slab[i];
                prefilter_zero(line);
                for (int i = 0; i < np; ++i)
                    slab[i] = eval_zero(line.data(), np, i - shift);
            }
        }
        return;
    }

    // 2d2v: exact rotation about the E x B drift for the local B, composed
    // with the force kick when B vanishes.
    const std::int64_t psz = f.p_size();
#pragma omp parallel
    {
        std::vector<double> slab(psz), tmp(np);
#pragma omp for schedule(static)
        for (std::int64_t xf = 0; xf < g.size(); ++xf) {
            double ex = e_field[0][xf], ey = e_field[1][xf];
            double b = f.has_b() ? f.b_profile()[xf] : 0.0;
            double* src = data.data() + xf * psz;
            for (std::int64_t q = 0; q < psz; ++q) slab[q] = src[q];

            // tensor prefilter: py lines (contiguous), then px lines
            for (int i = 0; i < np; ++i) {
                for (int j = 0; j < np; ++j) tmp[j] = slab[i * np + j];
                prefilter_zero(tmp);
                for (int j = 0; j < np; ++j) slab[i * np + j] = tmp[j];
            }
            for (int j = 0; j < np; ++j) {
                for (int i = 0; i < np; ++i) tmp[i] = slab[i * np + j];
                prefilter_zero(tmp);
                for (int i = 0; i < np; ++i) slab[i * np + j] = tmp[i];
            }

            double c = 1.0, s = 0.0, dx_ = 0.0, dy_ = 0.0;
            bool rotate = std::abs(b) > 1e-14;
            if (rotate) {
                c = std::cos(b * tau);
                s = std::sin(b * tau);
                dx_ = ey / b;   // drift momentum p* = (E_y/B, -E_x/B)
                dy_ = -ex / b;
            }
            for (int i = 0; i < np; ++i)
                for (int j = 0; j < np; ++j) {
                    double px = f.p_coord(i), py = f.p_coord(j);
                    double ox, oy;
                    if (rotate) {
                        // backtrace: p0 = p* + R(+B tau)(p - p*)
                        double qx = px - dx_, qy = py - dy_;
                        ox = dx_ + c * qx - s * qy;
                        oy = dy_ + s * qx + c * qy;
                    } else {
                        ox = px - ex * tau;
                        oy = py - ey * tau;
                    }
                    double si = (ox + f.pmax()) / dpv;
                    double sj = (oy + f.pmax()) / dpv;
                    // tensor 4x4 stencil on the zero-extended coefficients
                    double fi = std::floor(si), fj = std::floor(sj);
                    int ji = static_cast<int>(fi), jj = static_cast<int>(fj);
                    double wi[4], wj[4];
                    bspline_weights(si - fi, wi);
                    bspline_weights(sj - fj, wj);
                    double v = 0.0;
                    for (int qi = -1; qi <= 2; ++qi) {
                        int ii = ji + qi;
                        if (ii < 0 || ii >= np) continue;
                        double row = 0.0;
                        for (int qj = -1; qj <= 2; ++qj) {
                            int ij = jj + qj;
                            if (ij < 0 || ij >= np) continue;
                            row += wj[qj + 1] * slab[std::int64_t(ii) * np + ij];
                        }
                        v += wi[qi + 1] * row;
                    }
                    src[std::int64_t(i) * np + j] = v;
                }
        }
    }
}

// Clip interpolation undershoots, logging the corrected mass.
void clip_negative(PhaseSpaceDensity& f, VlasovStats* stats) {
    double corrected = 0.0;
    for (auto& v : f.values())
        if (v < 0.0) {
            corrected -= v;
            v = 0.0;
        }
    if (stats) stats->clipped_mass += corrected * f.cell_volume();
}

}  // namespace

VlasovMoments vlasov_moments(const PhaseSpaceDensity& f) {
    const UniformGrid& g = f.xgrid();
    const int d = g.dim();
    const int np = f.np();
    double dv = 1.0;
    for (int a = 0; a < d; ++a) dv *= f.dp();

    VlasovMoments m{RealField(g), {}};
    for (int a = 0; a < d; ++a) m.current.emplace_back(g);

    const std::int64_t psz = f.p_size();
    for (std::int64_t xf = 0; xf < g.size(); ++xf) {
        const double* slab = f.values().data() + xf * psz;
        double rho = 0.0, jx = 0.0, jy = 0.0;
        if (d == 1) {
            for (int i = 0; i < np; ++i) {
                rho += slab[i];
                jx += f.p_coord(i) * slab[i];
            }
        } else {
            for (int i = 0; i < np; ++i)
                for (int j = 0; j < np; ++j) {
                    double v = slab[i * np + j];
                    rho += v;
                    jx += f.p_coord(i) * v;
                    jy += f.p_coord(j) * v;
                }
        }
        m.density[xf] = rho * dv;
        m.current[0][xf] = jx * dv;
        if (d == 2) m.current[1][xf] = jy * dv;
    }
    return m;
}

void vlasov_step(PhaseSpaceDensity& f, const RealField& v, double dt,
                 VlasovStats* stats) {
    require_same_grid(f.xgrid(), v.grid(), "vlasov_step");
    double mass_before = stats ? f.mass() : 0.0;

    advect_x(f, 0.5 * dt);
    std::vector<RealField> e = gradient(v);
    for (auto& comp : e)
        for (std::int64_t i = 0; i < comp.size(); ++i) comp[i] = -comp[i];
    advect_p(f, e, dt);
    advect_x(f, 0.5 * dt);
    clip_negative(f, stats);

    if (stats) stats->outflow_mass += mass_before - f.mass();
}

VlasovResult vlasov_poisson_propagate(const PhaseSpaceDensity& f0,
                                      const VlasovConfig& cfg,
                                      const VlasovSink& sink) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
        throw ValidationError("vlasov dt and t_end must be positive");
    long nsteps = std::lround(cfg.t_end / cfg.dt);
    if (nsteps < 1 || std::abs(nsteps * cfg.dt - cfg.t_end) > 1e-9 * cfg.t_end)
        throw ValidationError("t_end must be an integer multiple of dt");

    PhaseSpaceDensity f = f0;
    const UniformGrid& g = f.xgrid();
    VlasovStats stats;
    std::vector<StepReport> reports;

    auto self_potential = [&](const RealField& rho) {
        RealField v = solve_poisson_periodic(rho);
        for (std::int64_t i = 0; i < g.size(); ++i) v[i] *= cfg.coupling;
        return v;
    };
    auto report = [&](double t, const RealField& v) {
        StepReport r;
        r.t = t;
        r.mass = f.mass();
        r.energy.kinetic = f.kinetic_energy();
        auto gv = gradient(v);
        double s = 0.0;
        for (const auto& comp : gv)
            for (std::int64_t i = 0; i < g.size(); ++i) s += comp[i] * comp[i];
        r.energy.self = 0.5 * s * g.cell_volume();
        reports.push_back(r);
    };

    RealField v = self_potential(vlasov_moments(f).density);
    report(0.0, v);
    if (sink && cfg.snapshot_stride > 0) sink(0, 0.0, f);

    for (long step = 1; step <= nsteps; ++step) {
        v = self_potential(vlasov_moments(f).density);
        vlasov_step(f, v, cfg.dt, &stats);
        double t = step * cfg.dt;
        report(t, v);
        if (std::abs(stats.outflow_mass) > cfg.mass_loss_abort)
            throw NumericalError("vlasov mass loss " +
                                 std::to_string(stats.outflow_mass) +
                                 " exceeded the abort threshold at t=" +
                                 std::to_string(t));
        if (sink && cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0)
            sink(static_cast<int>(step), t, f);
    }
    return VlasovResult{std::move(f), std::move(reports), stats};
}

}  // namespace pauliflow
