#include "pauliflow/nbody.hpp"

#include <cmath>

#include "pauliflow/fft.hpp"
#include "pauliflow/propagator.hpp"

namespace pauliflow {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

NBodyWavefunction::NBodyWavefunction(UniformGrid grid1d, int particles, bool spin,
                                     std::int64_t budget)
    : grid_(std::move(grid1d)), n_(particles), spin_(spin) {
    if (grid_.dim() != 1)
        throw ValidationError("n-body grids are 1d per particle");
    if (grid_.n(0) > 128)
        throw ValidationError("n-body per-particle grid is capped at 128 points");
    if (n_ < 2 || n_ > 4)
        throw ValidationError("particle count must be in {2,3,4}");
    std::int64_t total = ipow(grid_.n(0), n_) * spin_configs();
    if (total > budget)
        throw BudgetError("n-body amplitude count " + std::to_string(total) +
                          " exceeds budget " + std::to_string(budget));
    amps_.assign(total, cdouble{0.0, 0.0});
}

double NBodyWavefunction::norm() const {
    double s = 0.0;
    for (const auto& z : amps_) s += std::norm(z);
    double vol = 1.0;
    for (int a = 0; a < n_; ++a) vol *= grid_.spacing(0);
    return std::sqrt(s * vol);
}

void NBodyWavefunction::normalize() {
    double nn = norm();
    if (nn <= 0.0) throw NumericalError("cannot normalize zero n-body state");
    for (auto& z : amps_) z /= nn;
}

namespace {

// Apply the transposition of particles (a, b) to index arithmetic:
// amplitudes indexed [x_1]...[x_N][spin bits], spin fastest, bit a-1 for
// particle a.
template <typename Fn>
void for_each_amplitude(const NBodyWavefunction& psi, Fn&& fn) {
    const int n = psi.particles();
    const int nx = psi.grid().n(0);
    const int ns = psi.spin_configs();
    std::array<int, 4> xi{0, 0, 0, 0};
    std::int64_t flat = 0;
    int n0 = nx, n1 = n > 1 ? nx : 1, n2 = n > 2 ? nx : 1, n3 = n > 3 ? nx : 1;
    for (xi[0] = 0; xi[0] < n0; ++xi[0])
        for (xi[1] = 0; xi[1] < n1; ++xi[1])
            for (xi[2] = 0; xi[2] < n2; ++xi[2])
                for (xi[3] = 0; xi[3] < n3; ++xi[3])
                    for (int s = 0; s < ns; ++s) fn(flat++, xi, s);
}

std::int64_t swap_index(const NBodyWavefunction& psi, const std::array<int, 4>& xi,
                        int s, int a, int b) {
    const int n = psi.particles();
    const int nx = psi.grid().n(0);
    const int ns = psi.spin_configs();
    std::array<int, 4> xj = xi;
    std::swap(xj[a], xj[b]);
    int sj = s;
    if (psi.has_spin()) {
        int ba = (s >> a) & 1, bb = (s >> b) & 1;
        sj = s & ~((1 << a) | (1 << b));
        sj |= (ba << b) | (bb << a);
    }
    std::int64_t flat = 0;
    for (int q = 0; q < n; ++q) flat = flat * nx + xj[q];
    return flat * ns + sj;
}

double permutation_defect(const NBodyWavefunction& psi, double sign) {
    const int n = psi.particles();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double acc = 0.0;
            for_each_amplitude(psi, [&](std::int64_t flat, const std::array<int, 4>& xi,
                                        int s) {
                cdouble sw = psi.values()[swap_index(psi, xi, s, a, b)];
                acc += std::norm(psi.values()[flat] + sign * sw);
            });
            double vol = 1.0;
            for (int q = 0; q < n; ++q) vol *= psi.grid().spacing(0);
            worst = std::max(worst, std::sqrt(acc * vol));
        }
    return worst;
}

}  // namespace

double NBodyWavefunction::antisymmetry_defect() const {
    return permutation_defect(*this, +1.0);
}

double NBodyWavefunction::symmetry_defect() const {
    return permutation_defect(*this, -1.0);
}

NBodyWavefunction NBodyWavefunction::hartree_product(const UniformGrid& g, int particles,
                                                     const std::vector<cdouble>& orbital,
                                                     std::int64_t budget) {
    if (static_cast<std::int64_t>(orbital.size()) != g.size())
        throw ValidationError("orbital does not match the grid");
    NBodyWavefunction psi(g, particles, false, budget);
    for_each_amplitude(psi, [&](std::int64_t flat, const std::array<int, 4>& xi, int) {
        cdouble v{1.0, 0.0};
        for (int q = 0; q < particles; ++q) v *= orbital[xi[q]];
        psi.values()[flat] = v;
    });
    psi.normalize();
    return psi;
}

NBodyWavefunction NBodyWavefunction::slater(const UniformGrid& g,
                                            const std::vector<std::vector<cdouble>>& orbitals,
                                            std::int64_t budget) {
    const int n = static_cast<int>(orbitals.size());
    NBodyWavefunction psi(g, n, false, budget);
    Eigen::MatrixXcd mat(n, n);
    for_each_amplitude(psi, [&](std::int64_t flat, const std::array<int, 4>& xi, int) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mat(i, j) = orbitals[i][xi[j]];
        psi.values()[flat] = mat.determinant();
    });
    if (psi.norm() < 1e-8)
        throw ValidationError(
            "slater determinant vanishes: duplicated orbital (exclusion principle)");
    psi.normalize();
    return psi;
}

NBodyWavefunction NBodyWavefunction::slater_spinor(const UniformGrid& g,
                                                   const std::vector<SpinorField>& orbitals,
                                                   std::int64_t budget) {
    const int n = static_cast<int>(orbitals.size());
    NBodyWavefunction psi(g, n, true, budget);
    Eigen::MatrixXcd mat(n, n);
    for_each_amplitude(psi, [&](std::int64_t flat, const std::array<int, 4>& xi, int s) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int sj = (s >> j) & 1;
                mat(i, j) = orbitals[i].comp(sj)[xi[j]];
            }
        psi.values()[flat] = mat.determinant();
    });
    if (psi.norm() < 1e-8)
        throw ValidationError(
            "slater determinant vanishes: duplicated orbital (exclusion principle)");
    psi.normalize();
    return psi;
}

NBodyPropagator::NBodyPropagator(const NBodyWavefunction& shape, const NBodyConfig& cfg)
    : particles_(shape.particles()) {
    const UniformGrid& g = shape.grid();
    const int n = shape.particles();
    const int nx = g.n(0);
    const double hbar = cfg.hbar;
    require_same_grid(g, cfg.v_ext.grid(), "nbody propagator V_ext");

    dims_.assign(n, nx);
    if (shape.has_spin()) dims_.push_back(shape.spin_configs());

    std::optional<RealField> wtab;
    if (cfg.kernel) wtab = tabulate_min_image(g, *cfg.kernel);

    half_phase_.resize(shape.size());
    kinetic_phase_.resize(shape.size());
    const auto& k = g.wavenumbers(0);
    const double tau = 0.5 * cfg.dt;
    for_each_amplitude(shape, [&](std::int64_t flat, const std::array<int, 4>& xi, int) {
        double u = 0.0, k2 = 0.0;
        for (int a = 0; a < n; ++a) {
            u += cfg.v_ext[xi[a]];
            k2 += k[xi[a]] * k[xi[a]];
        }
        if (wtab) {
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    int diff = ((xi[a] - xi[b]) % nx + nx) % nx;
                    u += (*wtab)[diff] / n;
                }
        }
        half_phase_[flat] = std::exp(-I * (tau / hbar) * u);
        kinetic_phase_[flat] = std::exp(-I * (cfg.dt * hbar * 0.5) * k2);
    });
}

void NBodyPropagator::step(NBodyWavefunction& psi) const {
    auto& v = psi.values();
    if (v.size() != half_phase_.size())
        throw ValidationError("nbody propagator shape mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= half_phase_[i];
    for (int a = 0; a < particles_; ++a) fft::forward_axis(dims_, a, v.data());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kinetic_phase_[i];
    for (int a = 0; a < particles_; ++a) fft::backward_axis(dims_, a, v.data());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= half_phase_[i];
}

void nbody_step(NBodyWavefunction& psi, const NBodyConfig& cfg) {
    NBodyPropagator prop(psi, cfg);
    prop.step(psi);
}

double ReducedDensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    return es.eigenvalues().minCoeff();
}

ReducedDensityMatrix reduced_density_matrix(const NBodyWavefunction& psi, int k) {
    const int n = psi.particles();
    if (k < 1 || k > 2 || k > n)
        throw ValidationError("reduced density matrix supports k in {1,2}, k <= N");
    const int nx = psi.grid().n(0);
    const int ns = psi.spin_configs();
    const double h = psi.grid().spacing(0);

    // kept index: first k particles (and their spin bits when spinful)
    const int keep_spin = psi.has_spin() ? (1 << k) : 1;
    const std::int64_t dim = ipow(nx, k) * keep_spin;
    if (dim > 4096)
        throw BudgetError("reduced density matrix dimension exceeds the 4096 cap");
    const std::int64_t rest_x = ipow(nx, n - k);
    const int rest_spin = psi.has_spin() ? (1 << (n - k)) : 1;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    // amplitudes: [x_1..x_k][x_{k+1}..x_N][spin bits: particle a -> bit a]
    // gather rows indexed by kept (x, s), columns by the traced rest
    Eigen::MatrixXcd rows(dim, rest_x * rest_spin);
    for_each_amplitude(psi, [&](std::int64_t flat, const std::array<int, 4>& xi, int s) {
        std::int64_t kept_x = 0;
        for (int q = 0; q < k; ++q) kept_x = kept_x * nx + xi[q];
        std::int64_t rx = 0;
        for (int q = k; q < n; ++q) rx = rx * nx + xi[q];
        int ks = 0, rs = 0;
        if (psi.has_spin()) {
            for (int q = 0; q < k; ++q) ks |= ((s >> q) & 1) << q;
            for (int q = k; q < n; ++q) rs |= ((s >> q) & 1) << (q - k);
        }
        rows(kept_x * keep_spin + ks, rx * rest_spin + rs) = psi.values()[flat];
    });
    m = rows * rows.adjoint();

    // quadrature weight for the traced coordinates and h^k for unit trace
    double w = std::pow(h, n - k) * std::pow(h, k);
    m *= w;
    double tr = m.trace().real();
    if (std::abs(tr) < 1e-300) throw NumericalError("zero-trace density matrix");
    m /= tr;

    ReducedDensityMatrix rdm;
    rdm.k = k;
    rdm.m = std::move(m);
    return rdm;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("trace distance requires equal dimensions");
    if (a.rows() > 4096)
        throw BudgetError("trace distance dimension exceeds the 4096 cap");
    Eigen::MatrixXcd d = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const ReducedDensityMatrix& a, const ReducedDensityMatrix& b) {
    return trace_distance(a.m, b.m);
}

MeanfieldStudyResult meanfield_study(const UniformGrid& g,
                                     const std::vector<cdouble>& orbital,
                                     const std::vector<int>& n_list,
                                     const NBodyConfig& cfg,
                                     const std::vector<double>& sample_times) {
    for (int n : n_list)
        if (n < 2 || n > 4) throw ValidationError("meanfield N_list must lie in {2,3,4}");
    if (sample_times.empty())
        throw ValidationError("meanfield study needs sample times");

    // Hartree reference: same kernel, mean-field coupling W * rho with the
    // same scaling limit as (1/N) sum_{j<k}.
    SpinorField phi0(g);
    for (std::int64_t i = 0; i < g.size(); ++i) phi0.comp(0)[i] = orbital[i];
    phi0.normalize();
    GaugeField gauge(g, {}, cfg.v_ext);

    SolverConfig hcfg;
    hcfg.dt = cfg.dt;
    hcfg.nonlinearity = cfg.kernel ? Nonlinearity::hartree : Nonlinearity::none;
    hcfg.kernel = cfg.kernel;

    std::vector<Eigen::MatrixXcd> reference;
    {
        MixedState st = MixedState::pure(cfg.hbar, phi0);
        double t = 0.0;
        const double h = g.spacing(0);
        for (double ts : sample_times) {
            if (ts > t + 1e-12) {
                hcfg.t_end = ts - t;
                auto res = propagate(st, gauge, hcfg);
                st = std::move(res.state);
                t = ts;
            }
            Eigen::VectorXcd v(g.size());
            for (std::int64_t i = 0; i < g.size(); ++i)
                v(i) = st.orbital(0).comp(0)[i];
            reference.push_back(h * (v * v.adjoint()));
        }
    }

    MeanfieldStudyResult out;
    std::vector<std::vector<double>> per_time(sample_times.size());
    for (int n : n_list) {
        NBodyWavefunction psi =
            NBodyWavefunction::hartree_product(g, n, orbital);
        NBodyPropagator prop(psi, cfg);
        double t = 0.0;
        for (std::size_t q = 0; q < sample_times.size(); ++q) {
            double ts = sample_times[q];
            long steps = std::lround((ts - t) / cfg.dt);
            if (steps < 0 || std::abs(steps * cfg.dt - (ts - t)) > 1e-9)
                throw ValidationError("sample times must be multiples of dt");
            for (long s = 0; s < steps; ++s) prop.step(psi);
            t = ts;
            ReducedDensityMatrix rdm = reduced_density_matrix(psi, 1);
            double dist = trace_distance(rdm.m, reference[q]);
            out.table.push_back({n, ts, dist});
            per_time[q].push_back(dist);
        }
    }
    for (const auto& seq : per_time)
        for (std::size_t i = 1; i < seq.size(); ++i)
            if (seq[i] > seq[i - 1] + 1e-12) out.monotone_in_n = false;
    return out;
}

}  // namespace pauliflow
