#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "pauliflow/observables.hpp"
#include "pauliflow/poisson.hpp"
#include "pauliflow/propagator.hpp"
#include "pauliflow/spectral.hpp"

using namespace pauliflow;

namespace {

UniformGrid grid1d(int n = 256, double L = 20.0) { return UniformGrid(1, {n}, {L}); }
UniformGrid grid2d(int n = 64, double L = 16.0) {
    return UniformGrid(2, {n, n}, {L, L});
}

SpinorField random_bandlimited(const UniformGrid& g, unsigned seed) {
    // A handful of low modes with random coefficients, normalized.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpinorField psi(g);
    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1;
    for (int rep = 0; rep < 6; ++rep) {
        double ax = u(rng), bx = u(rng);
        int mx = 1 + rep % 3, my = rep % 2 + 1;
        std::int64_t flat = 0;
        for (int i0 = 0; i0 < n0; ++i0)
            for (int i1 = 0; i1 < n1; ++i1) {
                double x = g.coord(0, i0);
                double ph = 2.0 * PI * mx * x / g.extent(0);
                if (d > 1) ph += 2.0 * PI * my * g.coord(1, i1) / g.extent(1);
                psi.comp(rep % 2)[flat++] += cdouble{ax, bx} * std::exp(I * ph);
            }
    }
    psi.normalize();
    return psi;
}

}  // namespace

TEST_CASE("grid validation and budgets") {
    CHECK_THROWS_AS(UniformGrid(1, {100}, {1.0}), ValidationError);  // not 2^k
    CHECK_THROWS_AS(UniformGrid(1, {64}, {-1.0}), ValidationError);
    CHECK_THROWS_AS(UniformGrid(2, {1024, 1024}, {1.0, 1.0}, 1 << 10), BudgetError);
    UniformGrid g(2, {8, 16}, {2.0, 4.0});
    CHECK(g.spacing(0) == doctest::Approx(0.25));
    CHECK(g.size() == 128);
}

TEST_CASE("spectral derivatives: trig identities") {
    UniformGrid g = grid1d(64, 2.0 * PI);
    RealField f = RealField::sample(g, [](const std::array<double, 3>& x) {
        return std::sin(x[0]);
    });
    RealField df = derivative(f, 0);
    for (std::int64_t i = 0; i < g.size(); ++i)
        CHECK(df[i] == doctest::Approx(std::cos(g.coord(0, i))).epsilon(1e-12));

    // laplacian of a plane-wave mode is -|k|^2 times itself
    UniformGrid g2 = grid2d(32, 8.0);
    double kx = 2.0 * PI * 3 / 8.0, ky = 2.0 * PI * 2 / 8.0;
    RealField pw = RealField::sample(g2, [&](const std::array<double, 3>& x) {
        return std::cos(kx * x[0] + ky * x[1]);
    });
    RealField lap = laplacian(pw);
    double k2 = kx * kx + ky * ky;
    for (std::int64_t i = 0; i < g2.size(); ++i)
        CHECK(lap[i] == doctest::Approx(-k2 * pw[i]).epsilon(1e-10));
}

TEST_CASE("spectral curl: periodic shear gauge, hand computed") {
    // A = (-c sin(2 pi y / L), 0, 0) -> B_z = c (2 pi / L) cos(2 pi y / L).
    UniformGrid g(3, {16, 16, 16}, {4.0, 4.0, 4.0});
    double c = 0.7, w = 2.0 * PI / 4.0;
    RealField ax = RealField::sample(g, [&](const std::array<double, 3>& x) {
        return -c * std::sin(w * x[1]);
    });
    auto b = curl3(g, ax, RealField(g), RealField(g));
    for (std::int64_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(b[0][i]) < 1e-12);
        CHECK(std::abs(b[1][i]) < 1e-12);
    }
    RealField expected = RealField::sample(g, [&](const std::array<double, 3>& x) {
        return c * w * std::cos(w * x[1]);
    });
    for (std::int64_t i = 0; i < g.size(); ++i)
        CHECK(b[2][i] == doctest::Approx(expected[i]).epsilon(1e-11));
}

TEST_CASE("curl of gradient vanishes on random band-limited fields") {
    UniformGrid g(3, {16, 16, 16}, {5.0, 3.0, 7.0});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RealField f(g);
    for (int rep = 0; rep < 8; ++rep) {
        double a = u(rng), ph = u(rng);
        int mx = rep % 3, my = (rep + 1) % 4, mz = rep % 2;
        RealField mode = RealField::sample(g, [&](const std::array<double, 3>& x) {
            return a * std::cos(2.0 * PI * (mx * x[0] / 5.0 + my * x[1] / 3.0 +
                                            mz * x[2] / 7.0) + ph);
        });
        for (std::int64_t i = 0; i < g.size(); ++i) f[i] += mode[i];
    }
    auto grad = gradient(f);
    auto c = curl3(g, grad[0], grad[1], grad[2]);
    for (int a = 0; a < 3; ++a) CHECK(c[a].max_abs() < 1e-12);
}

TEST_CASE("density: pure state, mixture linearity, hbar-scaled weights") {
    UniformGrid g = grid1d();
    SpinorField psi = SpinorField::gaussian(g, {0, 0, 0}, 1.0, {0, 0, 0}, {1.0, 0.0});
    MixedState pure = MixedState::pure(1.0, psi);
    RealField rho = density(pure);
    CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::int64_t i = 0; i < g.size(); ++i) CHECK(rho[i] >= 0.0);

    // two equal-weight orthogonal orbitals -> average of densities
    SpinorField a = SpinorField::hermite(g, {0, 0, 0}, 1.0, {0, 0, 0}, {1.0, 0.0});
    SpinorField b = SpinorField::hermite(g, {0, 0, 0}, 1.0, {1, 0, 0}, {1.0, 0.0});
    MixedState mix(1.0, {0.5, 0.5}, {a, b});
    RealField rmix = density(mix);
    RealField ra = density(MixedState::pure(1.0, a));
    RealField rb = density(MixedState::pure(1.0, b));
    for (std::int64_t i = 0; i < g.size(); ++i)
        CHECK(rmix[i] == doctest::Approx(0.5 * ra[i] + 0.5 * rb[i]).epsilon(1e-12));

    // hbar-scaled equal weights: direct summation oracle
    double hbar = 0.25;
    int m = static_cast<int>(std::floor(std::pow(hbar, -1.0)));
    std::vector<SpinorField> orbs;
    std::vector<double> w(m, 1.0 / m);
    for (int j = 0; j < m; ++j)
        orbs.push_back(SpinorField::hermite(g, {0, 0, 0}, 1.0, {j, 0, 0}, {1.0, 0.0}));
    MixedState scaled = MixedState::scaled(hbar, w, orbs, 1.0 + 1e-12);
    CHECK(density(scaled).integral() == doctest::Approx(1.0).epsilon(1e-10));
    double expected = std::pow(hbar, -1.0) * m * std::pow(1.0 / m, 2.0);
    CHECK(scaled.weight_condition() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(scaled.weight_condition() <= 1.0 + 1e-9);
}

TEST_CASE("mixed state invariant violations are rejected") {
    UniformGrid g = grid1d(64, 10.0);
    SpinorField a = SpinorField::hermite(g, {0, 0, 0}, 1.0, {0, 0, 0}, {1.0, 0.0});
    SpinorField b = SpinorField::hermite(g, {0, 0, 0}, 1.0, {1, 0, 0}, {1.0, 0.0});
    CHECK_THROWS_AS(MixedState(1.0, {0.6, 0.6}, {a, b}), ValidationError);
    CHECK_THROWS_AS(MixedState(1.0, {0.5, 0.5}, {a, a}), ValidationError);
    SpinorField big = a;
    big.scale(1.5);
    CHECK_THROWS_AS(MixedState(1.0, {1.0}, {big}), ValidationError);
    CHECK_THROWS_AS(MixedState(2.0, {1.0}, {a}), ValidationError);
}

TEST_CASE("pauli current: momentum expectation, real states, spin term") {
    UniformGrid g = grid2d(64, 16.0);
    double hbar = 0.5;
    double k0 = 2.0 * PI * 4 / 16.0;  // exact lattice mode
    GaugeField gauge = GaugeField::zero(g);

    SpinorField psi =
        SpinorField::gaussian(g, {0, 0, 0}, 1.5, {k0, 0, 0}, {1.0, 0.0});
    MixedState st = MixedState::pure(hbar, psi);
    auto j = pauli_current(st, gauge);
    CHECK(j[0].integral() == doctest::Approx(hbar * k0).epsilon(2e-9));
    CHECK(std::abs(j[1].integral()) < 1e-10);

    // real-valued spinor: convective part identically zero
    SpinorField re = SpinorField::gaussian(g, {0, 0, 0}, 1.5, {0, 0, 0}, {1.0, 0.0});
    auto jc = convective_current(MixedState::pure(hbar, re), gauge);
    CHECK(jc[0].max_abs() < 1e-13);
    CHECK(jc[1].max_abs() < 1e-13);

    // constant spin orientation: spin term = s * hbar * curl(n rho);
    // finite-difference oracle, accurate to O(h^2)
    UniformGrid gs = grid2d(64, 12.0);
    SpinorField sp = SpinorField::gaussian(gs, {0.5, -0.3, 0}, 1.2, {0, 0, 0},
                                           {1.0, 0.0});  // n = z
    MixedState sst = MixedState::pure(hbar, sp);
    auto full = pauli_current(sst, GaugeField::zero(gs));
    auto conv = convective_current(sst, GaugeField::zero(gs));
    RealField rho = density(sst);
    double h = gs.spacing(0);
    double grad_scale = 0.0;
    for (std::int64_t i = 0; i < gs.size(); ++i)
        grad_scale = std::max(grad_scale, std::abs(full[0][i] - conv[0][i]));
    double fd_tol = 0.01 * grad_scale;  // second-order FD truncation
    for (int i0 = 2; i0 < gs.n(0) - 2; ++i0)
        for (int i1 = 2; i1 < gs.n(1) - 2; ++i1) {
            auto at = [&](int a, int b) { return rho[a * gs.n(1) + b]; };
            double d_dy = (at(i0, i1 + 1) - at(i0, i1 - 1)) / (2.0 * h);
            double d_dx = (at(i0 + 1, i1) - at(i0 - 1, i1)) / (2.0 * h);
            std::int64_t f = i0 * gs.n(1) + i1;
            CHECK(std::abs(full[0][f] - conv[0][f] - hbar * d_dy) < fd_tol);
            CHECK(std::abs(full[1][f] - conv[1][f] + hbar * d_dx) < fd_tol);
        }

    // divergence of the spin term vanishes spectrally
    std::vector<RealField> spin_part;
    for (int a = 0; a < 2; ++a) {
        RealField d(gs);
        for (std::int64_t i = 0; i < gs.size(); ++i) d[i] = full[a][i] - conv[a][i];
        spin_part.push_back(d);
    }
    CHECK(divergence(spin_part).max_abs() < 1e-12);
}

TEST_CASE("current consistency: integral equals mean covariant momentum") {
    UniformGrid g = grid2d(32, 12.0);
    double hbar = 0.7;
    GaugeField gauge = GaugeField::uniform_b_landau(g, 0.8);
    SpinorField psi = SpinorField::gaussian(g, {1.0, 0.5, 0}, 1.1,
                                            {2.0 * PI / 12.0, 0, 0},
                                            {0.8, cdouble{0.3, 0.5}});
    MixedState st = MixedState::pure(hbar, psi);
    auto j = pauli_current(st, gauge);

    // sum_j lambda <Psi,(hbar grad - iA)Psi> via observables path
    std::vector<cdouble> d(g.size());
    for (int a = 0; a < 2; ++a) {
        cdouble acc{0, 0};
        for (int c = 0; c < 2; ++c) {
            derivative_complex(g, psi.comp(c), d, a);
            for (std::int64_t i = 0; i < g.size(); ++i)
                acc += std::conj(psi.comp(c)[i]) *
                       (hbar * d[i] - I * gauge.a()[a][i] * psi.comp(c)[i]) *
                       g.cell_volume();
        }
        CHECK(j[a].integral() == doctest::Approx(acc.imag()).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("energy: gaussian kinetic oracle, stern-gerlach values") {
    // Gaussian integral oracle: kinetic = hbar^2 d/(8 sigma^2) for the
    // density-std sigma normalization used by the constructor.
    UniformGrid g = grid2d(64, 20.0);
    double hbar = 1.0, sigma = 1.3;
    SpinorField psi = SpinorField::gaussian(g, {0, 0, 0}, sigma, {0, 0, 0}, {1.0, 0.0});
    MixedState st = MixedState::pure(hbar, psi);
    GaugeField zero = GaugeField::zero(g);
    RealField vsc(g);
    EnergyBreakdown e = energy(st, zero, vsc);
    CHECK(e.kinetic ==
          doctest::Approx(hbar * hbar * 2.0 / (8.0 * sigma * sigma)).epsilon(1e-10));
    CHECK(e.stern_gerlach == 0.0);
    CHECK(e.external == doctest::Approx(0.0).scale(1.0));

    // uniform B, spin-up: SG = -hbar B0 / 2
    double b0 = 0.9;
    GaugeField lb = GaugeField::uniform_b_landau(g, b0);
    EnergyBreakdown eb = energy(st, lb, vsc);
    CHECK(eb.stern_gerlach == doctest::Approx(-hbar * b0 / 2.0).epsilon(1e-10));
}

TEST_CASE("apply_hamiltonian: plane wave eigenvector") {
    UniformGrid g = grid1d(128, 8.0);
    double hbar = 0.5;
    double k = 2.0 * PI * 5 / 8.0;
    SpinorField psi(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        psi.comp(0)[i] = std::exp(I * k * g.coord(0, i));
    psi.normalize();
    RealField vsc(g);
    SpinorField h = apply_hamiltonian(psi, GaugeField::zero(g), vsc, hbar);
    double ev = 0.5 * hbar * hbar * k * k;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(h.comp(0)[i] - ev * psi.comp(0)[i]) < 1e-12);
        CHECK(std::abs(h.comp(1)[i]) < 1e-14);
    }
}

TEST_CASE("apply_hamiltonian matches a dense-matrix oracle (landau gauge)") {
    // 2d 8x8 grid, uniform B in Landau gauge, quartic-free dense assembly via
    // explicit DFT differentiation matrices.
    const int n = 8;
    const double L = 6.0, hbar = 0.7, b0 = 1.1;
    UniformGrid g(2, {n, n}, {L, L});
    GaugeField gauge = GaugeField::uniform_b_landau(g, b0);
    RealField vext = RealField::sample(g, [&](const std::array<double, 3>& x) {
        return 0.3 * std::cos(2.0 * PI * x[0] / L);
    });
    GaugeField gv(g, gauge.a(), vext,
                  {RealField(g, b0)});
    RealField vsc = RealField::sample(g, [&](const std::array<double, 3>& x) {
        return 0.1 * std::sin(2.0 * PI * x[1] / L);
    });

    using Cd = Eigen::MatrixXcd;
    Cd dft = Cd::Zero(n, n), idft = Cd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            dft(a, b) = std::exp(-I * 2.0 * PI * double(a * b) / double(n));
            idft(a, b) = std::exp(I * 2.0 * PI * double(a * b) / double(n)) / double(n);
        }
    Eigen::VectorXcd ik(n);
    for (int m = 0; m < n; ++m) ik(m) = I * g.wavenumbers_grad(0)[m];
    Cd d1 = idft * ik.asDiagonal() * dft;  // spectral d/dx on one axis

    const int np = n * n;
    Cd dx = Cd::Zero(np, np), dy = Cd::Zero(np, np);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k2 = 0; k2 < n; ++k2) {
                dx(i * n + j, k2 * n + j) = d1(i, k2);
                dy(i * n + j, i * n + k2) = d1(j, k2);
            }
    Cd ax = Cd::Zero(np, np), vdiag = Cd::Zero(np, np);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::int64_t f = i * n + j;
            ax(f, f) = gauge.a()[0][f];
            vdiag(f, f) = vext[f] + vsc[f];
        }
    Cd cdx = hbar * dx - I * ax;  // A_y = 0 in Landau gauge
    Cd cdy = hbar * dy;
    Cd hscalar = -0.5 * (cdx * cdx + cdy * cdy) + vdiag;

    // spin block: H = hscalar ox I2 - (hbar/2) B0 sigma_z (uniform B)
    SpinorField psi = random_bandlimited(g, 42);
    SpinorField hpsi = apply_hamiltonian(psi, gv, vsc, hbar);

    Eigen::VectorXcd up(np), dn(np);
    for (int i = 0; i < np; ++i) {
        up(i) = psi.comp(0)[i];
        dn(i) = psi.comp(1)[i];
    }
    Eigen::VectorXcd hup = hscalar * up - 0.5 * hbar * b0 * up;
    Eigen::VectorXcd hdn = hscalar * dn + 0.5 * hbar * b0 * dn;
    for (int i = 0; i < np; ++i) {
        CHECK(std::abs(hpsi.comp(0)[i] - hup(i)) < 1e-10);
        CHECK(std::abs(hpsi.comp(1)[i] - hdn(i)) < 1e-10);
    }
}

TEST_CASE("hamiltonian is hermitian on random pairs; <H> matches energy") {
    UniformGrid g = grid2d(32, 10.0);
    double hbar = 0.6;
    GaugeField gauge = GaugeField::uniform_b_landau(g, 0.5);
    RealField vsc = RealField::sample(g, [&](const std::array<double, 3>& x) {
        return 0.2 * std::cos(2.0 * PI * x[0] / 10.0) * std::sin(2.0 * PI * x[1] / 10.0);
    });
    SpinorField a = random_bandlimited(g, 1);
    SpinorField b = random_bandlimited(g, 2);
    SpinorField ha = apply_hamiltonian(a, gauge, vsc, hbar);
    SpinorField hb = apply_hamiltonian(b, gauge, vsc, hbar);
    cdouble lhs = b.inner(ha);
    cdouble rhs = std::conj(a.inner(hb));
    CHECK(std::abs(lhs - rhs) < 1e-10);

    // <Psi, H Psi> = kinetic + SG + external + <rho, V_sc>
    MixedState st = MixedState::pure(hbar, a);
    EnergyBreakdown e = energy(st, gauge, RealField(g));
    RealField rho = density(st);
    double rv = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) rv += rho[i] * vsc[i];
    rv *= g.cell_volume();
    cdouble quad = a.inner(ha);
    CHECK(quad.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(quad.real() ==
          doctest::Approx(e.kinetic + e.stern_gerlach + e.external + rv).epsilon(1e-10));
}

TEST_CASE("gauge covariance: A and A + grad chi give covariant H and equal densities") {
    // The packet must be well contained; wrap tails would break spectral
    // accuracy of the transformed state.
    UniformGrid g = grid2d(128, 18.0);
    double hbar = 0.8;
    GaugeField gauge = GaugeField::zero(g);
    RealField chi = RealField::sample(g, [&](const std::array<double, 3>& x) {
        return 0.05 * std::sin(2.0 * PI * x[0] / 18.0) * std::cos(2.0 * PI * x[1] / 18.0);
    });
    auto gchi = gradient(chi);
    GaugeField shifted(g, {gchi[0], gchi[1]}, RealField(g));

    SpinorField psi = SpinorField::gaussian(g, {0, 0, 0}, 0.8, {0, 0, 0},
                                            {1.0, cdouble{0.2, 0.1}});
    SpinorField transformed(g);
    for (int c = 0; c < 2; ++c)
        for (std::int64_t i = 0; i < g.size(); ++i)
            transformed.comp(c)[i] = std::exp(I * chi[i] / hbar) * psi.comp(c)[i];

    RealField r1 = density(MixedState::pure(hbar, psi));
    RealField r2 = density(MixedState::pure(hbar, transformed));
    for (std::int64_t i = 0; i < g.size(); ++i)
        CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-12).scale(1.0));

    RealField vsc(g);
    SpinorField h1 = apply_hamiltonian(psi, gauge, vsc, hbar);
    SpinorField h2 = apply_hamiltonian(transformed, shifted, vsc, hbar);
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (std::int64_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(h2.comp(c)[i] -
                                             std::exp(I * chi[i] / hbar) * h1.comp(c)[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("stern-gerlach rotation closed form") {
    CHECK(stern_gerlach_rotation({0, 0, 0}, 0.3).a00 == cdouble{1.0, 0.0});

    // sigma_z eigenphases
    double b0 = 2.0, dt = 0.4, theta = 0.5 * dt * b0;
    Mat2 r = stern_gerlach_rotation({0, 0, b0}, dt);
    CHECK(std::abs(r.a00 - std::exp(I * theta)) < 1e-15);
    CHECK(std::abs(r.a11 - std::exp(-I * theta)) < 1e-15);
    CHECK(std::abs(r.a01) + std::abs(r.a10) < 1e-15);

    // unitarity to machine precision
    Mat2 u = stern_gerlach_rotation({0.3, -1.2, 0.7}, 0.13);
    Mat2 uu = u.adjoint() * u;
    CHECK(std::abs(uu.a00 - 1.0) < 1e-15);
    CHECK(std::abs(uu.a11 - 1.0) < 1e-15);
    CHECK(std::abs(uu.a01) < 1e-15);

    // theta = pi/2: rotation equals i sigma.n and squares to -I
    std::array<double, 3> b{0.0, 1.5, 0.0};
    double dt2 = PI / 1.5;  // theta = dt|B|/2 = pi/2
    Mat2 q = stern_gerlach_rotation(b, dt2);
    Mat2 expect = pauli::sigma_dot({0, 1, 0}) * I;
    CHECK(std::abs(q.a00 - expect.a00) < 1e-14);
    CHECK(std::abs(q.a01 - expect.a01) < 1e-14);
    Mat2 sq = q * q;
    CHECK(std::abs(sq.a00 + 1.0) < 1e-14);
    CHECK(std::abs(sq.a11 + 1.0) < 1e-14);
}
