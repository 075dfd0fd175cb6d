#include <doctest.h>

#include <cmath>

#include "pauliflow/propagator.hpp"
#include "pauliflow/spectral.hpp"

using namespace pauliflow;

namespace {

std::array<double, 3> position_expectation(const MixedState& st) {
    const UniformGrid& g = st.grid();
    RealField rho = density(st);
    std::array<double, 3> r{0, 0, 0};
    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1;
    std::int64_t flat = 0;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1) {
            r[0] += g.coord(0, i0) * rho[flat];
            if (d > 1) r[1] += g.coord(1, i1) * rho[flat];
            ++flat;
        }
    for (int a = 0; a < 3; ++a) r[a] *= g.cell_volume();
    return r;
}

double spread_x2(const MixedState& st) {
    const UniformGrid& g = st.grid();
    RealField rho = density(st);
    double r = 0.0;
    const int d = g.dim();
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1;
    std::int64_t flat = 0;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1) {
            double x = g.coord(0, i0);
            double x2 = x * x;
            if (d > 1) {
                double y = g.coord(1, i1);
                x2 += y * y;
            }
            r += x2 * rho[flat++];
        }
    return r * g.cell_volume();
}

double state_l2_distance(const MixedState& a, const MixedState& b) {
    double acc = 0.0;
    for (int j = 0; j < a.num_orbitals(); ++j)
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < a.grid().size(); ++i)
                acc += std::norm(a.orbital(j).comp(c)[i] - b.orbital(j).comp(c)[i]);
    return std::sqrt(acc * a.grid().cell_volume());
}

}  // namespace

TEST_CASE("strang: free gaussian matches the analytic dispersion") {
    UniformGrid g(1, {256}, {24.0});
    double hbar = 1.0, sigma0 = 1.0, t_end = 1.0;
    SpinorField psi0 = SpinorField::gaussian(g, {0, 0, 0}, sigma0, {0, 0, 0}, {1, 0});
    MixedState st = MixedState::pure(hbar, psi0);

    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    auto res = propagate(st, GaugeField::zero(g), cfg);

    // psi(x,t) = (2 pi s0^2)^{-1/4} beta^{-1/2} exp(-x^2/(4 s0^2 beta)),
    // beta = 1 + i hbar t/(2 s0^2)
    cdouble beta{1.0, hbar * t_end / (2.0 * sigma0 * sigma0)};
    double err2 = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double x = g.coord(0, i);
        cdouble exact = std::pow(2.0 * PI * sigma0 * sigma0, -0.25) /
                        std::sqrt(beta) *
                        std::exp(-x * x / (4.0 * sigma0 * sigma0 * beta));
        err2 += std::norm(res.state.orbital(0).comp(0)[i] - exact);
    }
    double err = std::sqrt(err2 * g.cell_volume());
    CHECK(err <= 1e-6);

    for (const auto& r : res.reports) {
        CHECK(std::abs(r.mass - 1.0) < 1e-12);
        CHECK(r.norm_drift < 1e-12);
    }
}

TEST_CASE("strang: cyclotron orbit follows the classical circle (Ehrenfest)") {
    const double hbar = 0.5, b0 = 1.0, L = 16.0;
    UniformGrid g(2, {128, 128}, {L, L});
    GaugeField gauge = GaugeField::uniform_b_landau(g, b0);

    double k0 = 2.0 * PI * 5.0 / L;  // momentum hbar*k0 along y
    double v0 = hbar * k0;
    std::array<double, 3> x0{-1.0, 0.0, 0.0};
    SpinorField psi =
        SpinorField::gaussian(g, x0, 1.0, {0.0, k0, 0.0}, {1.0, 0.0});
    MixedState st = MixedState::pure(hbar, psi);

    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 3.0;  // about half a cyclotron period
    std::vector<std::pair<double, std::array<double, 3>>> track;
    cfg.snapshot_stride = 750;
    auto res = propagate(st, gauge, cfg,
                         [&](int, double t, const MixedState& s, const RealField&) {
                             track.push_back({t, position_expectation(s)});
                         });

    // classical orbit: v(t) = R(-B t) v0, center = x0 + (v0 x z)/B
    double cx = x0[0] + v0 / b0, cy = x0[1];
    for (const auto& [t, pos] : track) {
        double vx = v0 * std::sin(b0 * t);
        double vy = v0 * std::cos(b0 * t);
        double ex = cx - vy / b0, ey = cy + vx / b0;
        CHECK(std::abs(pos[0] - ex) < 1e-6);
        CHECK(std::abs(pos[1] - ey) < 1e-6);
    }
    CHECK(res.reports.back().norm_drift < 1e-12);
}

TEST_CASE("strang: second-order self-convergence under dt halving") {
    UniformGrid g(1, {128}, {16.0});
    double hbar = 0.5;
    SpinorField psi = SpinorField::gaussian(g, {0.5, 0, 0}, 0.8, {0, 0, 0}, {1, 0});
    MixedState st = MixedState::pure(hbar, psi);

    SolverConfig cfg;
    cfg.nonlinearity = Nonlinearity::poisson;
    cfg.t_end = 0.25;

    auto run = [&](double dt) {
        SolverConfig c = cfg;
        c.dt = dt;
        return propagate(st, GaugeField::zero(g), c).state;
    };
    MixedState s1 = run(0.01), s2 = run(0.005), s3 = run(0.0025);
    double d12 = state_l2_distance(s1, s2);
    double d23 = state_l2_distance(s2, s3);
    double ratio = d12 / d23;
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);
}

TEST_CASE("rk4: eigenstate phase rotation, zero hamiltonian, budget check") {
    UniformGrid g(1, {64}, {8.0});
    double hbar = 1.0;
    double k = 2.0 * PI * 2 / 8.0;
    SpinorField pw(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        pw.comp(0)[i] = std::exp(I * k * g.coord(0, i));
    pw.normalize();
    MixedState st = MixedState::pure(hbar, pw);
    GaugeField zero = GaugeField::zero(g);
    RealField vsc(g);

    double e = 0.5 * hbar * hbar * k * k;
    double dt = 0.005;  // within the k_max stability budget
    MixedState evolved = st;
    for (int s = 0; s < 20; ++s) rk4_step(evolved, zero, vsc, dt);
    CHECK(std::abs(evolved.orbital(0).norm() - 1.0) < 1e-10);
    cdouble overlap = st.orbital(0).inner(evolved.orbital(0));
    cdouble expected = std::exp(-I * e * 20.0 * dt / hbar);
    CHECK(std::abs(overlap - expected) < 1e-8);

    // zero hamiltonian on the k=0 state: identity
    SpinorField flat(g);
    for (std::int64_t i = 0; i < g.size(); ++i) flat.comp(0)[i] = 1.0;
    flat.normalize();
    MixedState fs = MixedState::pure(hbar, flat);
    rk4_step(fs, zero, vsc, 0.1);
    for (std::int64_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(fs.orbital(0).comp(0)[i] - flat.comp(0)[i]) < 1e-15);

    SolverConfig cfg;
    cfg.scheme = Scheme::rk4_pseudospectral;
    cfg.dt = 1.0;  // far beyond the spectral stability budget
    cfg.t_end = 2.0;
    CHECK_THROWS_AS(propagate(st, zero, cfg), ValidationError);
}

TEST_CASE("rk4 agrees with strang on a splitting-compatible magnetic case") {
    // Smooth periodic shear gauge: both schemes see spectrally clean fields,
    // so the difference isolates the O(dt^2) splitting error.
    UniformGrid g(2, {64, 64}, {12.0, 12.0});
    double hbar = 0.5;
    RealField ax = RealField::sample(g, [](const std::array<double, 3>& x) {
        return 0.4 * std::sin(2.0 * PI * x[1] / 12.0);
    });
    GaugeField gauge(g, {ax, RealField(g)}, RealField(g));
    SpinorField psi = SpinorField::gaussian(g, {0.5, -0.5, 0}, 1.0,
                                            {2.0 * PI / 12.0, 0, 0}, {1.0, 0.5});
    MixedState st = MixedState::pure(hbar, psi);

    auto diff_at = [&](double dt) {
        SolverConfig cs;
        cs.dt = dt;
        cs.t_end = 0.08;
        auto a = propagate(st, gauge, cs);
        SolverConfig cr = cs;
        cr.scheme = Scheme::rk4_pseudospectral;
        auto b = propagate(st, gauge, cr);
        return state_l2_distance(a.state, b.state);
    };
    double d1 = diff_at(0.004);
    double d2 = diff_at(0.002);
    CHECK(d1 < 1e-5);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("propagate: vanishing coupling reproduces the linear flow") {
    UniformGrid g(2, {64, 64}, {12.0, 12.0});
    double hbar = 0.5;
    GaugeField gauge = GaugeField::uniform_b_landau(g, 0.4);
    SpinorField psi = SpinorField::gaussian(g, {0.3, 0.2, 0}, 1.0, {0, 0, 0}, {1, 0});
    MixedState st = MixedState::pure(hbar, psi);

    SolverConfig lin;
    lin.dt = 2e-3;
    lin.t_end = 0.2;
    auto a = propagate(st, gauge, lin);

    SolverConfig eps = lin;
    eps.nonlinearity = Nonlinearity::poisson;
    eps.poisson.coupling = 1e-10;
    auto b = propagate(st, gauge, eps);
    CHECK(state_l2_distance(a.state, b.state) < 1e-10);
}

TEST_CASE("propagate: repulsive coupling spreads the packet; rk4 cross-check") {
    UniformGrid g(1, {128}, {16.0});
    double hbar = 0.5;
    SpinorField psi = SpinorField::gaussian(g, {0, 0, 0}, 0.7, {0, 0, 0}, {1, 0});
    MixedState st = MixedState::pure(hbar, psi);

    SolverConfig cfg;
    cfg.nonlinearity = Nonlinearity::poisson;
    cfg.dt = 1e-3;
    cfg.t_end = 0.2;
    cfg.snapshot_stride = 50;
    std::vector<double> x2;
    auto res = propagate(st, GaugeField::zero(g), cfg,
                         [&](int, double, const MixedState& s, const RealField&) {
                             x2.push_back(spread_x2(s));
                         });
    REQUIRE(x2.size() >= 4);
    for (std::size_t i = 1; i < x2.size(); ++i) CHECK(x2[i] > x2[i - 1]);

    SolverConfig cr = cfg;
    cr.scheme = Scheme::rk4_pseudospectral;
    cr.snapshot_stride = 0;
    auto rr = propagate(st, GaugeField::zero(g), cr);
    CHECK(state_l2_distance(res.state, rr.state) < 1e-6);
}

TEST_CASE("propagate: energy drift, spin conservation, larmor precession") {
    // Poisson-coupled 1d run: relative energy drift <= 1e-6 over unit time
    UniformGrid g(1, {256}, {20.0});
    double hbar = 0.5;
    SpinorField psi = SpinorField::gaussian(g, {0, 0, 0}, 1.0, {0, 0, 0},
                                            {1.0, cdouble{0.4, 0.2}});
    MixedState st = MixedState::pure(hbar, psi);
    SolverConfig cfg;
    cfg.nonlinearity = Nonlinearity::poisson;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    auto res = propagate(st, GaugeField::zero(g), cfg);
    double e0 = res.reports.front().energy.total();
    for (const auto& r : res.reports)
        CHECK(std::abs(r.energy.total() - e0) <= 1e-6 * std::abs(e0));

    // B=0: spin expectation constant
    auto s0 = spin_expectation(st);
    auto s1 = spin_expectation(res.state);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(s1[a] - s0[a]) < 1e-10);

    // uniform B: <sigma> precesses about z at frequency B0, independent of hbar
    UniformGrid g2(2, {64, 64}, {12.0, 12.0});
    double b0 = 0.8;
    GaugeField gauge = GaugeField::uniform_b_landau(g2, b0);
    for (double hb : {0.25, 0.5}) {
        SpinorField sx = SpinorField::gaussian(g2, {0, 0, 0}, 1.0, {0, 0, 0},
                                               {1.0, 1.0});  // spin along +x
        MixedState stx = MixedState::pure(hb, sx);
        SolverConfig c2;
        c2.dt = 1e-3;
        c2.t_end = 0.5;
        auto r2 = propagate(stx, gauge, c2);
        auto sp = spin_expectation(r2.state);
        double angle = std::atan2(-sp[1], sp[0]);  // precession angle at t_end
        CHECK(std::abs(angle - b0 * c2.t_end) < 1e-8);
    }
}

TEST_CASE("propagate: theorem-3 continuity of the solution map") {
    UniformGrid g(1, {128}, {16.0});
    double hbar = 0.5;
    GaugeField zero = GaugeField::zero(g);
    SpinorField base = SpinorField::gaussian(g, {0, 0, 0}, 0.9, {0, 0, 0}, {1, 0});
    SpinorField dir = SpinorField::hermite(g, {0, 0, 0}, 0.9, {1, 0, 0}, {1, 0});

    SolverConfig cfg;
    cfg.nonlinearity = Nonlinearity::poisson;
    cfg.dt = 1e-3;
    cfg.t_end = 0.25;
    auto ref = propagate(MixedState::pure(hbar, base), zero, cfg);

    auto dist_for = [&](double delta) {
        SpinorField pert(g);
        for (int c = 0; c < 2; ++c)
            for (std::int64_t i = 0; i < g.size(); ++i)
                pert.comp(c)[i] = base.comp(c)[i] + delta * dir.comp(c)[i];
        pert.normalize();
        auto run = propagate(MixedState::pure(hbar, pert), zero, cfg);
        return energy_space_distance(run.state.orbital(0), ref.state.orbital(0), zero);
    };
    double d1 = dist_for(2e-3), d2 = dist_for(1e-3), d3 = dist_for(5e-4);
    CHECK(d1 / d2 > 2.0 / 1.5);
    CHECK(d1 / d2 < 2.0 * 1.5);
    CHECK(d2 / d3 > 2.0 / 1.5);
    CHECK(d2 / d3 < 2.0 * 1.5);
}

TEST_CASE("propagate: blow-up guard and scheme validation") {
    UniformGrid g(1, {64}, {12.0});
    SpinorField psi = SpinorField::gaussian(g, {0, 0, 0}, 1.0, {0, 0, 0}, {1, 0});
    MixedState st = MixedState::pure(0.5, psi);

    SolverConfig cfg;
    cfg.nonlinearity = Nonlinearity::poisson;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    cfg.blowup_factor = 1e-15;  // any drift trips the guard
    CHECK_THROWS_AS(propagate(st, GaugeField::zero(g), cfg), NumericalError);

    // non-splitting-compatible gauge rejected by strang
    UniformGrid g2(2, {32, 32}, {8.0, 8.0});
    RealField ax = RealField::sample(g2, [](const std::array<double, 3>& x) {
        return std::sin(2.0 * PI * x[0] / 8.0);
    });
    GaugeField bad = GaugeField::user_table(g2, {ax, RealField(g2)}, RealField(g2));
    SpinorField p2 = SpinorField::gaussian(g2, {0, 0, 0}, 1.0, {0, 0, 0}, {1, 0});
    MixedState st2 = MixedState::pure(0.5, p2);
    SolverConfig c2;
    c2.dt = 1e-3;
    c2.t_end = 0.01;
    CHECK_THROWS_AS(propagate(st2, bad, c2), ValidationError);
}
