#include "pauliflow/studies.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pauliflow/io.hpp"
#include "pauliflow/nbody.hpp"

namespace pauliflow {

namespace {

RealField cosine_well(const UniformGrid& g, double depth) {
    if (depth == 0.0) return RealField(g);
    return RealField::sample(g, [&](const std::array<double, 3>& x) {
        double v = 0.0;
        for (int a = 0; a < g.dim(); ++a)
            v += 1.0 - std::cos(2.0 * PI * x[a] / g.extent(a));
        return depth * v;
    });
}

std::array<cdouble, 2> spin_amplitudes(const std::string& spin) {
    if (spin == "up") return {cdouble{1.0, 0.0}, cdouble{0.0, 0.0}};
    if (spin == "down") return {cdouble{0.0, 0.0}, cdouble{1.0, 0.0}};
    return {cdouble{M_SQRT1_2, 0.0}, cdouble{M_SQRT1_2, 0.0}};  // +x
}

}  // namespace

UniformGrid build_grid(const ExperimentSpec& spec) {
    std::vector<int> n(spec.grid_dim, spec.grid_n);
    std::vector<double> ext(spec.grid_dim, spec.grid_extent);
    return UniformGrid(spec.grid_dim, n, ext, spec.budget_points);
}

GaugeField build_gauge(const ExperimentSpec& spec, const UniformGrid& g) {
    RealField vext = cosine_well(g, spec.well_depth);
    if (spec.gauge_preset == "uniform_b_landau") {
        GaugeField base = GaugeField::uniform_b_landau(g, spec.b0);
        std::vector<RealField> b;
        if (g.dim() == 2) {
            b.emplace_back(g, spec.b0);
        } else {
            b.emplace_back(g);
            b.emplace_back(g);
            b.emplace_back(g, spec.b0);
        }
        return GaugeField(g, base.a(), vext, std::move(b));
    }
    std::vector<RealField> a;
    if (g.dim() >= 2)
        for (int j = 0; j < g.dim(); ++j) a.emplace_back(g);
    return GaugeField(g, std::move(a), vext);
}

namespace {

// Exact periodic ground state phi = exp(-beta sum_a (1 - cos(2 pi x_a / L)))
// together with the potential V = (hbar^2/2) lap(phi)/phi that makes it
// stationary.
std::pair<SpinorField, RealField> cosine_ground_pair(const UniformGrid& g,
                                                     double hbar, double sigma) {
    const int d = g.dim();
    std::array<double, 3> u{0, 0, 0}, beta{0, 0, 0};
    for (int a = 0; a < d; ++a) {
        u[a] = 2.0 * PI / g.extent(a);
        beta[a] = 1.0 / (2.0 * sigma * sigma * u[a] * u[a]);
    }
    SpinorField phi(g);
    RealField v = RealField::sample(g, [&](const std::array<double, 3>& x) {
        double sp2 = 0.0, spp = 0.0;
        for (int a = 0; a < d; ++a) {
            double s1 = beta[a] * u[a] * std::sin(u[a] * x[a]);
            spp += -beta[a] * u[a] * u[a] * std::cos(u[a] * x[a]);
            sp2 += s1 * s1;
        }
        return 0.5 * hbar * hbar * (spp + sp2);
    });
    std::int64_t flat = 0;
    for (int i0 = 0; i0 < g.n(0); ++i0)
        for (int i1 = 0; i1 < (d > 1 ? g.n(1) : 1); ++i1) {
            double s = -beta[0] * (1.0 - std::cos(u[0] * g.coord(0, i0)));
            if (d > 1) s += -beta[1] * (1.0 - std::cos(u[1] * g.coord(1, i1)));
            phi.comp(0)[flat++] = std::exp(s);
        }
    phi.normalize();
    return {std::move(phi), std::move(v)};
}

}  // namespace

MixedState build_state(const ExperimentSpec& spec, const UniformGrid& g) {
    // "unpolarized" pairs every spatial orbital with both spin directions,
    // giving vanishing magnetization and zero spin current.
    const bool unpol = spec.spin == "unpolarized";
    auto spin = spin_amplitudes(unpol ? "up" : spec.spin);
    if (spec.state_kind == "gaussian") {
        SpinorField up =
            SpinorField::gaussian(g, spec.center, spec.sigma, spec.wavevector, spin);
        if (!unpol) return MixedState::pure(spec.hbar, up);
        SpinorField dn = SpinorField::gaussian(g, spec.center, spec.sigma,
                                               spec.wavevector, spin_amplitudes("down"));
        return MixedState(spec.hbar, {0.5, 0.5}, {up, dn});
    }
    if (spec.state_kind == "hermite_ladder") {
        std::vector<SpinorField> orbs;
        int total = unpol ? 2 * spec.orbitals : spec.orbitals;
        std::vector<double> w(total, 1.0 / total);
        for (int jj = 0; jj < total; ++jj) {
            int j = unpol ? jj / 2 : jj;
            std::array<int, 3> order{j, 0, 0};
            SpinorField o = SpinorField::hermite(
                g, spec.center, spec.sigma, order,
                unpol ? spin_amplitudes(jj % 2 ? "down" : "up") : spin);
            if (spec.wavevector[0] != 0.0 || spec.wavevector[1] != 0.0) {
                std::int64_t flat = 0;
                const int d = g.dim();
                for (int i0 = 0; i0 < g.n(0); ++i0)
                    for (int i1 = 0; i1 < (d > 1 ? g.n(1) : 1); ++i1) {
                        double ph = spec.wavevector[0] * g.coord(0, i0);
                        if (d > 1) ph += spec.wavevector[1] * g.coord(1, i1);
                        cdouble z = std::exp(I * ph);
                        o.comp(0)[flat] *= z;
                        o.comp(1)[flat] *= z;
                        ++flat;
                    }
            }
            orbs.push_back(std::move(o));
        }
        return MixedState(spec.hbar, w, std::move(orbs));
    }
    if (spec.state_kind == "cosine_ground") {
        auto [phi, v] = cosine_ground_pair(g, spec.hbar, spec.sigma);
        if (spec.spin != "unpolarized") return MixedState::pure(spec.hbar, phi);
        SpinorField dn(g);
        for (std::int64_t i = 0; i < g.size(); ++i) dn.comp(1)[i] = phi.comp(0)[i];
        return MixedState(spec.hbar, {0.5, 0.5}, {phi, dn});
    }
    // thermal_blob
    return build_thermal_blob(g, spec.hbar, spec.blob_center_x, spec.blob_center_p,
                              spec.blob_sigma_x, spec.blob_sigma_p,
                              spec.weight_condition_max, spec.max_orbitals);
}

SolverConfig build_solver_config(const ExperimentSpec& spec) {
    SolverConfig cfg;
    cfg.scheme = spec.scheme == "strang_split" ? Scheme::strang_split
                                               : Scheme::rk4_pseudospectral;
    cfg.dt = spec.dt;
    cfg.t_end = spec.t_end;
    if (spec.nonlinearity == "none") cfg.nonlinearity = Nonlinearity::none;
    if (spec.nonlinearity == "poisson") cfg.nonlinearity = Nonlinearity::poisson;
    if (spec.nonlinearity == "hartree") {
        cfg.nonlinearity = Nonlinearity::hartree;
        cfg.kernel = InteractionKernel::softened_coulomb(-spec.coupling, spec.softening);
    }
    if (spec.nonlinearity == "poisson_plus_xalpha") {
        cfg.nonlinearity = Nonlinearity::poisson_plus_xalpha;
        cfg.xalpha_coeff = spec.xalpha;
    }
    cfg.poisson.coupling = spec.coupling;
    cfg.poisswell = spec.poisswell;
    cfg.poisswell_opt.tol = spec.poisswell_tol;
    cfg.poisswell_opt.max_iter = spec.poisswell_max_iter;
    cfg.poisswell_opt.damping = spec.poisswell_damping;
    cfg.spin_current_sign = spec.spin_current_sign;
    cfg.snapshot_stride = spec.snapshot_stride;
    return cfg;
}

MixedState build_thermal_blob(const UniformGrid& g, double hbar,
                              const std::array<double, 3>& x0,
                              const std::array<double, 3>& p0, double sigma_x,
                              double sigma_p, double c_max, int max_orbitals,
                              ThermalBlobInfo* info) {
    const int d = g.dim();
    // oscillator shape matches the blob aspect ratio; the occupation ratio q
    // tunes sigma_x sigma_p = (hbar/2)(1+q)/(1-q), clamped at the pure state
    double s = 2.0 * sigma_x * sigma_p / hbar;
    double q = s > 1.0 ? (s - 1.0) / (s + 1.0) : 0.0;
    double purity_scale = std::sqrt(std::max(s, 1.0));
    double sx_eff = sigma_x / std::sqrt(s) * purity_scale;
    double sp_eff = sigma_p / std::sqrt(s) * purity_scale;
    // ground-state width of the matched oscillator
    double sigma0 = std::sqrt(0.5 * hbar * sigma_x / sigma_p);

    // geometric weights q^(n1+..+nd), truncated
    const double tail = 1e-6;
    int ncut = q > 0.0 ? static_cast<int>(std::ceil(std::log(tail) / std::log(q))) : 0;
    struct Mode {
        std::array<int, 3> order{0, 0, 0};
        double w;
    };
    std::vector<Mode> modes;
    if (d == 1) {
        for (int n = 0; n <= ncut; ++n) modes.push_back({{n, 0, 0}, std::pow(q, n)});
    } else {
        for (int n = 0; n <= ncut; ++n)
            for (int m2 = 0; n + m2 <= ncut; ++m2)
                modes.push_back({{n, m2, 0}, std::pow(q, n + m2)});
    }
    std::sort(modes.begin(), modes.end(),
              [](const Mode& a, const Mode& b) { return a.w > b.w; });
    if (static_cast<int>(modes.size()) > max_orbitals) modes.resize(max_orbitals);
    double wsum = 0.0;
    for (const auto& m : modes) wsum += m.w;

    std::vector<SpinorField> orbs;
    std::vector<double> weights;
    for (const auto& m : modes) {
        SpinorField o = SpinorField::hermite(g, x0, sigma0, m.order, {1.0, 0.0});
        // momentum boost
        if (p0[0] != 0.0 || (d > 1 && p0[1] != 0.0)) {
            std::int64_t flat = 0;
            for (int i0 = 0; i0 < g.n(0); ++i0)
                for (int i1 = 0; i1 < (d > 1 ? g.n(1) : 1); ++i1) {
                    double ph = p0[0] * g.coord(0, i0) / hbar;
                    if (d > 1) ph += p0[1] * g.coord(1, i1) / hbar;
                    cdouble z = std::exp(I * ph);
                    o.comp(0)[flat] *= z;
                    o.comp(1)[flat] *= z;
                    ++flat;
                }
        }
        orbs.push_back(std::move(o));
        weights.push_back(m.w / wsum);
    }

    const int count = static_cast<int>(orbs.size());
    MixedState state = MixedState::scaled(hbar, weights, std::move(orbs), c_max);
    if (info) {
        info->orbitals = count;
        info->weight_condition = state.weight_condition();
        info->q = q;
        info->sigma_x_eff = sx_eff;
        info->sigma_p_eff = sp_eff;
    }
    return state;
}

namespace {

std::vector<std::string> report_columns() {
    return {"t", "mass", "E_total", "E_kin", "E_sg", "E_ext", "E_self", "iterations"};
}

void write_report_row(CsvWriter& csv, const StepReport& r) {
    csv.row({r.t, r.mass, r.energy.total(), r.energy.kinetic, r.energy.stern_gerlach,
             r.energy.external, r.energy.self, static_cast<double>(r.sc_iterations)});
}

void write_config_echo(const ExperimentSpec& spec, const std::string& outdir) {
    std::ofstream out(outdir + "/config.cfg");
    out << spec.canonical;
}

}  // namespace

RunSummary run_single(const ExperimentSpec& spec, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    UniformGrid g = build_grid(spec);
    GaugeField gauge = build_gauge(spec, g);
    MixedState state = build_state(spec, g);
    if (spec.state_kind == "cosine_ground") {
        // the eigenstate's own potential replaces V_ext
        auto [phi, v] = cosine_ground_pair(g, spec.hbar, spec.sigma);
        gauge = GaugeField(g, gauge.a(), v, gauge.b());
    }
    SolverConfig cfg = build_solver_config(spec);

    CsvWriter csv(outdir + "/report.csv", report_columns());
    std::vector<std::string> snapshots;
    auto sink = [&](int step, double t, const MixedState& st, const RealField& v_sc) {
        (void)t;
        char name[64];
        std::snprintf(name, sizeof name, "state_%06d.bin", step);
        // per-orbital snapshots would be bulky: store the density and the
        // self-consistent potential
        RealField rho = density(st);
        std::snprintf(name, sizeof name, "density_%06d.bin", step);
        write_real_field(outdir + "/" + name, rho, st.hbar());
        snapshots.push_back(name);
        snapshots.push_back(std::string(name) + ".json");
        std::snprintf(name, sizeof name, "vsc_%06d.bin", step);
        write_real_field(outdir + "/" + name, v_sc, st.hbar());
        snapshots.push_back(name);
        snapshots.push_back(std::string(name) + ".json");
    };

    PropagationResult res = propagate(state, gauge, cfg,
                                      cfg.snapshot_stride > 0 ? SnapshotSink(sink)
                                                              : SnapshotSink());
    for (const auto& r : res.reports) write_report_row(csv, r);
    write_config_echo(spec, outdir);

    RunSummary summary;
    summary.reports = res.reports;

    double mass0 = res.reports.front().mass;
    double mass_drift = 0.0, norm_drift = 0.0;
    for (const auto& r : res.reports) {
        mass_drift = std::max(mass_drift, std::abs(r.mass - mass0));
        norm_drift = std::max(norm_drift, r.norm_drift);
    }
    bool strang = cfg.scheme == Scheme::strang_split;
    double tol = strang ? 1e-10 : 1e-7 * std::max(1.0, cfg.t_end);

    Manifest manifest(spec.hash);
    manifest.set_monitor("mass_conservation", mass_drift <= tol);
    manifest.set_monitor("orbital_norms", norm_drift <= tol);
    manifest.add_file(outdir, "report.csv");
    manifest.add_file(outdir, "config.cfg");
    for (const auto& name : snapshots) manifest.add_file(outdir, name);
    manifest.write(outdir);
    summary.monitors_passed = manifest.all_monitors_passed();
    return summary;
}

namespace {

// Restrict a field on the fine (Pauli) grid to the coarse (Vlasov) grid;
// both are centered on the same box, so shared points line up at integer
// strides.
RealField decimate(const RealField& fine, const UniformGrid& coarse) {
    const UniformGrid& gf = fine.grid();
    const int d = gf.dim();
    std::array<int, 3> stride{1, 1, 1};
    for (int a = 0; a < d; ++a) {
        if (gf.n(a) % coarse.n(a) != 0 ||
            std::abs(gf.extent(a) - coarse.extent(a)) > 1e-12)
            throw ValidationError("pauli grid must refine the vlasov grid");
        stride[a] = gf.n(a) / coarse.n(a);
    }
    RealField out(coarse);
    std::array<int, 3> idx{0, 0, 0};
    std::int64_t flat = 0;
    int n0 = coarse.n(0), n1 = d > 1 ? coarse.n(1) : 1;
    for (idx[0] = 0; idx[0] < n0; ++idx[0])
        for (idx[1] = 0; idx[1] < n1; ++idx[1]) {
            std::int64_t src = std::int64_t(idx[0]) * stride[0] * (d > 1 ? gf.n(1) : 1);
            if (d > 1) src += std::int64_t(idx[1]) * stride[1];
            out[flat++] = fine[src];
        }
    return out;
}

// <f_V, phi(x, p + A(x))> on the Vlasov grid: the canonical-variable pairing
// of the kinetic-momentum reference.
std::vector<double> vlasov_pairings(const PhaseSpaceDensity& f,
                                    const TestFunctionBasket& basket,
                                    const std::vector<RealField>* a_comp) {
    const UniformGrid& g = f.xgrid();
    const int d = g.dim();
    const int np = f.np();
    std::vector<double> out(basket.functions.size(), 0.0);
    const std::int64_t psz = f.p_size();
    for (std::int64_t xf = 0; xf < g.size(); ++xf) {
        std::array<int, 3> xi{0, 0, 0};
        std::int64_t rem = xf;
        for (int a = d - 1; a >= 0; --a) {
            xi[a] = static_cast<int>(rem % g.n(a));
            rem /= g.n(a);
        }
        std::array<double, 3> x{0, 0, 0};
        for (int a = 0; a < d; ++a) x[a] = g.coord(a, xi[a]);
        std::array<double, 3> shift{0, 0, 0};
        if (a_comp)
            for (int a = 0; a < d; ++a) shift[a] = (*a_comp)[a][xf];

        const double* slab = f.values().data() + xf * psz;
        if (d == 1) {
            for (int i = 0; i < np; ++i) {
                double v = slab[i];
                if (v == 0.0) continue;
                std::array<double, 3> p{f.p_coord(i) + shift[0], 0, 0};
                for (std::size_t q = 0; q < out.size(); ++q)
                    out[q] += v * basket.functions[q].evaluate(x, p, d);
            }
        } else {
            for (int i = 0; i < np; ++i)
                for (int j = 0; j < np; ++j) {
                    double v = slab[std::int64_t(i) * np + j];
                    if (v == 0.0) continue;
                    std::array<double, 3> p{f.p_coord(i) + shift[0],
                                            f.p_coord(j) + shift[1], 0};
                    for (std::size_t q = 0; q < out.size(); ++q)
                        out[q] += v * basket.functions[q].evaluate(x, p, d);
                }
        }
    }
    double dv = f.cell_volume();
    for (auto& v : out) v *= dv;
    return out;
}

double l2_distance(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::int64_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s * a.grid().cell_volume());
}

}  // namespace

SemiclassicalResult run_semiclassical_study(const ExperimentSpec& spec,
                                            const std::string& outdir) {
    if (spec.hbar_ladder.size() < 3)
        throw ValidationError("semiclassical study needs an hbar ladder of >= 3 values");
    std::filesystem::create_directories(outdir);

    UniformGrid pg = build_grid(spec);
    const int d = pg.dim();
    if ((spec.study_case == "uniform_b" && d != 2) ||
        (spec.study_case != "uniform_b" && d != 1 && d != 2))
        throw ValidationError("study case incompatible with grid dimension");

    TestFunctionBasket basket = TestFunctionBasket::load(spec.basket_path);

    // sample times must be dt multiples
    for (double ts : spec.sample_times) {
        long k = std::lround(ts / spec.dt);
        if (std::abs(k * spec.dt - ts) > 1e-9)
            throw ValidationError("sample times must be multiples of solver.dt");
    }

    // Vlasov reference on the coarse grid
    std::vector<int> vn(d, spec.vlasov_nx);
    std::vector<double> vext(d, spec.grid_extent);
    UniformGrid vg(d, vn, vext, spec.budget_points);
    std::optional<RealField> bprof;
    std::vector<RealField> ashift;
    bool shifted = false;
    if (spec.study_case == "uniform_b") {
        bprof = RealField(vg, spec.b0);
        GaugeField vgauge = GaugeField::uniform_b_landau(vg, spec.b0);
        ashift = vgauge.a();
        shifted = true;
    }
    PhaseSpaceDensity f0 = PhaseSpaceDensity::gaussian_blob(
        vg, spec.vlasov_np, spec.vlasov_pmax, spec.blob_center_x, spec.blob_center_p,
        spec.blob_sigma_x, spec.blob_sigma_p, bprof);
    {
        double mass = f0.mass();
        for (auto& v : f0.values()) v /= mass;
    }

    double vcoupling = spec.study_case == "self_consistent" ? spec.coupling : 0.0;
    std::vector<std::vector<double>> vlasov_rows;   // pairings per sample time
    std::vector<VlasovMoments> vlasov_moment_rows;
    {
        PhaseSpaceDensity f = f0;
        double t = 0.0;
        for (double ts : spec.sample_times) {
            if (ts > t + 1e-12) {
                VlasovConfig vc;
                vc.dt = spec.vlasov_dt;
                vc.t_end = ts - t;
                vc.coupling = vcoupling;
                auto res = vlasov_poisson_propagate(f, vc);
                f = std::move(res.f);
                t = ts;
            }
            vlasov_rows.push_back(
                vlasov_pairings(f, basket, shifted ? &ashift : nullptr));
            vlasov_moment_rows.push_back(vlasov_moments(f));
        }
    }

    // Pauli ladder runs
    GaugeField gauge = spec.study_case == "uniform_b"
                           ? build_gauge(spec, pg)
                           : GaugeField::zero(pg);
    SolverConfig base;
    base.dt = spec.dt;
    base.nonlinearity = spec.study_case == "self_consistent" ? Nonlinearity::poisson
                                                             : Nonlinearity::none;
    base.poisson.coupling = spec.coupling;

    std::vector<std::string> cols = {"hbar", "t", "pairing_distance",
                                     "density_distance", "current_distance"};
    for (std::size_t q = 0; q < basket.functions.size(); ++q)
        cols.push_back("pairing_" + std::to_string(q));
    cols.push_back("config_hash_fnv64");
    CsvWriter csv(outdir + "/study.csv", cols);
    double hash_as_num = static_cast<double>(
        fnv1a64(spec.canonical.data(), spec.canonical.size()) >> 1);

    SemiclassicalResult out;
    auto emit = [&](const SemiclassicalRow& row) {
        std::vector<double> vals = {row.hbar, row.t, row.pairing_distance,
                                    row.density_distance, row.current_distance};
        vals.insert(vals.end(), row.pairings.begin(), row.pairings.end());
        vals.push_back(hash_as_num);
        csv.row(vals);
        out.rows.push_back(row);
    };

    // reference rows (hbar = 0)
    for (std::size_t q = 0; q < spec.sample_times.size(); ++q)
        emit({0.0, spec.sample_times[q], 0.0, 0.0, 0.0, vlasov_rows[q]});

    std::vector<std::vector<double>> dist_by_time(spec.sample_times.size());
    nlohmann::json lattice_info = nlohmann::json::array();
    for (double hb : spec.hbar_ladder) {
        ThermalBlobInfo info;
        MixedState state = build_thermal_blob(
            pg, hb, spec.blob_center_x, spec.blob_center_p, spec.blob_sigma_x,
            spec.blob_sigma_p, spec.weight_condition_max, spec.max_orbitals, &info);
        lattice_info.push_back({{"hbar", hb},
                                {"orbitals", info.orbitals},
                                {"weight_condition", info.weight_condition},
                                {"q", info.q},
                                {"sigma_x_eff", info.sigma_x_eff},
                                {"sigma_p_eff", info.sigma_p_eff}});

        MixedState st = state;
        double t = 0.0;
        for (std::size_t q = 0; q < spec.sample_times.size(); ++q) {
            double ts = spec.sample_times[q];
            if (ts > t + 1e-12) {
                SolverConfig cfg = base;
                cfg.t_end = ts - t;
                auto res = propagate(st, gauge, cfg);
                st = std::move(res.state);
                t = ts;
            }
            std::vector<double> pair = weak_pairings(st, basket);
            double dmax = 0.0;
            for (std::size_t i = 0; i < pair.size(); ++i)
                dmax = std::max(dmax, std::abs(pair[i] - vlasov_rows[q][i]));

            RealField rho_c = decimate(density(st), vg);
            double drho = l2_distance(rho_c, vlasov_moment_rows[q].density);
            auto jp = pauli_current(st, gauge, spec.spin_current_sign);
            double dj2 = 0.0;
            for (int a = 0; a < d; ++a) {
                RealField jc = decimate(jp[a], vg);
                double da = l2_distance(jc, vlasov_moment_rows[q].current[a]);
                dj2 += da * da;
            }
            emit({hb, ts, dmax, drho, std::sqrt(dj2), pair});
            dist_by_time[q].push_back(dmax);
        }
    }

    for (const auto& seq : dist_by_time)
        for (std::size_t i = 1; i < seq.size(); ++i)
            if (seq[i] > seq[i - 1] * (1.0 + 1e-9)) out.monotone = false;

    write_config_echo(spec, outdir);
    nlohmann::json verdict;
    verdict["monotone_pairing_distance"] = out.monotone;
    verdict["hbar_ladder"] = spec.hbar_ladder;
    verdict["snapped"] = spec.hbar_snapped;
    verdict["lattices"] = lattice_info;
    {
        std::ofstream vout(outdir + "/verdict.json");
        vout << verdict.dump(2) << "\n";
    }
    Manifest manifest(spec.hash);
    manifest.set_monitor("monotone_pairing_distance", out.monotone);
    manifest.add_file(outdir, "study.csv");
    manifest.add_file(outdir, "config.cfg");
    manifest.add_file(outdir, "verdict.json");
    manifest.write(outdir);
    return out;
}

MeanfieldResult run_meanfield_study(const ExperimentSpec& spec,
                                    const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    if (spec.grid_dim != 1)
        throw ValidationError("meanfield study runs on a 1d per-particle grid");
    UniformGrid g = build_grid(spec);

    auto spin = spin_amplitudes("up");
    SpinorField phi =
        SpinorField::gaussian(g, spec.center, spec.sigma, spec.wavevector, spin);
    std::vector<cdouble> orbital = phi.comp(0);

    NBodyConfig cfg(g);
    cfg.hbar = spec.hbar;
    cfg.dt = spec.dt;
    cfg.v_ext = cosine_well(g, spec.well_depth);
    if (spec.coupling != 0.0)
        cfg.kernel = InteractionKernel::softened_coulomb(-spec.coupling, spec.softening);

    std::vector<int> nlist = spec.n_list;
    std::sort(nlist.begin(), nlist.end());
    MeanfieldStudyResult res =
        meanfield_study(g, orbital, nlist, cfg, spec.sample_times);

    CsvWriter csv(outdir + "/meanfield.csv",
                  {"N", "t", "trace_distance", "coupling", "grid_n",
                   "config_hash_fnv64"});
    double hash_as_num = static_cast<double>(
        fnv1a64(spec.canonical.data(), spec.canonical.size()) >> 1);
    for (const auto& row : res.table)
        csv.row({static_cast<double>(row.particles), row.t, row.distance,
                 spec.coupling, static_cast<double>(spec.grid_n), hash_as_num});

    write_config_echo(spec, outdir);
    nlohmann::json verdict;
    verdict["monotone_in_n"] = res.monotone_in_n;
    {
        std::ofstream vout(outdir + "/verdict.json");
        vout << verdict.dump(2) << "\n";
    }
    Manifest manifest(spec.hash);
    manifest.set_monitor("monotone_in_n", res.monotone_in_n);
    manifest.add_file(outdir, "meanfield.csv");
    manifest.add_file(outdir, "config.cfg");
    manifest.add_file(outdir, "verdict.json");
    manifest.write(outdir);

    MeanfieldResult out;
    out.table = res.table;
    out.monotone = res.monotone_in_n;
    return out;
}

}  // namespace pauliflow
