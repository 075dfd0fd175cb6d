#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pauliflow/io.hpp"
#include "pauliflow/nbody.hpp"
#include "pauliflow/studies.hpp"
#include "pauliflow/wigner.hpp"

namespace py = pybind11;
using namespace pauliflow;

namespace {

std::vector<std::size_t> grid_shape(const UniformGrid& g) {
    std::vector<std::size_t> shape;
    for (int a = 0; a < g.dim(); ++a) shape.push_back(g.n(a));
    return shape;
}

py::array_t<double> real_field_array(const RealField& f) {
    py::array_t<double> out(grid_shape(f.grid()));
    std::memcpy(out.mutable_data(), f.values().data(),
                f.values().size() * sizeof(double));
    return out;
}

py::array_t<cdouble> spinor_array(const SpinorField& f) {
    std::vector<std::size_t> shape = grid_shape(f.grid());
    shape.insert(shape.begin(), 2);
    py::array_t<cdouble> out(shape);
    auto* dst = out.mutable_data();
    std::memcpy(dst, f.comp(0).data(), f.comp(0).size() * sizeof(cdouble));
    std::memcpy(dst + f.comp(0).size(), f.comp(1).data(),
                f.comp(1).size() * sizeof(cdouble));
    return out;
}

SpinorField spinor_from_array(const UniformGrid& g, py::array_t<cdouble> arr) {
    auto buf = arr.request();
    if (buf.size != 2 * g.size())
        throw ValidationError("spinor array must hold 2 x grid-size amplitudes");
    SpinorField f(g);
    const auto* src = static_cast<const cdouble*>(buf.ptr);
    std::copy(src, src + g.size(), f.comp(0).begin());
    std::copy(src + g.size(), src + 2 * g.size(), f.comp(1).begin());
    return f;
}

py::dict report_dict(const std::vector<StepReport>& reports) {
    py::list t, mass, etot, ekin, esg, eext, eself, iters;
    for (const auto& r : reports) {
        t.append(r.t);
        mass.append(r.mass);
        etot.append(r.energy.total());
        ekin.append(r.energy.kinetic);
        esg.append(r.energy.stern_gerlach);
        eext.append(r.energy.external);
        eself.append(r.energy.self);
        iters.append(r.sc_iterations);
    }
    py::dict d;
    d["t"] = t;
    d["mass"] = mass;
    d["E_total"] = etot;
    d["E_kin"] = ekin;
    d["E_sg"] = esg;
    d["E_ext"] = eext;
    d["E_self"] = eself;
    d["iterations"] = iters;
    return d;
}

}  // namespace

PYBIND11_MODULE(_pauliflow, m) {
    m.doc() = "mixed-state Pauli-Poisson simulation suite";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<NumericalError>(m, "NumericalError");
    py::register_exception<BudgetError>(m, "BudgetError");

    py::class_<UniformGrid>(m, "UniformGrid")
        .def(py::init<int, std::vector<int>, std::vector<double>, std::int64_t>(),
             py::arg("dim"), py::arg("points"), py::arg("extents"),
             py::arg("budget") = UniformGrid::kDefaultBudget)
        .def_property_readonly("dim", &UniformGrid::dim)
        .def("n", &UniformGrid::n)
        .def("extent", &UniformGrid::extent)
        .def("spacing", &UniformGrid::spacing)
        .def_property_readonly("size", &UniformGrid::size);

    py::class_<SpinorField>(m, "SpinorField")
        .def_static("gaussian", &SpinorField::gaussian, py::arg("grid"),
                    py::arg("center"), py::arg("sigma"), py::arg("wavevector"),
                    py::arg("spin"))
        .def_static("hermite", &SpinorField::hermite, py::arg("grid"),
                    py::arg("center"), py::arg("sigma"), py::arg("order"),
                    py::arg("spin"))
        .def_static("from_array", &spinor_from_array, py::arg("grid"), py::arg("array"))
        .def("array", &spinor_array)
        .def("norm", &SpinorField::norm);

    py::class_<MixedState>(m, "MixedState")
        .def(py::init<double, std::vector<double>, std::vector<SpinorField>>(),
             py::arg("hbar"), py::arg("weights"), py::arg("orbitals"))
        .def_static("pure", &MixedState::pure, py::arg("hbar"), py::arg("orbital"))
        .def_property_readonly("hbar", &MixedState::hbar)
        .def_property_readonly("num_orbitals", &MixedState::num_orbitals)
        .def("weight", &MixedState::weight)
        .def("orbital", &MixedState::orbital)
        .def("total_mass", &MixedState::total_mass)
        .def("weight_condition", &MixedState::weight_condition);

    py::class_<GaugeField>(m, "GaugeField")
        .def_static("zero", &GaugeField::zero)
        .def_static("uniform_b_landau", &GaugeField::uniform_b_landau, py::arg("grid"),
                    py::arg("b0"))
        .def_property_readonly("splitting_compatible", &GaugeField::splitting_compatible);

    m.def("density",
          [](const MixedState& st) { return real_field_array(density(st)); });
    m.def(
        "pauli_current",
        [](const MixedState& st, const GaugeField& gauge, int sign) {
            auto j = pauli_current(st, gauge, sign);
            py::list out;
            for (const auto& comp : j) out.append(real_field_array(comp));
            return out;
        },
        py::arg("state"), py::arg("gauge"), py::arg("spin_sign") = 1);
    m.def("energy", [](const MixedState& st, const GaugeField& gauge) {
        RealField vsc(st.grid());
        EnergyBreakdown e = energy(st, gauge, vsc);
        py::dict d;
        d["kinetic"] = e.kinetic;
        d["stern_gerlach"] = e.stern_gerlach;
        d["external"] = e.external;
        d["self"] = e.self;
        d["total"] = e.total();
        return d;
    });

    m.def(
        "propagate",
        [](const MixedState& st, const GaugeField& gauge, double dt, double t_end,
           const std::string& nonlinearity, double coupling, const std::string& scheme) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_end = t_end;
            cfg.scheme = scheme == "rk4_pseudospectral" ? Scheme::rk4_pseudospectral
                                                        : Scheme::strang_split;
            if (nonlinearity == "poisson") cfg.nonlinearity = Nonlinearity::poisson;
            cfg.poisson.coupling = coupling;
            auto res = propagate(st, gauge, cfg);
            py::dict out;
            out["reports"] = report_dict(res.reports);
            out["state"] = res.state;
            return out;
        },
        py::arg("state"), py::arg("gauge"), py::arg("dt"), py::arg("t_end"),
        py::arg("nonlinearity") = "none", py::arg("coupling") = 1.0,
        py::arg("scheme") = "strang_split");

    m.def("wigner_trace", [](const MixedState& st) {
        PhaseSpaceField f = wigner_trace_transform(st);
        const PhaseSpaceGrid& ps = f.grid();
        std::vector<std::size_t> shape;
        for (int a = 0; a < ps.xgrid().dim(); ++a) shape.push_back(ps.nx(a));
        for (int a = 0; a < ps.xgrid().dim(); ++a) shape.push_back(ps.nxi(a));
        py::array_t<double> arr(shape);
        std::memcpy(arr.mutable_data(), f.values().data(),
                    f.values().size() * sizeof(double));
        py::dict out;
        out["values"] = arr;
        py::list dxi, xs;
        for (int a = 0; a < ps.xgrid().dim(); ++a) dxi.append(ps.dxi(a));
        out["dxi"] = dxi;
        out["dx"] = ps.xfine().spacing(0);
        return out;
    });

    m.def("solve_poisson_periodic", [](const UniformGrid& g, py::array_t<double> rho) {
        auto buf = rho.request();
        if (buf.size != g.size()) throw ValidationError("rho size mismatch");
        std::vector<double> v(static_cast<const double*>(buf.ptr),
                              static_cast<const double*>(buf.ptr) + g.size());
        return real_field_array(solve_poisson_periodic(RealField(g, std::move(v))));
    });

    m.def(
        "meanfield_study",
        [](const UniformGrid& g, const SpinorField& orbital, std::vector<int> ns,
           double hbar, double dt, double coupling, double softening, double well_depth,
           std::vector<double> times) {
            NBodyConfig cfg(g);
            cfg.hbar = hbar;
            cfg.dt = dt;
            cfg.v_ext = RealField::sample(g, [&](const std::array<double, 3>& x) {
                return well_depth * (1.0 - std::cos(2.0 * PI * x[0] / g.extent(0)));
            });
            if (coupling != 0.0)
                cfg.kernel = InteractionKernel::softened_coulomb(-coupling, softening);
            auto res = meanfield_study(g, orbital.comp(0), ns, cfg, times);
            py::list rows;
            for (const auto& row : res.table) {
                py::dict d;
                d["N"] = row.particles;
                d["t"] = row.t;
                d["trace_distance"] = row.distance;
                rows.append(d);
            }
            py::dict out;
            out["table"] = rows;
            out["monotone_in_n"] = res.monotone_in_n;
            return out;
        },
        py::arg("grid"), py::arg("orbital"), py::arg("n_list"), py::arg("hbar"),
        py::arg("dt"), py::arg("coupling"), py::arg("softening"),
        py::arg("well_depth"), py::arg("sample_times"));

    m.def("parse_config", [](const std::string& text) {
        ExperimentSpec spec = parse_config_text(text);
        py::dict d;
        d["canonical"] = spec.canonical;
        d["hash"] = spec.hash;
        d["experiment"] = spec.experiment;
        return d;
    });
    m.def("run_single", [](const std::string& config_text, const std::string& outdir) {
        ExperimentSpec spec = parse_config_text(config_text);
        RunSummary s = run_single(spec, outdir);
        py::dict d;
        d["monitors_passed"] = s.monitors_passed;
        d["reports"] = report_dict(s.reports);
        return d;
    });

    m.attr("__version__") = "1.0";
}
