#include "pauliflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pauliflow/grid.hpp"
#include "pauliflow/io.hpp"
#include "pauliflow/wigner.hpp"

namespace pauliflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Typed view over the raw key/value map that records every consumed key and
// aggregates problems.
class Reader {
  public:
    explicit Reader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string word(const std::string& key, const std::string& dflt,
                     const std::set<std::string>& allowed) {
        std::string v = raw(key, dflt);
        if (!allowed.count(v))
            fail(key + " must be one of a known set, got '" + v + "'");
        return v;
    }
    std::string text(const std::string& key, const std::string& dflt) {
        return raw(key, dflt);
    }
    double number(const std::string& key, double dflt) {
        std::string v = raw(key, fmt(dflt));
        try {
            return std::stod(v);
        } catch (...) {
            fail(key + " is not a number: '" + v + "'");
            return dflt;
        }
    }
    long integer(const std::string& key, long dflt) {
        std::string v = raw(key, std::to_string(dflt));
        try {
            return std::stol(v);
        } catch (...) {
            fail(key + " is not an integer: '" + v + "'");
            return dflt;
        }
    }
    bool boolean(const std::string& key, bool dflt) {
        std::string v = raw(key, dflt ? "true" : "false");
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        fail(key + " must be true/false");
        return dflt;
    }
    std::vector<double> numbers(const std::string& key,
                                const std::vector<double>& dflt) {
        std::string d;
        for (std::size_t i = 0; i < dflt.size(); ++i)
            d += (i ? " " : "") + fmt(dflt[i]);
        std::string v = raw(key, d);
        std::vector<double> out;
        std::istringstream in(v);
        double x;
        while (in >> x) out.push_back(x);
        if (out.empty()) fail(key + " must hold at least one number");
        return out;
    }
    std::array<double, 3> vec3(const std::string& key,
                               const std::array<double, 3>& dflt) {
        auto v = numbers(key, {dflt[0], dflt[1], dflt[2]});
        std::array<double, 3> out{0, 0, 0};
        for (std::size_t i = 0; i < v.size() && i < 3; ++i) out[i] = v[i];
        return out;
    }

    void fail(const std::string& msg) { errors_.push_back(msg); }
    void override_value(const std::string& key, const std::string& value) {
        consumed_[key] = value;
    }

    void finish() {
        for (const auto& [k, v] : kv_)
            if (!consumed_.count(k)) errors_.push_back("unknown key '" + k + "'");
        if (!errors_.empty()) {
            std::string all = "config validation failed:";
            for (const auto& e : errors_) all += "\n  - " + e;
            throw ValidationError(all);
        }
    }

    std::string echo() const {
        std::string out;
        for (const auto& [k, v] : consumed_) out += k + " = " + v + "\n";
        return out;
    }

  private:
    std::string raw(const std::string& key, const std::string& dflt) {
        auto it = kv_.find(key);
        std::string v = (it == kv_.end()) ? dflt : it->second;
        consumed_[key] = v;
        return v;
    }

    std::map<std::string, std::string> kv_;
    std::map<std::string, std::string> consumed_;  // sorted: canonical order
    std::vector<std::string> errors_;
};

}  // namespace

ExperimentSpec parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> parse_errors;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            parse_errors.push_back("line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
            continue;
        }
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) {
            parse_errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        kv[key] = val;
    }
    if (!parse_errors.empty()) {
        std::string all = "config parse failed:";
        for (const auto& e : parse_errors) all += "\n  - " + e;
        throw ValidationError(all);
    }

    Reader r(std::move(kv));
    ExperimentSpec s;

    long version = r.integer("config_version", 1);
    if (version != 1) r.fail("config_version must be 1");

    s.experiment = r.word("experiment", "single_run",
                          {"single_run", "semiclassical_study", "meanfield_study",
                           "poisswell_run"});
    s.seed = r.integer("seed", 0);

    s.grid_dim = static_cast<int>(r.integer("grid.dim", s.grid_dim));
    s.grid_n = static_cast<int>(r.integer("grid.n", s.grid_n));
    s.grid_extent = r.number("grid.extent", s.grid_extent);

    s.state_kind = r.word("state.kind", "gaussian",
                          {"gaussian", "hermite_ladder", "thermal_blob", "cosine_ground"});
    s.hbar = r.number("state.hbar", s.hbar);
    s.sigma = r.number("state.sigma", s.sigma);
    s.center = r.vec3("state.center", s.center);
    s.wavevector = r.vec3("state.wavevector", s.wavevector);
    s.spin = r.word("state.spin", "up", {"up", "down", "x", "unpolarized"});
    s.orbitals = static_cast<int>(r.integer("state.orbitals", s.orbitals));
    s.weight_condition_max = r.number("state.weight_condition_max", s.weight_condition_max);

    s.gauge_preset = r.word("gauge.preset", "zero", {"zero", "uniform_b_landau"});
    s.b0 = r.number("gauge.b0", s.b0);
    s.well_depth = r.number("potential.well_depth", s.well_depth);

    s.scheme = r.word("solver.scheme", "strang_split",
                      {"strang_split", "rk4_pseudospectral"});
    s.dt = r.number("solver.dt", s.dt);
    s.t_end = r.number("solver.t_end", s.t_end);
    s.nonlinearity = r.word("solver.nonlinearity", "none",
                            {"none", "poisson", "hartree", "poisson_plus_xalpha"});
    s.coupling = r.number("solver.coupling", s.coupling);
    s.softening = r.number("solver.softening", s.softening);
    s.xalpha = r.number("solver.xalpha", s.xalpha);
    s.poisswell = r.boolean("solver.poisswell", s.poisswell);
    s.poisswell_tol = r.number("solver.poisswell_tol", s.poisswell_tol);
    s.poisswell_max_iter =
        static_cast<int>(r.integer("solver.poisswell_max_iter", s.poisswell_max_iter));
    s.poisswell_damping = r.number("solver.poisswell_damping", s.poisswell_damping);
    s.spin_current_sign =
        static_cast<int>(r.integer("solver.spin_current_sign", s.spin_current_sign));
    s.snapshot_stride =
        static_cast<int>(r.integer("solver.snapshot_stride", s.snapshot_stride));

    {
        std::vector<double> dflt = s.hbar_ladder.empty()
                                       ? std::vector<double>{0.5, 0.25, 0.125}
                                       : s.hbar_ladder;
        s.hbar_ladder = r.numbers("study.hbar_ladder", dflt);
    }
    {
        auto nl = r.numbers("study.n_list", {2, 3, 4});
        s.n_list.clear();
        for (double v : nl) s.n_list.push_back(static_cast<int>(std::lround(v)));
    }
    s.sample_times = r.numbers("study.sample_times", s.sample_times);
    s.study_case = r.word("study.case", "self_consistent",
                          {"free", "uniform_b", "self_consistent"});
    s.p_band = r.number("study.p_band", s.p_band);
    s.vlasov_nx = static_cast<int>(r.integer("study.vlasov_nx", s.vlasov_nx));
    s.vlasov_np = static_cast<int>(r.integer("study.vlasov_np", s.vlasov_np));
    s.vlasov_pmax = r.number("study.vlasov_pmax", s.vlasov_pmax);
    s.vlasov_dt = r.number("study.vlasov_dt", s.vlasov_dt);
    s.blob_sigma_x = r.number("study.sigma_x", s.blob_sigma_x);
    s.blob_sigma_p = r.number("study.sigma_p", s.blob_sigma_p);
    s.blob_center_x = r.vec3("study.center_x", s.blob_center_x);
    s.blob_center_p = r.vec3("study.center_p", s.blob_center_p);
    s.max_orbitals = static_cast<int>(r.integer("study.max_orbitals", s.max_orbitals));

    s.budget_points = r.integer("budget.max_points", s.budget_points);
    s.budget_amplitudes = r.integer("budget.max_amplitudes", s.budget_amplitudes);
    s.basket_path = r.text("study.basket", "data/weak_basket_v1.json");

    // structural validation
    if (!(s.dt > 0.0)) r.fail("solver.dt must be positive");
    if (!(s.t_end > 0.0)) r.fail("solver.t_end must be positive");
    if (!(s.hbar > 0.0 && s.hbar <= 1.0)) r.fail("state.hbar must lie in (0,1]");
    if (s.orbitals < 1) r.fail("state.orbitals must be >= 1");
    if (s.spin_current_sign != 1 && s.spin_current_sign != -1)
        r.fail("solver.spin_current_sign must be +1 or -1");
    if (s.gauge_preset == "uniform_b_landau" && s.grid_dim < 2)
        r.fail("uniform_b_landau requires grid.dim >= 2");

    // grid and budget checks (construction enforces power-of-two and budget)
    try {
        std::vector<int> n(s.grid_dim, s.grid_n);
        std::vector<double> ext(s.grid_dim, s.grid_extent);
        UniformGrid probe(s.grid_dim, n, ext, s.budget_points);
        (void)probe;
    } catch (const BudgetError&) {
        throw;  // budget problems keep their own exit code
    } catch (const std::exception& e) {
        r.fail(e.what());
    }

    // hbar ladder: strictly decreasing, snapped to the band-coverage bound
    for (std::size_t i = 1; i < s.hbar_ladder.size(); ++i)
        if (!(s.hbar_ladder[i] < s.hbar_ladder[i - 1]))
            r.fail("study.hbar_ladder must be strictly decreasing");
    if (s.experiment == "semiclassical_study") {
        try {
            std::vector<int> n(s.grid_dim, s.grid_n);
            std::vector<double> ext(s.grid_dim, s.grid_extent);
            UniformGrid probe(s.grid_dim, n, ext, s.budget_points);
            std::string snapped_list;
            for (auto& hb : s.hbar_ladder) {
                bool snapped = false;
                hb = PhaseSpaceGrid::snap_hbar(probe, hb, s.p_band, &snapped);
                s.hbar_snapped = s.hbar_snapped || snapped;
                snapped_list += (snapped_list.empty() ? "" : " ") + fmt(hb);
            }
            r.override_value("study.hbar_ladder", snapped_list);
            for (std::size_t i = 1; i < s.hbar_ladder.size(); ++i)
                if (!(s.hbar_ladder[i] < s.hbar_ladder[i - 1]))
                    r.fail("hbar ladder collapsed after snapping; refine the grid or "
                           "reduce study.p_band");
        } catch (const ValidationError&) {
            // grid errors already recorded
        }
    }
    for (int nv : s.n_list)
        if (nv < 2 || nv > 4) r.fail("study.n_list entries must lie in {2,3,4}");
    for (double ts : s.sample_times)
        if (!(ts >= 0.0)) r.fail("study.sample_times must be nonnegative");
    if (s.nonlinearity == "hartree" && s.grid_dim < 3 && !(s.softening > 0.0))
        r.fail("softened kernel requires solver.softening > 0 below 3d");

    if (s.experiment == "poisswell_run") s.poisswell = true;

    r.finish();
    s.canonical = r.echo();
    s.hash = fnv1a64_hex(s.canonical);
    return s;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string serialize_config(const ExperimentSpec& spec) { return spec.canonical; }

}  // namespace pauliflow
