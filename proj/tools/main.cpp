#include <CLI11.hpp>
#include <cstdio>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pauliflow/studies.hpp"

using namespace pauliflow;

namespace {

struct CommonOpts {
    std::string config;
    std::string out = "out";
    int threads = 0;
    long seed = std::numeric_limits<long>::min();
    int snap_stride = -1;
};

ExperimentSpec load_with_overrides(const CommonOpts& opts) {
    std::ifstream in(opts.config);
    if (!in) throw ValidationError("cannot open config " + opts.config);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (opts.seed != std::numeric_limits<long>::min())
        text += "\nseed = " + std::to_string(opts.seed) + "\n";
    if (opts.snap_stride >= 0)
        text += "\nsolver.snapshot_stride = " + std::to_string(opts.snap_stride) + "\n";
    return parse_config_text(text);
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config) {
    auto* c = cmd->add_option("--config", opts.config, "experiment config file");
    if (needs_config) c->required();
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--threads", opts.threads, "worker thread count");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--snap-stride", opts.snap_stride, "override snapshot stride");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pauliflow: mixed-state Pauli-Poisson simulation suite"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* cmd_run = app.add_subcommand("run", "run one configured solve");
    add_common(cmd_run, opts, true);
    auto* cmd_sc = app.add_subcommand("study-semiclassical",
                                      "hbar-ladder comparison against the Vlasov limit");
    add_common(cmd_sc, opts, true);
    auto* cmd_mf = app.add_subcommand("study-meanfield",
                                      "N-body trace-distance comparison against Hartree");
    add_common(cmd_mf, opts, true);
    auto* cmd_val = app.add_subcommand("validate", "validate and echo a config");
    add_common(cmd_val, opts, true);
    auto* cmd_info = app.add_subcommand("info", "build and defaults summary");
    add_common(cmd_info, opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_threads(opts.threads);
        if (cmd_info->parsed()) {
            ExperimentSpec dflt = parse_config_text("");
            std::printf("pauliflow 1.0\n");
            std::printf("fft backend: fftw3\n");
            std::printf("experiments: single_run semiclassical_study meanfield_study "
                        "poisswell_run\n");
            std::printf("default config:\n%s", dflt.canonical.c_str());
            return 0;
        }
        ExperimentSpec spec = load_with_overrides(opts);
        if (cmd_val->parsed()) {
            std::printf("%s", spec.canonical.c_str());
            std::printf("# config_hash_fnv64 = %s\n", spec.hash.c_str());
            return 0;
        }
        if (cmd_run->parsed()) {
            if (spec.experiment != "single_run" && spec.experiment != "poisswell_run")
                throw ValidationError("config experiment '" + spec.experiment +
                                      "' does not match the run verb");
            RunSummary s = run_single(spec, opts.out);
            std::printf("run complete: %zu reports, monitors %s\n", s.reports.size(),
                        s.monitors_passed ? "passed" : "FAILED");
            return s.monitors_passed ? 0 : 3;
        }
        if (cmd_sc->parsed()) {
            SemiclassicalResult r = run_semiclassical_study(spec, opts.out);
            std::printf("semiclassical study: %zu rows, pairing distance %s\n",
                        r.rows.size(),
                        r.monotone ? "non-increasing along the ladder"
                                   : "NOT monotone (failure)");
            return r.monotone ? 0 : 3;
        }
        if (cmd_mf->parsed()) {
            MeanfieldResult r = run_meanfield_study(spec, opts.out);
            std::printf("meanfield study: %zu rows, trace distance %s\n",
                        r.table.size(),
                        r.monotone ? "non-increasing in N" : "NOT monotone (failure)");
            return r.monotone ? 0 : 3;
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return 4;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
