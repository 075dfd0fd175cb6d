#pragma once

#include "pauliflow/config.hpp"
#include "pauliflow/nbody.hpp"
#include "pauliflow/pairing.hpp"
#include "pauliflow/propagator.hpp"
#include "pauliflow/vlasov.hpp"

namespace pauliflow {

// Builders shared by the CLI and the studies.
UniformGrid build_grid(const ExperimentSpec& spec);
GaugeField build_gauge(const ExperimentSpec& spec, const UniformGrid& g);
MixedState build_state(const ExperimentSpec& spec, const UniformGrid& g);
SolverConfig build_solver_config(const ExperimentSpec& spec);

// Displaced thermal oscillator mixture targeting the phase-space blob
// (centers x0/p0, stds sigma_x/sigma_p): geometric weights q^n over the
// matched Hermite ladder give an exactly Gaussian Wigner function with
// sum lambda^2 = hbar/(2 sigma_x sigma_p), so the weight condition holds by
// construction. Targets sharper than the uncertainty floor are clamped to
// the closest admissible widths (the gap closes as hbar -> 0).
struct ThermalBlobInfo {
    int orbitals = 0;
    double weight_condition = 0.0;
    double q = 0.0;               // geometric ratio (0 = pure coherent state)
    double sigma_x_eff = 0.0;     // realized widths after the uncertainty clamp
    double sigma_p_eff = 0.0;
};
MixedState build_thermal_blob(const UniformGrid& g, double hbar,
                              const std::array<double, 3>& x0,
                              const std::array<double, 3>& p0, double sigma_x,
                              double sigma_p, double c_max, int max_orbitals,
                              ThermalBlobInfo* info = nullptr);

struct RunSummary {
    std::vector<StepReport> reports;
    bool monitors_passed = true;
};

// One configured solve: StepReport CSV stream, optional snapshots, config
// echo and manifest with file hashes. Exit code 0 iff monitors passed.
RunSummary run_single(const ExperimentSpec& spec, const std::string& outdir);

struct SemiclassicalRow {
    double hbar;  // 0 marks the Vlasov reference row
    double t;
    double pairing_distance;   // max_i |<F,phi_i> - <f_V,phi_i>|
    double density_distance;   // L2 over the vlasov grid
    double current_distance;
    std::vector<double> pairings;
};

struct SemiclassicalResult {
    std::vector<SemiclassicalRow> rows;
    bool monotone = true;  // pairing distance non-increasing along the ladder
};

SemiclassicalResult run_semiclassical_study(const ExperimentSpec& spec,
                                            const std::string& outdir);

struct MeanfieldResult {
    std::vector<MeanfieldSample> table;
    bool monotone = true;
};

MeanfieldResult run_meanfield_study(const ExperimentSpec& spec,
                                    const std::string& outdir);

}  // namespace pauliflow
