#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pauliflow/common.hpp"

namespace pauliflow {

// Experiment description parsed from the key = value config format.
// validate() materializes every default, snaps hbar values to the
// momentum-band coverage bound, and produces a canonical echo whose FNV-1a
// hash stamps every output row.
struct ExperimentSpec {
    std::string experiment = "single_run";
    long seed = 0;

    int grid_dim = 1;
    int grid_n = 256;
    double grid_extent = 20.0;

    std::string state_kind = "gaussian";  // gaussian, hermite_ladder or thermal_blob
    double hbar = 0.5;
    double sigma = 1.0;
    std::array<double, 3> center{0, 0, 0};
    std::array<double, 3> wavevector{0, 0, 0};
    std::string spin = "up";  // up | down | x
    int orbitals = 1;
    double weight_condition_max = 8.0;

    std::string gauge_preset = "zero";  // zero | uniform_b_landau
    double b0 = 1.0;
    double well_depth = 0.0;  // cosine-well external potential

    std::string scheme = "strang_split";
    double dt = 1e-3;
    double t_end = 1.0;
    std::string nonlinearity = "none";
    double coupling = 1.0;
    double softening = 0.5;
    double xalpha = 0.0;
    bool poisswell = false;
    double poisswell_tol = 1e-8;
    int poisswell_max_iter = 50;
    double poisswell_damping = 1.0;
    int spin_current_sign = 1;
    int snapshot_stride = 0;

    std::vector<double> hbar_ladder;
    std::vector<int> n_list{2, 3, 4};
    std::vector<double> sample_times{0.25, 0.5, 1.0};
    std::string study_case = "self_consistent";  // free | uniform_b | self_consistent
    double p_band = 2.5;
    int vlasov_nx = 256;
    int vlasov_np = 256;
    double vlasov_pmax = 4.0;
    double vlasov_dt = 5e-3;
    double blob_sigma_x = 0.8;
    double blob_sigma_p = 0.7;
    std::array<double, 3> blob_center_x{0, 0, 0};
    std::array<double, 3> blob_center_p{1.0, 0, 0};
    int max_orbitals = 64;

    std::int64_t budget_points = 1 << 28;
    std::int64_t budget_amplitudes = 270000000;
    std::string basket_path = "data/weak_basket_v1.json";

    bool hbar_snapped = false;  // set when validation clamped ladder values

    std::string canonical;  // normalized echo (serialize round-trips exactly)
    std::string hash;       // fnv1a64 of the canonical echo
};

// Parses and validates; throws ValidationError with all problems joined.
ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec load_config(const std::string& path);

// The canonical echo of a validated spec (identical to spec.canonical).
std::string serialize_config(const ExperimentSpec& spec);

}  // namespace pauliflow
