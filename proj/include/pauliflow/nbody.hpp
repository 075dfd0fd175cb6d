#pragma once

#include <Eigen/Dense>

#include "pauliflow/kernels.hpp"
#include "pauliflow/mixed_state.hpp"

namespace pauliflow {

// N-body wavefunction on the tensor grid of a 1d per-particle grid,
// optionally with 2^N spin amplitudes (spin fastest). The Hamiltonian is
// spin-independent in 1d, so spin blocks propagate identically.
class NBodyWavefunction {
  public:
    static constexpr std::int64_t kDefaultBudget = 270000000;  // amplitudes

    NBodyWavefunction(UniformGrid grid1d, int particles, bool spin,
                      std::int64_t budget = kDefaultBudget);

    const UniformGrid& grid() const { return grid_; }
    int particles() const { return n_; }
    bool has_spin() const { return spin_; }
    int spin_configs() const { return spin_ ? (1 << n_) : 1; }
    std::int64_t size() const { return static_cast<std::int64_t>(amps_.size()); }
    std::vector<cdouble>& values() { return amps_; }
    const std::vector<cdouble>& values() const { return amps_; }

    double norm() const;
    void normalize();
    // max_{j<k} ||psi + P_jk psi|| over all transpositions
    double antisymmetry_defect() const;
    double symmetry_defect() const;  // analogous with psi - P psi

    // product state of one orbital (bosonic Hartree ansatz)
    static NBodyWavefunction hartree_product(const UniformGrid& g, int particles,
                                             const std::vector<cdouble>& orbital,
                                             std::int64_t budget = kDefaultBudget);
    // Slater determinant of orthonormal spatial orbitals (spinless) or
    // spinor orbitals (spinful); duplicated orbitals are rejected.
    static NBodyWavefunction slater(const UniformGrid& g,
                                    const std::vector<std::vector<cdouble>>& orbitals,
                                    std::int64_t budget = kDefaultBudget);
    static NBodyWavefunction slater_spinor(const UniformGrid& g,
                                           const std::vector<SpinorField>& orbitals,
                                           std::int64_t budget = kDefaultBudget);

  private:
    UniformGrid grid_;
    int n_;
    bool spin_;
    std::vector<cdouble> amps_;
};

struct NBodyConfig {
    double hbar = 1.0;
    double dt = 1e-3;
    std::optional<InteractionKernel> kernel;  // pair interaction, 1/N scaled
    RealField v_ext;                          // external potential on the 1d grid

    explicit NBodyConfig(const UniformGrid& g) : v_ext(g) {}
};

// Strang stepper for i hbar dPsi/dt = H_N Psi with
// H_N = sum_a [-hbar^2/2 d^2/dx_a^2 + V_ext(x_a)] + (1/N) sum_{a<b} W(x_a - x_b);
// the diagonal and kinetic phase tables are built once.
class NBodyPropagator {
  public:
    NBodyPropagator(const NBodyWavefunction& shape, const NBodyConfig& cfg);
    void step(NBodyWavefunction& psi) const;

  private:
    std::vector<int> dims_;
    int particles_;
    std::vector<cdouble> half_phase_;
    std::vector<cdouble> kinetic_phase_;
};

void nbody_step(NBodyWavefunction& psi, const NBodyConfig& cfg);

// k-particle reduced density matrix (k = 1 or 2), unit trace; entries are
// the dimensionless operator h^k rho(x, x').
struct ReducedDensityMatrix {
    int k = 1;
    Eigen::MatrixXcd m;  // unit trace

    double min_eigenvalue() const;
};

ReducedDensityMatrix reduced_density_matrix(const NBodyWavefunction& psi, int k);

// 1/2 sum |eig(rho1 - rho2)|; dimensions capped at 4096.
double trace_distance(const ReducedDensityMatrix& a, const ReducedDensityMatrix& b);
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct MeanfieldSample {
    int particles;
    double t;
    double distance;
};

struct MeanfieldStudyResult {
    std::vector<MeanfieldSample> table;
    bool monotone_in_n = true;  // distance non-increasing in N at each time
};

// Propagates the N-body problem for each N in n_list from the factorized
// initial datum and compares the one-particle marginal against the Hartree
// reference solved with the same kernel and 1/N-consistent coupling.
MeanfieldStudyResult meanfield_study(const UniformGrid& g,
                                     const std::vector<cdouble>& orbital,
                                     const std::vector<int>& n_list,
                                     const NBodyConfig& cfg,
                                     const std::vector<double>& sample_times);

}  // namespace pauliflow
