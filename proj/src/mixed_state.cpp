#include "pauliflow/mixed_state.hpp"

#include <cmath>

namespace pauliflow {

MixedState::MixedState(double hbar, std::vector<double> weights,
                       std::vector<SpinorField> orbitals)
    : hbar_(hbar), weights_(std::move(weights)), orbitals_(std::move(orbitals)) {
    if (!(hbar_ > 0.0) || hbar_ > 1.0)
        throw ValidationError("hbar must lie in (0, 1]");
    if (weights_.empty() || weights_.size() != orbitals_.size())
        throw ValidationError("weights and orbitals must match and be nonempty");

    double wsum = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw ValidationError("occupation weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw ValidationError("occupation weights must sum to 1 within 1e-12");

    const UniformGrid& g = orbitals_.front().grid();
    for (const auto& orb : orbitals_) {
        require_same_grid(g, orb.grid(), "mixed state orbitals");
        orb.check_finite("mixed state orbital");
        if (std::abs(orb.norm() - 1.0) > 1e-10)
            throw ValidationError("orbital norms must be 1 within 1e-10");
    }
    for (std::size_t j = 0; j < orbitals_.size(); ++j)
        for (std::size_t k = j + 1; k < orbitals_.size(); ++k)
            if (std::abs(orbitals_[j].inner(orbitals_[k])) > 1e-8)
                throw ValidationError("orbitals must be pairwise orthogonal within 1e-8");
}

MixedState MixedState::scaled(double hbar, std::vector<double> weights,
                              std::vector<SpinorField> orbitals, double c_bound) {
    MixedState s(hbar, std::move(weights), std::move(orbitals));
    if (s.weight_condition() > c_bound)
        throw ValidationError("hbar-scaled state violates the weight condition");
    return s;
}

MixedState MixedState::pure(double hbar, SpinorField orbital) {
    std::vector<SpinorField> orbs;
    orbs.push_back(std::move(orbital));
    return MixedState(hbar, {1.0}, std::move(orbs));
}

MixedState MixedState::from_propagation(double hbar, std::vector<double> weights,
                                        std::vector<SpinorField> orbitals) {
    MixedState s;
    s.hbar_ = hbar;
    s.weights_ = std::move(weights);
    s.orbitals_ = std::move(orbitals);
    return s;
}

double MixedState::total_mass() const {
    double m = 0.0;
    for (std::size_t j = 0; j < orbitals_.size(); ++j) {
        double n = orbitals_[j].norm();
        m += weights_[j] * n * n;
    }
    return m;
}

double MixedState::weight_condition() const {
    double s2 = 0.0;
    for (double w : weights_) s2 += w * w;
    return s2 * std::pow(hbar_, -grid().dim());
}

}  // namespace pauliflow
