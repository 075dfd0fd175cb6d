#include "pauliflow/poisswell.hpp"

#include <cmath>

#include "pauliflow/observables.hpp"
#include "pauliflow/poisson.hpp"

namespace pauliflow {

namespace {

double vector_l2(const std::vector<RealField>& v) {
    double s = 0.0;
    for (const auto& f : v) {
        double n = f.l2_norm();
        s += n * n;
    }
    return std::sqrt(s);
}

}  // namespace

PoisswellResult poisswell_update(const MixedState& state, const GaugeField& gauge_prev,
                                 const PoisswellOptions& opt) {
    const UniformGrid& g = state.grid();
    require_same_grid(g, gauge_prev.grid(), "poisswell");
    if (g.dim() < 2)
        throw ValidationError("poisswell update requires dim >= 2");

    std::vector<RealField> a_cur = gauge_prev.a();
    if (a_cur.empty())
        for (int j = 0; j < g.dim(); ++j) a_cur.emplace_back(g);

    std::vector<double> history;
    for (int it = 1; it <= opt.max_iter; ++it) {
        GaugeField gauge_k(g, a_cur, gauge_prev.v_ext());
        auto j = pauli_current(state, gauge_k, opt.spin_sign);

        // Delta A = -J/c with c=1, solved per component with zero mean.
        std::vector<RealField> a_next;
        for (int comp = 0; comp < g.dim(); ++comp)
            a_next.push_back(solve_poisson_periodic(j[comp]));

        double diff2 = 0.0;
        for (int comp = 0; comp < g.dim(); ++comp) {
            RealField d(g);
            for (std::int64_t i = 0; i < g.size(); ++i) {
                double mixed = (1.0 - opt.damping) * a_cur[comp][i] +
                               opt.damping * a_next[comp][i];
                d[i] = mixed - a_cur[comp][i];
                a_next[comp][i] = mixed;
            }
            double n = d.l2_norm();
            diff2 += n * n;
        }
        double diff = std::sqrt(diff2);
        double scale = vector_l2(a_cur);
        history.push_back(diff);
        a_cur = std::move(a_next);

        // noise floor: a current at roundoff level sources only a roundoff A
        double floor_ = 1e-12 * std::max(1.0, vector_l2(j));
        if (diff <= std::max(opt.tol * scale, floor_)) {
            PoisswellResult res{GaugeField(g, a_cur, gauge_prev.v_ext()), it, diff,
                                std::move(history)};
            return res;
        }
    }
    throw NumericalError("poisswell fixed point did not converge after " +
                         std::to_string(opt.max_iter) +
                         " iterations, last residual " +
                         std::to_string(history.back()));
}

}  // namespace pauliflow
