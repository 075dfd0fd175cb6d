#include "pauliflow/pairing.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pauliflow/fft.hpp"

namespace pauliflow {

namespace {

double hermite_poly(int n, double x) {
    double h0 = 1.0, h1 = x;
    if (n == 0) return h0;
    if (n == 1) return h1;
    for (int k = 2; k <= n; ++k) {
        double h2 = x * h1 - (k - 1) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

}  // namespace

double PhaseSpaceTestFunction::evaluate(const std::array<double, 3>& x,
                                        const std::array<double, 3>& p,
                                        int dim) const {
    double v = amplitude;
    for (int a = 0; a < dim; ++a) {
        double tx = (x[a] - center_x[a]) / sigma_x[a];
        double tp = (p[a] - center_p[a]) / sigma_p[a];
        v *= hermite_poly(order_x[a], tx) * std::exp(-0.5 * tx * tx);
        v *= hermite_poly(order_p[a], tp) * std::exp(-0.5 * tp * tp);
    }
    return v;
}

TestFunctionBasket TestFunctionBasket::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open test-function basket " + path);
    nlohmann::json j;
    in >> j;
    TestFunctionBasket basket;
    basket.version = j.value("version", "unversioned");
    for (const auto& f : j.at("functions")) {
        PhaseSpaceTestFunction t;
        t.amplitude = f.value("amplitude", 1.0);
        auto fill = [&](const char* key, auto& arr) {
            if (!f.contains(key)) return;
            auto v = f.at(key);
            for (std::size_t a = 0; a < v.size() && a < 3; ++a) arr[a] = v[a];
        };
        fill("center_x", t.center_x);
        fill("sigma_x", t.sigma_x);
        fill("order_x", t.order_x);
        fill("center_p", t.center_p);
        fill("sigma_p", t.sigma_p);
        fill("order_p", t.order_p);
        basket.functions.push_back(t);
    }
    if (basket.functions.empty())
        throw ValidationError("test-function basket is empty");
    return basket;
}

namespace {

struct SupportBin {
    std::int64_t flat;
    cdouble coeff;
    std::array<int, 3> m;  // DFT indices per axis
};

// Fourier coefficients of one spinor component on the physical wavenumber
// lattice: psi(x) = sum_k c_k e^{ikx}.
std::vector<cdouble> physical_spectrum(const UniformGrid& g,
                                       const std::vector<cdouble>& psi) {
    std::vector<cdouble> c = psi;
    fft::forward(g.dims(), c.data());
    // phase e^{ik L/2} per axis = (-1)^m, and 1/N normalization
    const int d = g.dim();
    double norm = 1.0 / static_cast<double>(g.size());
    std::array<int, 3> m{0, 0, 0};
    int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
    std::int64_t flat = 0;
    for (m[0] = 0; m[0] < n0; ++m[0])
        for (m[1] = 0; m[1] < n1; ++m[1])
            for (m[2] = 0; m[2] < n2; ++m[2]) {
                int s = m[0] + (d > 1 ? m[1] : 0) + (d > 2 ? m[2] : 0);
                c[flat] *= norm * ((s & 1) ? -1.0 : 1.0);
                ++flat;
            }
    return c;
}

// X_a(kappa) = int He_n((x-c)/s) e^{-(x-c)^2/(2s^2)} e^{i kappa x} dx
//            = s sqrt(2 pi) i^n (kappa s)^n e^{-kappa^2 s^2/2} e^{i kappa c}.
cdouble xprofile_transform(double kappa, double c, double s, int n) {
    cdouble in = std::pow(cdouble{0.0, 1.0}, n);
    return s * std::sqrt(2.0 * PI) * in * std::pow(kappa * s, n) *
           std::exp(-0.5 * kappa * kappa * s * s) *
           std::exp(cdouble{0.0, kappa * c});
}

}  // namespace

std::vector<double> weak_pairings(const MixedState& state,
                                  const TestFunctionBasket& basket) {
    const UniformGrid& g = state.grid();
    const int d = g.dim();
    const double hbar = state.hbar();

    // Per-orbital momentum support (both spin components share a list per
    // component to keep the pair loop tight).
    struct OrbitalSpectrum {
        double weight;
        std::array<std::vector<SupportBin>, 2> comp;
    };
    std::vector<OrbitalSpectrum> spectra;
    for (int j = 0; j < state.num_orbitals(); ++j) {
        OrbitalSpectrum os;
        os.weight = state.weight(j);
        for (int c = 0; c < 2; ++c) {
            std::vector<cdouble> spec = physical_spectrum(g, state.orbital(j).comp(c));
            double peak = 0.0;
            for (const auto& z : spec) peak = std::max(peak, std::abs(z));
            double cut = 1e-14 * peak;
            std::array<int, 3> m{0, 0, 0};
            int n0 = g.n(0), n1 = d > 1 ? g.n(1) : 1, n2 = d > 2 ? g.n(2) : 1;
            std::int64_t flat = 0;
            for (m[0] = 0; m[0] < n0; ++m[0])
                for (m[1] = 0; m[1] < n1; ++m[1])
                    for (m[2] = 0; m[2] < n2; ++m[2]) {
                        if (std::abs(spec[flat]) > cut)
                            os.comp[c].push_back({flat, spec[flat], m});
                        ++flat;
                    }
        }
        spectra.push_back(std::move(os));
    }

    auto signed_idx = [&](int axis, int m) {
        return (m <= g.n(axis) / 2 - 1) ? m : m - g.n(axis);
    };

    std::vector<double> out;
    for (const auto& phi : basket.functions) {
        // per-axis tables over index differences and sums
        std::array<std::vector<cdouble>, 3> xtab;
        std::array<std::vector<double>, 3> gtab;
        for (int a = 0; a < d; ++a) {
            int n = g.n(a);
            double dk = 2.0 * PI / g.extent(a);
            xtab[a].resize(4 * n + 1);
            gtab[a].resize(4 * n + 1);
            for (int q = -2 * n; q <= 2 * n; ++q) {
                xtab[a][q + 2 * n] = xprofile_transform(
                    q * dk, phi.center_x[a], phi.sigma_x[a], phi.order_x[a]);
                double p = 0.5 * hbar * q * dk;
                double tp = (p - phi.center_p[a]) / phi.sigma_p[a];
                gtab[a][q + 2 * n] =
                    hermite_poly(phi.order_p[a], tp) * std::exp(-0.5 * tp * tp);
            }
        }

        // x-profile transforms decay like e^{-kappa^2 s^2/2}; pairs beyond
        // the per-axis cut contribute below roundoff and are skipped by
        // bucketing on the leading-axis index difference.
        std::array<int, 3> qcut{0, 0, 0};
        for (int a = 0; a < d; ++a) {
            double dk = 2.0 * PI / g.extent(a);
            qcut[a] = static_cast<int>(
                std::ceil((9.0 + 2.0 * phi.order_x[a]) / (phi.sigma_x[a] * dk)));
        }

        double total = 0.0;
        for (const auto& os : spectra) {
            cdouble acc{0.0, 0.0};
            for (int c = 0; c < 2; ++c) {
                const auto& bins = os.comp[c];
                const int n0 = g.n(0);
                std::vector<std::vector<const SupportBin*>> groups(n0);
                for (const auto& b : bins)
                    groups[signed_idx(0, b.m[0]) + n0 / 2].push_back(&b);

                for (const auto& b1 : bins) {
                    int s0 = signed_idx(0, b1.m[0]);
                    int lo = std::max(-n0 / 2, s0 - qcut[0]);
                    int hi = std::min(n0 / 2 - 1, s0 + qcut[0]);
                    for (int s0p = lo; s0p <= hi; ++s0p) {
                        for (const SupportBin* b2 : groups[s0p + n0 / 2]) {
                            bool skip = false;
                            for (int a = 1; a < d; ++a) {
                                if (std::abs(signed_idx(a, b1.m[a]) -
                                             signed_idx(a, b2->m[a])) > qcut[a]) {
                                    skip = true;
                                    break;
                                }
                            }
                            if (skip) continue;
                            cdouble term = b1.coeff * std::conj(b2->coeff);
                            for (int a = 0; a < d && !skip; ++a) {
                                int s1 = signed_idx(a, b1.m[a]);
                                int s2 = signed_idx(a, b2->m[a]);
                                cdouble xv = xtab[a][(s1 - s2) + 2 * g.n(a)];
                                double gv = gtab[a][(s1 + s2) + 2 * g.n(a)];
                                term *= xv * gv;
                            }
                            acc += term;
                        }
                    }
                }
            }
            total += os.weight * acc.real();
        }
        out.push_back(phi.amplitude * total);
    }
    return out;
}

}  // namespace pauliflow
