#include "pauliflow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>

namespace pauliflow::fft {
namespace {

struct PlanKey {
    std::vector<int> dims;
    int axis;  // -1 for full-rank
    int sign;
    bool operator<(const PlanKey& o) const {
        if (dims != o.dims) return dims < o.dims;
        if (axis != o.axis) return axis < o.axis;
        return sign < o.sign;
    }
};

std::mutex g_mutex;
std::map<PlanKey, fftw_plan> g_plans;

std::int64_t total_size(const std::vector<int>& dims) {
    std::int64_t n = 1;
    for (int d : dims) n *= d;
    return n;
}

// Plans are created in-place on a scratch buffer with FFTW_UNALIGNED so they
// can be executed on any caller array via fftw_execute_dft.
fftw_plan get_plan(const std::vector<int>& dims, int axis, int sign) {
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanKey key{dims, axis, sign};
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;

    std::vector<cdouble> scratch(total_size(dims));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;

    if (axis < 0) {
        plan = fftw_plan_dft(static_cast<int>(dims.size()),
                             const_cast<int*>(dims.data()), buf, buf, sign, flags);
    } else {
        // Single-axis transform of a row-major array: one transform dim plus
        // two loop dims (outer block, inner stride).
        std::int64_t inner = 1;
        for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
        std::int64_t outer = 1;
        for (int a = 0; a < axis; ++a) outer *= dims[a];

        fftw_iodim64 tdim{dims[axis], inner, inner};
        fftw_iodim64 loops[2] = {{outer, dims[axis] * inner, dims[axis] * inner},
                                 {inner, 1, 1}};
        plan = fftw_plan_guru64_dft(1, &tdim, 2, loops, buf, buf, sign, flags);
    }
    if (!plan) throw NumericalError("fftw plan creation failed");
    g_plans.emplace(key, plan);
    return plan;
}

void execute(const std::vector<int>& dims, int axis, int sign, cdouble* data) {
    fftw_plan plan = get_plan(dims, axis, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(const std::vector<int>& dims, cdouble* data) {
    execute(dims, -1, FFTW_FORWARD, data);
}

void backward(const std::vector<int>& dims, cdouble* data) {
    execute(dims, -1, FFTW_BACKWARD, data);
    double scale = 1.0 / static_cast<double>(total_size(dims));
    std::int64_t n = total_size(dims);
    for (std::int64_t i = 0; i < n; ++i) data[i] *= scale;
}

void forward_axis(const std::vector<int>& dims, int axis, cdouble* data) {
    execute(dims, axis, FFTW_FORWARD, data);
}

void backward_axis(const std::vector<int>& dims, int axis, cdouble* data) {
    execute(dims, axis, FFTW_BACKWARD, data);
    double scale = 1.0 / dims[axis];
    std::int64_t n = total_size(dims);
    for (std::int64_t i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace pauliflow::fft
