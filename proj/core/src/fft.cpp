#include "ddisac/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace ddisac::fft {

namespace {

// fftw_plan_* is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

using PlanKey = std::tuple<int, int, int, int, bool>;

fftw_plan make_plan(int n, int count, int stride, int dist, bool forward) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // Dummy buffer only used at planning time; FFTW_UNALIGNED + FFTW_ESTIMATE
    // keeps the plan valid for any caller array and bit-reproducible.
    const std::size_t total = static_cast<std::size_t>(dist) * (count - 1) +
                              static_cast<std::size_t>(stride) * (n - 1) + 1;
    fftw_complex* buf = fftw_alloc_complex(total);
    if (!buf) throw std::bad_alloc();
    fftw_plan p = fftw_plan_many_dft(1, &n, count,
                                     buf, nullptr, stride, dist,
                                     buf, nullptr, stride, dist,
                                     forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw_plan_many_dft failed");
    return p;
}

struct ThreadPlanCache {
    std::map<PlanKey, fftw_plan> plans;

    ~ThreadPlanCache() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int count, int stride, int dist, bool forward) {
        const PlanKey key{n, count, stride, dist, forward};
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        fftw_plan p = make_plan(n, count, stride, dist, forward);
        plans.emplace(key, p);
        return p;
    }
};

}  // namespace

void transform_many(cplx* data, int n, int count, int stride, int dist, bool forward) {
    if (n <= 0 || count <= 0) throw std::invalid_argument("fft: empty transform");
    if (n == 1) return;
    thread_local ThreadPlanCache cache;
    fftw_plan p = cache.get(n, count, stride, dist, forward);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

}  // namespace ddisac::fft
