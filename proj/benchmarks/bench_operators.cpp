#include <benchmark/benchmark.h>

#include "ddisac/channel.hpp"
#include "ddisac/detect.hpp"
#include "ddisac/modem.hpp"
#include "ddisac/rng.hpp"
#include "ddisac/sensing.hpp"

using namespace ddisac;

namespace {

FrameParams frame_for(int M, int N) { return make_frame(M, N, 1.92e6, 16, 0.3e12, 4); }

cvec random_vec(Rng& rng, int n) {
    cvec v(n);
    for (auto& x : v) x = rng.cnormal(1.0);
    return v;
}

void BM_ApplyTheta(benchmark::State& state) {
    const FrameParams fp = frame_for(static_cast<int>(state.range(0)), 32);
    Rng rng(1);
    const cvec s = random_vec(rng, fp.frame_len());
    const double tau = 3.37 * fp.sample_period();
    const double nu = 0.21 / (fp.N * fp.T());
    cvec out;
    for (auto _ : state) {
        apply_theta(fp, tau, nu, s, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(fp.frame_len());
}
BENCHMARK(BM_ApplyTheta)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNLogN);

void BM_ApplyGamma(benchmark::State& state) {
    const FrameParams fp = frame_for(static_cast<int>(state.range(0)), 32);
    Rng rng(2);
    const cvec x = random_vec(rng, fp.frame_len());
    const double tau = 3.37 * fp.sample_period();
    const double nu = 0.21 / (fp.N * fp.T());
    cvec out;
    for (auto _ : state) {
        apply_gamma(fp, tau, nu, x, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(fp.frame_len());
}
BENCHMARK(BM_ApplyGamma)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNLogN);

void BM_Phase1Correlation(benchmark::State& state) {
    const FrameParams fp = frame_for(static_cast<int>(state.range(0)), 32);
    Rng rng(3);
    Grid x(fp.M, fp.N, Domain::DelayDoppler);
    for (auto& v : x.values()) v = rng.cnormal(1.0);
    const cvec y = random_vec(rng, fp.frame_len());
    for (auto _ : state) {
        const GridPeak peak = phase1_ongrid(fp, x, y);
        benchmark::DoNotOptimize(peak);
    }
    state.SetComplexityN(fp.frame_len());
}
BENCHMARK(BM_Phase1Correlation)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNLogN);

void BM_TpeSingleTarget(benchmark::State& state) {
    const FrameParams fp = frame_for(static_cast<int>(state.range(0)), 32);
    Rng rng(4);
    Grid x(fp.M, fp.N, Domain::DelayDoppler);
    for (auto& v : x.values()) v = rng.cnormal(1.0);
    ChannelSpec spec;
    spec.paths = {{cplx(1.0, 0.0), 5.3 * fp.sample_period(), 0.4 / (fp.N * fp.T())}};
    const CddsOperator H(fp, spec);
    const cvec y = H.apply_dd(x.values());
    for (auto _ : state) {
        const EstimationResult est = tpe_estimate(fp, y, x, 1);
        benchmark::DoNotOptimize(est.targets.data());
    }
    state.SetComplexityN(fp.frame_len());
}
BENCHMARK(BM_TpeSingleTarget)->RangeMultiplier(2)->Range(64, 256)->Complexity(benchmark::oNLogN);

void BM_CgEqualize(benchmark::State& state) {
    const FrameParams fp = frame_for(64, 16);
    Rng rng(5);
    const ChannelSpec spec =
        random_channel(fp, 3, 1.0, fp.cp_len * fp.sample_period(), GainModel::Rayleigh, rng);
    const CddsOperator H(fp, spec);
    const cvec r = H.apply(random_vec(rng, fp.frame_len()));
    const CgConfig cfg{0.03, 1e-6, 100};
    for (auto _ : state) {
        const CgResult res = cg_equalize(H, r, cfg);
        benchmark::DoNotOptimize(res.s_hat.data());
    }
}
BENCHMARK(BM_CgEqualize);

}  // namespace

BENCHMARK_MAIN();
