#include <doctest.h>

#include <cmath>

#include "dense.hpp"
#include "ddisac/modem.hpp"
#include "ddisac/rng.hpp"
#include "ddisac/sensing.hpp"

using namespace ddisac;

namespace {

const FrameParams kSmall = make_frame(8, 4, 1.0, 4, 1.0e2, 1);
const FrameParams kMid = make_frame(64, 16, 1.92e6, 16, 0.3e12, 4);

Grid random_dd(Rng& rng, const FrameParams& fp, double power = 1.0) {
    Grid g(fp.M, fp.N, Domain::DelayDoppler);
    for (auto& v : g.values()) v = rng.cnormal(power);
    return g;
}

// DD received vector for a channel applied through the full transform chain.
cvec received_dd(const FrameParams& fp, const ChannelSpec& spec, const Grid& x) {
    const CddsOperator H(fp, spec);
    const cvec r = H.apply(heisenberg(isfft(x)));
    return sfft(wigner(r, fp)).values();
}

// Brute-force Phase-I objective at one grid point.
double phase1_objective(const FrameParams& fp, const Grid& x, const cvec& y, int l, int k) {
    cplx acc = 0.0;
    const int kc = ((k % fp.N) + fp.N) % fp.N;
    for (int lp = 0; lp < fp.M; ++lp)
        for (int kp = 0; kp < fp.N; ++kp) {
            const cplx shifted = x.at((lp - l + fp.M) % fp.M, (kp - kc + fp.N) % fp.N);
            acc += std::conj(shifted) * y[lp + kp * fp.M];
        }
    return std::norm(acc);
}

}  // namespace

TEST_SUITE_BEGIN("sensing");

TEST_CASE("phase1 equals the brute-force shift correlation argmax") {
    Rng rng(50);
    for (int trial = 0; trial < 10; ++trial) {
        const Grid x = random_dd(rng, kSmall);
        cvec y(kSmall.frame_len());
        for (auto& v : y) v = rng.cnormal(1.0);

        const GridPeak fast = phase1_ongrid(kSmall, x, y);

        double best = -1.0;
        GridPeak expect{0, -kSmall.N / 2};
        for (int l = 0; l < kSmall.M; ++l)
            for (int k = -kSmall.N / 2; k < kSmall.N / 2; ++k) {
                const double v = phase1_objective(kSmall, x, y, l, k);
                if (v > best) {
                    best = v;
                    expect = GridPeak{l, k};
                }
            }
        CHECK(fast.l == expect.l);
        CHECK(fast.k == expect.k);
    }
}

TEST_CASE("phase1 finds a planted on-grid target, including the origin") {
    Rng rng(51);
    const Grid x = random_dd(rng, kMid);

    ChannelSpec spec;
    spec.paths = {{cplx(1.0, 0.0), 3.0 / (kMid.M * kMid.delta_f), 2.0 / (kMid.N * kMid.T())}};
    const GridPeak peak = phase1_ongrid(kMid, x, received_dd(kMid, spec, x));
    CHECK(peak.l == 3);
    CHECK(peak.k == 2);

    ChannelSpec origin;
    origin.paths = {{cplx(1.0, 0.0), 0.0, 0.0}};
    const GridPeak p0 = phase1_ongrid(kMid, x, received_dd(kMid, origin, x));
    CHECK(p0.l == 0);
    CHECK(p0.k == 0);
}

TEST_CASE("phase1 exactness property: 100 random on-grid plants at M=64, N=16") {
    // Two exact-channel effects bound the reliable domain: rows below l_i
    // wrap to the previous Doppler column with a phase that averages out of
    // the aligned correlation (peak mass scales with 1 - l/M), and a delay
    // ramp of k/(MN) cycles per row straddles half a delay bin at |k| = N/2.
    // Exactness holds with margin for l < M/2 and |k| <= N/4 at this frame
    // size; at the k corner the peak stays within one bin, which is all
    // Phase II needs.
    Rng rng(52);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Grid x = random_dd(rng, kMid);
        const int l = static_cast<int>(rng.uniform_int(kMid.M / 2));
        const int k = static_cast<int>(rng.uniform_int(kMid.N / 2)) - kMid.N / 4;
        ChannelSpec spec;
        spec.paths = {{std::polar(1.0, rng.uniform(0.0, kTwoPi)),
                       l / (kMid.M * kMid.delta_f), k / (kMid.N * kMid.T())}};
        const GridPeak peak = phase1_ongrid(kMid, x, received_dd(kMid, spec, x));
        if (peak.l == l && peak.k == k) ++hits;
    }
    CHECK(hits == 100);

    for (int trial = 0; trial < 20; ++trial) {
        const Grid x = random_dd(rng, kMid);
        const int l = static_cast<int>(rng.uniform_int(kMid.M / 4));
        const int k = -kMid.N / 2;
        ChannelSpec spec;
        spec.paths = {{std::polar(1.0, rng.uniform(0.0, kTwoPi)),
                       l / (kMid.M * kMid.delta_f), k / (kMid.N * kMid.T())}};
        const GridPeak peak = phase1_ongrid(kMid, x, received_dd(kMid, spec, x));
        CHECK(std::abs(peak.l - l) <= 1);
        CHECK(peak.k == k);
    }
}

TEST_CASE("phase1 tie-break on a zero residual is the lexicographic minimum") {
    const Grid x(kSmall.M, kSmall.N, Domain::DelayDoppler);
    const cvec y(kSmall.frame_len(), cplx(0.0, 0.0));
    const GridPeak peak = phase1_ongrid(kSmall, x, y);
    CHECK(peak.l == 0);
    CHECK(peak.k == -kSmall.N / 2);
}

TEST_CASE("phase2 region is two bins wide around the peak") {
    const SearchRegion r = phase2_region(kMid, GridPeak{5, -3});
    CHECK(r.tau_hi - r.tau_lo == doctest::Approx(2.0 / (kMid.M * kMid.delta_f)).epsilon(1e-12));
    CHECK(r.nu_hi - r.nu_lo == doctest::Approx(2.0 / (kMid.N * kMid.T())).epsilon(1e-12));
    CHECK(r.tau_lo == doctest::Approx(4.0 / (kMid.M * kMid.delta_f)).epsilon(1e-12));
}

TEST_CASE("golden section shrinks both intervals by eta each iteration") {
    // Objective maximized at the upper-right corner drives both lower bounds
    // up; after K iterations the midpoint sits eta^K * width / 2 from the
    // corner.
    const double eta = 0.6180339887498949;
    const SearchRegion region{0.0, 1.0, 0.0, 2.0};
    for (int iters : {1, 5, 13}) {
        const auto [a, b] =
            golden_max_2d([](double x, double y) { return x + y; }, region, iters);
        CHECK(a == doctest::Approx(1.0 - 0.5 * std::pow(eta, iters)).epsilon(1e-10));
        CHECK(b == doctest::Approx(2.0 * (1.0 - 0.5 * std::pow(eta, iters))).epsilon(1e-10));
    }
}

TEST_CASE("golden section on a constant objective returns the region midpoint") {
    const SearchRegion region{-1.0, 3.0, 10.0, 14.0};
    const auto [a, b] = golden_max_2d([](double, double) { return 7.0; }, region, 25);
    CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("phase2 iteration count derivation") {
    TpeConfig cfg;
    cfg.resolution_divisor = 200.0;
    CHECK(phase2_iterations(cfg) == 13);
    cfg.phase2_iters = 7;
    CHECK(phase2_iterations(cfg) == 7);
}

TEST_CASE("phase2 refines a noiseless off-grid delay to machine level") {
    Rng rng(53);
    const Grid x = random_dd(rng, kMid);
    const double tau_true = 7.37 / (kMid.M * kMid.delta_f);

    ChannelSpec spec;
    spec.paths = {{cplx(1.0, 0.0), tau_true, 0.0}};
    const cvec y = received_dd(kMid, spec, x);

    const GridPeak peak = phase1_ongrid(kMid, x, y);
    const SearchRegion region = phase2_region(kMid, peak);
    const auto [tau_hat, nu_hat] = phase2_golden(kMid, x, y, region, 40);
    CHECK(std::abs(tau_hat - tau_true) < 1e-12);
    CHECK(std::abs(nu_hat) < 1e-4 / kMid.T());
}

TEST_CASE("alpha estimators: exact plant recovers the gain (or its reciprocal)") {
    Rng rng(54);
    const Grid x = random_dd(rng, kSmall);
    const double tau = 2.31 / (kSmall.M * kSmall.delta_f);
    const double nu = 0.4 / (kSmall.N * kSmall.T());

    cvec g = apply_gamma(kSmall, tau, nu, x.values());

    SUBCASE("unit gain: both forms give one") {
        const cplx ls = estimate_alpha(kSmall, tau, nu, x, g, TpeConfig::AlphaEstimator::LeastSquares);
        const cplx pp = estimate_alpha(kSmall, tau, nu, x, g, TpeConfig::AlphaEstimator::AsPrinted);
        CHECK(std::abs(ls - 1.0) < 1e-12);
        CHECK(std::abs(pp - 1.0) < 1e-12);
    }

    SUBCASE("general gain: least squares recovers alpha, as-printed its reciprocal") {
        const cplx alpha = 0.5 * std::polar(1.0, kPi / 4.0);
        cvec y = g;
        for (auto& v : y) v *= alpha;
        const cplx ls = estimate_alpha(kSmall, tau, nu, x, y, TpeConfig::AlphaEstimator::LeastSquares);
        const cplx pp = estimate_alpha(kSmall, tau, nu, x, y, TpeConfig::AlphaEstimator::AsPrinted);
        CHECK(std::abs(ls - alpha) < 1e-10);
        CHECK(std::abs(pp - 1.0 / alpha) < 1e-10);
        CHECK(std::abs(std::abs(pp) - 1.0 / std::abs(alpha)) < 1e-10);
    }

    SUBCASE("zero template energy raises") {
        const Grid zero(kSmall.M, kSmall.N, Domain::DelayDoppler);
        CHECK_THROWS_AS(
            estimate_alpha(kSmall, tau, nu, zero, g, TpeConfig::AlphaEstimator::LeastSquares),
            std::domain_error);
    }
}

TEST_CASE("least-squares cancellation never increases the residual") {
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid x = random_dd(rng, kSmall);
        cvec y(kSmall.frame_len());
        for (auto& v : y) v = rng.cnormal(1.0);
        const double tau = rng.uniform(0.0, 1.0 / kSmall.delta_f);
        const double nu = rng.uniform(-0.5 / kSmall.T(), 0.5 / kSmall.T());

        const cplx a = estimate_alpha(kSmall, tau, nu, x, y, TpeConfig::AlphaEstimator::LeastSquares);
        const cvec g = apply_gamma(kSmall, tau, nu, x.values());
        cvec y_next = y;
        for (std::size_t i = 0; i < y.size(); ++i) y_next[i] -= a * g[i];
        CHECK(energy(y_next) <= energy(y) + 1e-12);
    }
}

TEST_CASE("tpe: single noiseless on-grid target recovered exactly") {
    Rng rng(56);
    const Grid x = random_dd(rng, kMid);
    ChannelSpec spec;
    spec.paths = {{cplx(1.0, 0.0), 5.0 / (kMid.M * kMid.delta_f), -3.0 / (kMid.N * kMid.T())}};
    const cvec y = received_dd(kMid, spec, x);

    TpeConfig cfg;
    cfg.phase2_iters = 40;
    const EstimationResult est = tpe_estimate(kMid, y, x, 1, cfg);
    REQUIRE(est.targets.size() == 1);
    CHECK(std::abs(est.targets[0].tau - spec.paths[0].tau) < 1e-3 / (kMid.M * kMid.delta_f));
    CHECK(std::abs(est.targets[0].nu - spec.paths[0].nu) < 1e-3 / (kMid.N * kMid.T()));
    CHECK(std::abs(est.targets[0].alpha - spec.paths[0].alpha) < 1e-6);
    CHECK(est.residual_ratio < 1e-8);
}

TEST_CASE("tpe: two separated noiseless targets cancel below 1e-8 of the input energy") {
    Rng rng(57);
    ChannelSpec spec;
    spec.paths = {{std::polar(0.9, 0.3), 4.0 / (kMid.M * kMid.delta_f), 1.0 / (kMid.N * kMid.T())},
                  {std::polar(0.6, -1.1), 9.0 / (kMid.M * kMid.delta_f), -2.0 / (kMid.N * kMid.T())}};

    TpeConfig cfg;
    cfg.phase2_iters = 40;

    // With a single-entry (pilot-like) transmit grid the two shifted
    // templates are orthogonal and cancellation is exact.
    Grid x_p(kMid.M, kMid.N, Domain::DelayDoppler);
    x_p.at(kMid.M / 2, kMid.N / 2) = std::sqrt(static_cast<double>(kMid.frame_len()));
    const cvec y_p = received_dd(kMid, spec, x_p);
    const EstimationResult est = tpe_estimate(kMid, y_p, x_p, 2, cfg);
    REQUIRE(est.targets.size() == 2);
    CHECK(est.residual_ratio < 1e-8);
    CHECK(std::abs(est.targets[0].alpha) > std::abs(est.targets[1].alpha));

    // With a full random data grid the one-pass cancellation floor is set by
    // the template cross-correlation (~ |alpha| / sqrt(MN) per target).
    const Grid x = random_dd(rng, kMid);
    const EstimationResult est_data = tpe_estimate(kMid, received_dd(kMid, spec, x), x, 2, cfg);
    CHECK(est_data.residual_ratio < 1e-2);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(est_data.targets[i].tau - spec.paths[i].tau) <
              0.2 / (kMid.M * kMid.delta_f));
}

TEST_CASE("tpe on pure noise flags an unreliable fit through the residual ratio") {
    Rng rng(58);
    const Grid x = random_dd(rng, kMid);
    cvec y(kMid.frame_len());
    for (auto& v : y) v = rng.cnormal(1.0);
    const EstimationResult est = tpe_estimate(kMid, y, x, 1);
    CHECK(est.targets.size() == 1);
    CHECK(est.residual_ratio > 0.5);
}

TEST_CASE("range and velocity mapping") {
    const auto [r_active, v_active] = to_range_velocity(66.713e-9, 60.04e3, 0.3e12, Mode::Active);
    CHECK(r_active == doctest::Approx(10.0).epsilon(1e-4));
    CHECK(v_active == doctest::Approx(30.0).epsilon(1e-3));

    const auto [r_passive, v_passive] = to_range_velocity(66.713e-9, 0.0, 0.3e12, Mode::Passive);
    CHECK(r_passive == doctest::Approx(20.0).epsilon(1e-4));
    CHECK(v_passive == 0.0);
}

TEST_SUITE_END();
