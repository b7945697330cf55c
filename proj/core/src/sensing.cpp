#include "ddisac/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "ddisac/fft.hpp"

namespace ddisac {

namespace {
constexpr double kGoldenEta = 0.6180339887498949;  // (sqrt(5) - 1) / 2
}

GridPeak phase1_ongrid(const FrameParams& fp, const Grid& x_dd, const cvec& y_residual) {
    x_dd.require(Domain::DelayDoppler, "phase1_ongrid");
    x_dd.require_shape(fp.M, fp.N, "phase1_ongrid");
    if (y_residual.size() != static_cast<std::size_t>(fp.frame_len()))
        throw std::length_error("phase1_ongrid: residual length mismatch");

    const int M = fp.M, N = fp.N;

    // corr[l,k] = sum conj(X[a,b]) Y[a+l, b+k] for all shifts at once:
    // IFFT2( FFT2(Y) .* conj(FFT2(X)) ).
    cvec xf = x_dd.values();
    cvec yf = y_residual;
    fft::columns(xf.data(), M, N, true);
    fft::rows(xf.data(), M, N, true);
    fft::columns(yf.data(), M, N, true);
    fft::rows(yf.data(), M, N, true);
    for (std::size_t i = 0; i < yf.size(); ++i) yf[i] *= std::conj(xf[i]);
    fft::columns(yf.data(), M, N, false);
    fft::rows(yf.data(), M, N, false);
    fft::scale(yf, 1.0 / static_cast<double>(M * N));

    GridPeak best{0, -N / 2};
    double best_val = -1.0;
    for (int l = 0; l < M; ++l) {
        for (int k = -N / 2; k < N - N / 2; ++k) {
            const int kc = (k + N) % N;
            const double val = std::norm(yf[static_cast<std::size_t>(l) + static_cast<std::size_t>(kc) * M]);
            if (val > best_val) {
                best_val = val;
                best = GridPeak{l, k};
            }
        }
    }
    return best;
}

SearchRegion phase2_region(const FrameParams& fp, GridPeak peak) {
    const double dtau = fp.delay_resolution();
    const double dnu = fp.doppler_resolution();
    return SearchRegion{(peak.l - 1) * dtau, (peak.l + 1) * dtau,
                        (peak.k - 1) * dnu, (peak.k + 1) * dnu};
}

int phase2_iterations(const TpeConfig& cfg) {
    if (cfg.phase2_iters > 0) return cfg.phase2_iters;
    if (cfg.resolution_divisor <= 0.0)
        throw std::invalid_argument("TpeConfig: resolution_divisor must be positive");
    // Starting width is two bins; shrink to bin/divisor.
    const double shrink = 1.0 / (2.0 * cfg.resolution_divisor);
    return static_cast<int>(std::ceil(std::log(shrink) / std::log(kGoldenEta)));
}

std::pair<double, double> golden_max_2d(const std::function<double(double, double)>& f,
                                        const SearchRegion& region, int iters) {
    double a_l = region.tau_lo, a_u = region.tau_hi;
    double b_l = region.nu_lo, b_u = region.nu_hi;

    for (int it = 0; it < iters; ++it) {
        const double ia = a_u - a_l, ib = b_u - b_l;
        const double a1 = a_l + (1.0 - kGoldenEta) * ia, a2 = a_l + kGoldenEta * ia;
        const double b1 = b_l + (1.0 - kGoldenEta) * ib, b2 = b_l + kGoldenEta * ib;

        const double f11 = f(a1, b1);
        const double f12 = f(a1, b2);
        const double f21 = f(a2, b1);
        const double f22 = f(a2, b2);

        if (f11 == f12 && f12 == f21 && f21 == f22) {
            // Degenerate four-way tie (e.g. a zero residual): shrink onto the
            // centered subinterval so the midpoint is returned, keeping the
            // exact eta contraction per iteration.
            const double trim_a = 0.5 * (1.0 - kGoldenEta) * ia;
            const double trim_b = 0.5 * (1.0 - kGoldenEta) * ib;
            a_l += trim_a;
            a_u -= trim_a;
            b_l += trim_b;
            b_u -= trim_b;
            continue;
        }

        const double fmax = std::max(std::max(f11, f12), std::max(f21, f22));
        if (fmax == f11) {
            a_u = a2;
            b_u = b2;
        } else if (fmax == f12) {
            a_u = a2;
            b_l = b1;
        } else if (fmax == f21) {
            a_l = a1;
            b_u = b2;
        } else {
            a_l = a1;
            b_l = b1;
        }
    }
    return {0.5 * (a_l + a_u), 0.5 * (b_l + b_u)};
}

std::pair<double, double> phase2_golden(const FrameParams& fp, const Grid& x_dd,
                                        const cvec& y_residual, const SearchRegion& region,
                                        int iters) {
    cvec g;
    auto objective = [&](double tau, double nu) {
        apply_gamma(fp, tau, nu, x_dd.values(), g);
        return std::norm(inner(g, y_residual));
    };
    return golden_max_2d(objective, region, iters);
}

cplx estimate_alpha(const FrameParams& fp, double tau_hat, double nu_hat, const Grid& x_dd,
                    const cvec& y_residual, TpeConfig::AlphaEstimator estimator) {
    cvec g = apply_gamma(fp, tau_hat, nu_hat, x_dd.values());
    const double g2 = energy(g);
    const cplx corr = inner(g, y_residual);

    if (estimator == TpeConfig::AlphaEstimator::LeastSquares) {
        if (g2 == 0.0) throw std::domain_error("estimate_alpha: zero template energy");
        return corr / g2;
    }
    if (corr == cplx(0.0, 0.0))
        throw std::domain_error("estimate_alpha: zero correlation denominator");
    return g2 / corr;
}

EstimationResult tpe_estimate(const FrameParams& fp, const cvec& y, const Grid& x_dd, int P,
                              const TpeConfig& cfg) {
    if (P < 1) throw std::invalid_argument("tpe_estimate: target count must be >= 1");
    const int iters = phase2_iterations(cfg);

    EstimationResult result;
    cvec y_res = y;
    cvec g;
    for (int i = 0; i < P; ++i) {
        const GridPeak peak = phase1_ongrid(fp, x_dd, y_res);
        const SearchRegion region = phase2_region(fp, peak);
        const auto [tau_hat, nu_hat] = phase2_golden(fp, x_dd, y_res, region, iters);
        const cplx alpha_hat =
            estimate_alpha(fp, tau_hat, nu_hat, x_dd, y_res, cfg.alpha_estimator);

        apply_gamma(fp, tau_hat, nu_hat, x_dd.values(), g);
        for (std::size_t j = 0; j < y_res.size(); ++j) y_res[j] -= alpha_hat * g[j];

        result.targets.push_back(TargetEstimate{alpha_hat, tau_hat, nu_hat});
    }

    const double y2 = energy(y);
    result.residual_ratio = (y2 > 0.0) ? energy(y_res) / y2 : 0.0;
    return result;
}

std::pair<double, double> to_range_velocity(double tau, double nu, double f_c, Mode mode) {
    const double factor = (mode == Mode::Active) ? 2.0 : 1.0;
    return {tau * kSpeedOfLight / factor, nu * kSpeedOfLight / (factor * f_c)};
}

}  // namespace ddisac
