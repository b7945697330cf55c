#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ddisac/channel.hpp"
#include "ddisac/frame.hpp"
#include "ddisac/grid.hpp"

namespace ddisac {

// Phase-II uncertainty region: one grid bin either side of the Phase-I peak.
struct SearchRegion {
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    double nu_lo = 0.0;
    double nu_hi = 0.0;
};

struct TpeConfig {
    // Phase-II golden-section termination: shrink both intervals until their
    // width is one grid bin divided by this factor. phase2_iters overrides
    // the derived count when nonzero.
    double resolution_divisor = 200.0;
    int phase2_iters = 0;

    // The coefficient formula as printed is the reciprocal of the
    // least-squares projection; interference cancellation only converges
    // with the least-squares form, which is therefore the default.
    enum class AlphaEstimator { LeastSquares, AsPrinted };
    AlphaEstimator alpha_estimator = AlphaEstimator::LeastSquares;
};

struct TargetEstimate {
    cplx alpha;
    double tau;  // s
    double nu;   // Hz
};

struct EstimationResult {
    std::vector<TargetEstimate> targets;   // in estimation order
    double residual_ratio = 0.0;           // ||y_res||^2 / ||y||^2 after cancellation
};

struct GridPeak {
    int l = 0;  // delay bin in [0, M)
    int k = 0;  // Doppler bin in [-N/2, N/2)
};

// On-grid search: argmax over all 2D circular shifts of |<shift(x), y_res>|^2,
// evaluated for every (l, k) at once through a 2D FFT cross-correlation.
// Ties break to the lexicographically smallest (l, k).
GridPeak phase1_ongrid(const FrameParams& fp, const Grid& x_dd, const cvec& y_residual);

SearchRegion phase2_region(const FrameParams& fp, GridPeak peak);

// Number of golden-section iterations needed to reach the configured
// resolution from a two-bin-wide starting region.
int phase2_iterations(const TpeConfig& cfg);

// 2D golden-section maximization: four probes per iteration, both intervals
// shrink by the golden ratio each step; returns the interval midpoints.
std::pair<double, double> golden_max_2d(const std::function<double(double, double)>& f,
                                        const SearchRegion& region, int iters);

// Off-grid refinement of |<Gamma(tau, nu) x, y_res>|^2 over the region.
std::pair<double, double> phase2_golden(const FrameParams& fp, const Grid& x_dd,
                                        const cvec& y_residual, const SearchRegion& region,
                                        int iters);

// Channel coefficient at (tau_hat, nu_hat) given the current residual.
cplx estimate_alpha(const FrameParams& fp, double tau_hat, double nu_hat, const Grid& x_dd,
                    const cvec& y_residual, TpeConfig::AlphaEstimator estimator);

// Two-phase estimation with successive interference cancellation across P
// targets. x_dd is the full transmit DD grid (active sensing) or the pilot
// grid (coarse pilot-aided estimation).
EstimationResult tpe_estimate(const FrameParams& fp, const cvec& y, const Grid& x_dd, int P,
                              const TpeConfig& cfg = {});

// (range m, velocity m/s) for an estimated (tau, nu) pair.
std::pair<double, double> to_range_velocity(double tau, double nu, double f_c, Mode mode);

}  // namespace ddisac
