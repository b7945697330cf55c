#pragma once

#include <vector>

#include "ddisac/common.hpp"

namespace ddisac {

/**
 * Inputs of the closed-form post-detection SINR model. Powers are normalized
 * so that sigma_p2 + sigma_d2 = 1 (enforced at construction).
 */
struct SinrModel {
    double sigma_h2 = 1.0;
    double sigma_w2 = 0.0;
    double sigma_d2 = 1.0;
    double sigma_p2 = 0.0;
    int P = 1;
    int M = 2;
    int N = 2;

    void validate() const;
};

struct SinrBreakdown {
    double sigma_0sq;   // pilot-aided coefficient error
    double sigma_xe2;   // equalized-symbol error
    double sigma_e2;    // data-aided coefficient error
    double sinr;        // linear
};

// Evaluates the error-term chain sigma_0^2 -> sigma_xe^2 -> sigma_e^2 and the
// resulting SINR. Throws std::domain_error when sigma_p2 = 0 ("no pilot") or
// when the model breaks down (sigma_xe^2 >= sigma_p2 + sigma_d2).
SinrBreakdown sinr_components(const SinrModel& model);
double sinr_closed_form(const SinrModel& model);

struct PilotPowerResult {
    double sigma_p2 = 0.0;
    double sinr = 0.0;        // linear, at the optimum
    bool degenerate = false;  // flat objective; midpoint returned
};

// Maximize the closed-form SINR over sigma_p2 in (0,1) with sigma_d2 =
// 1 - sigma_p2: coarse bracketing scan followed by golden-section refinement
// to better than 1e-5 absolute.
PilotPowerResult optimize_pilot_power(double sigma_h2, double sigma_w2, int P, int M, int N);

// max |s|^2 / mean |s|^2. Throws on an all-zero signal.
double papr_linear(const cvec& s);
double papr_db(const cvec& s);

struct CcdfPoint {
    double threshold_db;
    double prob;  // P(PAPR > threshold)
};

struct CcdfTable {
    std::vector<CcdfPoint> points;
    bool low_confidence = false;  // fewer than 1e4 samples
};

CcdfTable papr_ccdf(const std::vector<double>& papr_db_samples,
                    const std::vector<double>& thresholds_db);

// Empirical quantile of the PAPR samples at CCDF level p (e.g. 1e-3).
double papr_at_ccdf(std::vector<double> papr_db_samples, double p);

/**
 * Exponential efficiency law eta = G * exp(-g * papr_dB), eta in percent.
 *
 * Both pairs are configuration constants. Class B follows the
 * 78.5%/sqrt(PAPR) law exactly (g = ln(10)/20). The exact class A law
 * 50%/PAPR corresponds to (50, ln(10)/10); the default below is instead a
 * calibrated fit over the 5-12 dB PAPR range that reproduces the reported
 * mean-efficiency gap between spread and unspread waveforms.
 */
struct PaModel {
    double G;  // peak efficiency, percent, in (0, 100]
    double g;  // decay per dB, > 0
};

inline constexpr PaModel kClassA{61.0, 0.13};
inline constexpr PaModel kClassB{78.5, 0.11512925464970229};

double pa_efficiency(double papr_db_value, const PaModel& model);

// Welch-averaged periodogram of a sample stream: rectangular window of nfft
// samples, 50% overlap, peak-normalized, in dB. The stream should span many
// frames so that segment windows straddle frame boundaries.
std::vector<double> welch_psd_db(const cvec& stream, int nfft);

// Mean PSD level (dB) over the shoulder regions just outside the occupied
// band. The band occupies bins [0, nfft/L); the shoulder window covers
// offsets [lo, hi] (fractions of the bandwidth) beyond both band edges.
double band_edge_shoulder_db(const std::vector<double>& psd_db, int oversampling,
                             double lo = 0.02, double hi = 0.10);

// Mean over trials of (1/P) sum (x_i - xhat_i)^2 with targets matched to
// estimates by greedy nearest assignment, then the square root.
double rmse_matched(const std::vector<std::vector<double>>& truths,
                    const std::vector<std::vector<double>>& estimates);

// Bistatic geometry: distance of the reflecting target from the receiver
// given the LoS path length, the reflected path length and their angle.
double passive_target_range(double r_los, double r_nlos, double theta_rad);

// Hamming distance / length.
double ber(const std::vector<std::uint8_t>& tx_bits, const std::vector<std::uint8_t>& rx_bits);

}  // namespace ddisac
