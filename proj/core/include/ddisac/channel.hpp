#pragma once

#include <vector>

#include "ddisac/frame.hpp"
#include "ddisac/grid.hpp"
#include "ddisac/rng.hpp"

namespace ddisac {

// Active sensing sees the round trip (factor 2 in delay and Doppler);
// passive/communication paths are one way.
enum class Mode { Active, Passive };

struct PathParams {
    cplx alpha;   // complex path gain
    double tau;   // delay, s; in [0, 1/delta_f)
    double nu;    // Doppler shift, Hz; in [-1/(2T), 1/(2T))
};

struct ChannelSpec {
    std::vector<PathParams> paths;
    double sigma_h2 = 1.0;  // E{alpha^H alpha}
    Mode mode = Mode::Passive;
};

// Delay/Doppler for a target at range r (m) moving at v (m/s).
// Throws std::domain_error naming the violated limit if the result falls
// outside the unambiguous ranges of the numerology.
PathParams geometry_to_path(double range_m, double velocity_mps, const FrameParams& fp,
                            Mode mode, cplx alpha = cplx(1.0, 0.0));

// Resolvability predicate: every pair separated by at least one delay bin or
// one Doppler bin. Checked by the random generators, not by the operator
// (deliberately degenerate specs are valid inputs, e.g. cancelling paths).
bool pairwise_resolvable(const FrameParams& fp, const std::vector<PathParams>& paths);

// Delay bin index l_i = ceil(tau * M * delta_f), with a small downward nudge
// so delays that are exact bin multiples stay on their bin.
int delay_bin_ceil(double tau, const FrameParams& fp);

// Single-path time-domain operator: Doppler diagonal * frame cyclic shift *
// per-symbol fractional-delay phase ramp. O(M N log M), never materialized.
void apply_theta(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out);
cvec apply_theta(const FrameParams& fp, double tau, double nu, const cvec& in);
void apply_theta_adjoint(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out);

// Single-path DD-domain operator Gamma = (F_N (x) I_M) Theta (F_N^H (x) I_M),
// applied as grid transforms. O(M N log(M N)).
void apply_gamma(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out);
cvec apply_gamma(const FrameParams& fp, double tau, double nu, const cvec& in);
void apply_gamma_adjoint(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out);

/**
 * Matrix-free multipath channel H = sum_i alpha_i Theta_i and its
 * delay-Doppler image A = sum_i alpha_i Gamma_i. Adjoints reverse the factor
 * chains with conjugated diagonals and inverse shifts; no MN x MN matrix is
 * ever formed. Applications are pure and safe to call concurrently.
 */
class CddsOperator {
public:
    CddsOperator(const FrameParams& fp, ChannelSpec spec);

    const FrameParams& frame() const { return fp_; }
    const ChannelSpec& spec() const { return spec_; }

    cvec apply(const cvec& s) const;           // H s
    cvec apply_adjoint(const cvec& r) const;   // H^H r
    cvec apply_dd(const cvec& x) const;        // A x
    cvec apply_dd_adjoint(const cvec& y) const;

private:
    FrameParams fp_;
    ChannelSpec spec_;
};

// Circularly symmetric AWGN with per-sample variance sigma_w2.
cvec add_awgn(const cvec& s, double sigma_w2, Rng& rng);

// Received DD-domain prediction for an integer shift (l_i, k_i) with
// k_i in [-N/2, N/2): 2D circular shift with the boundary phase factor.
Grid dd_circular_shift_model(const Grid& x, int l_i, int k_i);

// Dense Delta^k Pi^l for the integer-shift reference model; test-scale only
// (M*N <= 64). Returned as columns of the MN x MN matrix.
std::vector<cvec> integer_reference_channel(const FrameParams& fp, int l, int k);

enum class GainModel {
    Rayleigh,        // alpha_i ~ CN(0, sigma_h2 / P)
    FixedMagnitude,  // |alpha_i| = sqrt(sigma_h2 / P), uniform phase
};

// Random resolvable multipath set: tau uniform in [0, tau_max), nu uniform in
// [-nu_max, nu_max) (nu_max <= 0 means the full unambiguous range), gains per
// the chosen model. Redraws until the set is pairwise resolvable.
ChannelSpec random_channel(const FrameParams& fp, int P, double sigma_h2, double tau_max,
                           GainModel gains, Rng& rng, Mode mode = Mode::Passive,
                           double nu_max = -1.0);

// Channel built from target geometry; gains per model with random phases.
ChannelSpec targets_channel(const FrameParams& fp,
                            const std::vector<std::pair<double, double>>& range_velocity,
                            Mode mode, double sigma_h2, GainModel gains, Rng& rng);

}  // namespace ddisac
