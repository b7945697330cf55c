#pragma once

#include <functional>

#include "ddisac/channel.hpp"
#include "ddisac/lattice.hpp"
#include "ddisac/sensing.hpp"

namespace ddisac {

struct CgConfig {
    double lambda = 0.0;   // regularizer, 1/SNR
    double tol = 1e-6;     // on sqrt(gamma_t)/sqrt(gamma_0)
    int max_iters = 100;
};

struct CgResult {
    cvec s_hat;
    int iterations = 0;
    bool converged = false;
};

// Conjugate-gradient solve of (A^H A + lambda I) s = A^H r for any linear
// operator given through its apply/adjoint actions.
using LinOp = std::function<void(const cvec&, cvec&)>;
CgResult cg_solve(const LinOp& apply, const LinOp& apply_adjoint, const cvec& r,
                  const CgConfig& cfg);

// Time-domain equalizer: (H^H H + lambda I) s = H^H r, matrix-free.
CgResult cg_equalize(const CddsOperator& H, const cvec& r, const CgConfig& cfg);

// Pilot-aided coarse channel estimation: two-phase estimation against the
// pilot grid alone, with the data signal acting as unmodeled interference.
EstimationResult coarse_ce(const FrameParams& fp, const cvec& y, const Grid& x_p, int P,
                           const TpeConfig& cfg = {});

struct SymbolRecovery {
    Grid soft;  // de-spread symbol estimates before the decision
    Grid hard;  // per-entry nearest alphabet point
};

// Pilot removal followed by de-spreading and elementwise decisions.
SymbolRecovery recover_symbols(const FrameParams& fp, const cvec& s_hat, const Grid& x_p,
                               const QamAlphabet& alphabet, double sigma_d2);

// Transmit DD vector implied by detected symbols: spread, then re-add pilot.
Grid rebuild_x(const Grid& xd_hat, const Grid& x_p);

struct DetectorConfig {
    CgConfig cg;
    TpeConfig tpe;
    int max_outer = 10;
};

struct DetectorResult {
    Grid xd_hat;                 // detected data symbols
    EstimationResult channel;    // final channel parameter estimates
    int iterations = 0;          // outer iterations executed
    bool converged = false;      // consecutive symbol grids identical
};

// Iterative channel estimation and data detection: coarse pilot-aided
// initialization (or the supplied estimate), then equalize / detect /
// re-estimate until the detected grid repeats or the outer cap is reached.
DetectorResult iterative_ce_dd(const FrameParams& fp, const cvec& r, const Grid& x_p, int P,
                               const QamAlphabet& alphabet, double sigma_d2,
                               const DetectorConfig& cfg,
                               const EstimationResult* initial = nullptr);

}  // namespace ddisac
