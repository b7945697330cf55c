#pragma once

#include "ddisac/frame.hpp"
#include "ddisac/grid.hpp"

namespace ddisac {

// Domain transforms of the transmit/receive chain. All maps are unitary and
// column-major: vec(S) stacks columns, so a Grid's flat storage already *is*
// the time-domain sample order after the Heisenberg step.

// DD -> TF: X_tf = F_M X F_N^H
Grid isfft(const Grid& x_dd);

// TF -> DD: Y = F_M^H Y_tf F_N (exact inverse of isfft)
Grid sfft(const Grid& y_tf);

// TF -> time samples: S = F_M^H X_tf, returned as vec(S) of length M*N
cvec heisenberg(const Grid& x_tf);

// time samples -> TF: Y_tf = F_M * unvec(r); r must hold M*N samples (CP removed)
Grid wigner(const cvec& r, const FrameParams& fp);

// One cyclic prefix per frame: prepend/drop the last cp_len samples.
cvec add_cp(const cvec& s, const FrameParams& fp);
cvec remove_cp(const cvec& s_cp, const FrameParams& fp);

// Bandlimited circular interpolation of a block of samples by factor L
// (zero-padded DFT, band occupying bins 0..K-1). L = 1 returns the block.
cvec dirichlet_interpolate(const cvec& block, int L);

// L-times oversampling of a frame: each symbol (column) is interpolated on
// its own circular block, matching the per-symbol subcarrier synthesis. The
// result interleaves L offset streams; offset q is the fractional-delay
// phase ramp tau = -q/(L*M*delta_f) applied per symbol.
cvec oversample(const cvec& s, const FrameParams& fp, int L);

}  // namespace ddisac
