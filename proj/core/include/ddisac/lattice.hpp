#pragma once

#include "ddisac/frame.hpp"
#include "ddisac/grid.hpp"
#include "ddisac/qam.hpp"

namespace ddisac {

/**
 * Superimposed pilot placement: a single nonzero entry of amplitude
 * sqrt(M*N*sigma_p2) at delay-Doppler bin (l_p, k_p), zeros elsewhere.
 */
struct PilotConfig {
    int l_p = 0;
    int k_p = 0;
    double sigma_p2 = 0.0;  // average pilot power, in [0, 1)

    static PilotConfig centered(const FrameParams& fp, double sigma_p2) {
        return PilotConfig{fp.M / 2, fp.N / 2, sigma_p2};
    }
};

// Map bits onto the M x N data grid (column-major fill), E|X|^2 = sigma_d2.
Grid qam_map(const BitVec& bits, const QamAlphabet& alphabet, double sigma_d2,
             const FrameParams& fp);

// Per-symbol nearest-neighbour decision followed by the inverse Gray map.
BitVec qam_demap(const Grid& symbols, const QamAlphabet& alphabet, double sigma_d2);

// Hard-decide each entry of a DATA grid onto the scaled alphabet.
Grid qam_decide(const Grid& symbols, const QamAlphabet& alphabet, double sigma_d2);

// N-point DFT along the Doppler axis of each delay row (unitary).
Grid dft_spread(const Grid& data);

// Exact inverse of dft_spread.
Grid dft_despread(const Grid& dd);

Grid build_pilot_grid(const FrameParams& fp, const PilotConfig& pilot);

// Elementwise sum of the spread data grid and the pilot grid.
Grid superimpose(const Grid& x_dd, const Grid& x_p);

}  // namespace ddisac
