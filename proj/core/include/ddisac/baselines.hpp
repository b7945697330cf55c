#pragma once

#include <string>

#include "ddisac/channel.hpp"
#include "ddisac/lattice.hpp"
#include "ddisac/modem.hpp"
#include "ddisac/sensing.hpp"

namespace ddisac {

// Reference waveforms sharing the numerology, channel and metrics harness.
enum class WaveformKind { Ofdm, DftSOfdm, Otfs, DftSOtfs };

bool is_otfs_family(WaveformKind kind);
std::string waveform_name(WaveformKind kind);
WaveformKind waveform_from_name(const std::string& name);

struct ModulatedFrame {
    WaveformKind kind;
    cvec samples;  // critically sampled frame of M*N samples, no CP
};

std::size_t payload_bits(const FrameParams& fp, const QamAlphabet& alphabet);

// Superimposed pilots are a delay-Doppler construct; passing one for the
// OFDM family is an error.
ModulatedFrame modulate(WaveformKind kind, const BitVec& bits, const FrameParams& fp,
                        const QamAlphabet& alphabet, double sigma_d2,
                        const PilotConfig* pilot = nullptr);

// Noiseless inverse of modulate (exact loopback for every kind).
BitVec demodulate(WaveformKind kind, const cvec& samples, const FrameParams& fp,
                  const QamAlphabet& alphabet, double sigma_d2,
                  const PilotConfig* pilot = nullptr);

// Continuous-time reconstruction for PAPR: per-symbol circular interpolation
// by L, identical mechanism for every kind (no CP).
cvec oversample_waveform(const ModulatedFrame& frame, const FrameParams& fp, int L);

// Transmit stream for spectral measurements, CPs included, at oversampling L.
// The OTFS family is reconstructed as one frame-coherent block with a single
// CP (the frame-circular signal its channel model assumes); the OFDM family
// is reconstructed symbol by symbol with one CP per symbol.
cvec transmit_stream(const ModulatedFrame& frame, const FrameParams& fp, int L);

// Received TF grid for the OFDM family over a multipath channel: per-symbol
// circular fractional delay (CP absorbed) plus intra-symbol Doppler mixing
// and the symbol-to-symbol Doppler phase progression. Exact for tau within
// the per-symbol CP.
Grid ofdm_receive_tf(const FrameParams& fp, const ChannelSpec& spec, const Grid& x_tf,
                     double sigma_w2, Rng& rng);

/**
 * Sensing front-end per family. For the OTFS family x/y are delay-Doppler
 * grids and estimation delegates to the two-phase estimator. For the OFDM
 * family x/y are time-frequency grids and the classic elementwise-quotient
 * profile is used: a zero-padded 2D transform for the coarse peak, golden
 * refinement, and successive cancellation. The quotient model deliberately
 * ignores intra-symbol ICI, so its accuracy degrades with Doppler.
 */
EstimationResult sense_with(WaveformKind kind, const FrameParams& fp, const Grid& x_tx,
                            const Grid& y_rx, int P, const TpeConfig& cfg = {});

}  // namespace ddisac
