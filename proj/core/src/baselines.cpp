#include "ddisac/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "ddisac/fft.hpp"

namespace ddisac {

bool is_otfs_family(WaveformKind kind) {
    return kind == WaveformKind::Otfs || kind == WaveformKind::DftSOtfs;
}

std::string waveform_name(WaveformKind kind) {
    switch (kind) {
        case WaveformKind::Ofdm: return "ofdm";
        case WaveformKind::DftSOfdm: return "dft-s-ofdm";
        case WaveformKind::Otfs: return "otfs";
        case WaveformKind::DftSOtfs: return "dft-s-otfs";
    }
    throw std::logic_error("waveform_name: unreachable");
}

WaveformKind waveform_from_name(const std::string& name) {
    if (name == "ofdm") return WaveformKind::Ofdm;
    if (name == "dft-s-ofdm") return WaveformKind::DftSOfdm;
    if (name == "otfs") return WaveformKind::Otfs;
    if (name == "dft-s-otfs") return WaveformKind::DftSOtfs;
    throw std::invalid_argument("unknown waveform kind: " + name);
}

std::size_t payload_bits(const FrameParams& fp, const QamAlphabet& alphabet) {
    return static_cast<std::size_t>(fp.frame_len()) * alphabet.bits_per_symbol();
}

ModulatedFrame modulate(WaveformKind kind, const BitVec& bits, const FrameParams& fp,
                        const QamAlphabet& alphabet, double sigma_d2, const PilotConfig* pilot) {
    if (pilot && !is_otfs_family(kind))
        throw std::invalid_argument("modulate: superimposed pilots only apply to the OTFS family");

    const Grid data = qam_map(bits, alphabet, sigma_d2, fp);

    switch (kind) {
        case WaveformKind::Otfs:
        case WaveformKind::DftSOtfs: {
            Grid x = (kind == WaveformKind::DftSOtfs) ? dft_spread(data)
                                                      : data.retagged(Domain::DelayDoppler);
            if (pilot) x = superimpose(x, build_pilot_grid(fp, *pilot));
            return ModulatedFrame{kind, heisenberg(isfft(x))};
        }
        case WaveformKind::Ofdm:
            return ModulatedFrame{kind, heisenberg(data.retagged(Domain::TimeFreq))};
        case WaveformKind::DftSOfdm: {
            // M-point DFT precoding per symbol, then the per-symbol IDFT.
            Grid tf(fp.M, fp.N, Domain::TimeFreq, data.values());
            fft::columns(tf.values().data(), fp.M, fp.N, true);
            fft::scale(tf.values(), 1.0 / std::sqrt(static_cast<double>(fp.M)));
            return ModulatedFrame{kind, heisenberg(tf)};
        }
    }
    throw std::logic_error("modulate: unreachable");
}

BitVec demodulate(WaveformKind kind, const cvec& samples, const FrameParams& fp,
                  const QamAlphabet& alphabet, double sigma_d2, const PilotConfig* pilot) {
    if (pilot && !is_otfs_family(kind))
        throw std::invalid_argument("demodulate: superimposed pilots only apply to the OTFS family");

    Grid tf = wigner(samples, fp);
    switch (kind) {
        case WaveformKind::Otfs:
        case WaveformKind::DftSOtfs: {
            Grid dd = sfft(tf);
            if (pilot) {
                const Grid p = build_pilot_grid(fp, *pilot);
                for (std::size_t i = 0; i < dd.values().size(); ++i)
                    dd.values()[i] -= p.values()[i];
            }
            Grid data = (kind == WaveformKind::DftSOtfs) ? dft_despread(dd)
                                                         : dd.retagged(Domain::Data);
            return qam_demap(data, alphabet, sigma_d2);
        }
        case WaveformKind::Ofdm:
            return qam_demap(tf.retagged(Domain::Data), alphabet, sigma_d2);
        case WaveformKind::DftSOfdm: {
            fft::columns(tf.values().data(), fp.M, fp.N, false);
            fft::scale(tf.values(), 1.0 / std::sqrt(static_cast<double>(fp.M)));
            return qam_demap(tf.retagged(Domain::Data), alphabet, sigma_d2);
        }
    }
    throw std::logic_error("demodulate: unreachable");
}

cvec oversample_waveform(const ModulatedFrame& frame, const FrameParams& fp, int L) {
    return oversample(frame.samples, fp, L);
}

cvec transmit_stream(const ModulatedFrame& frame, const FrameParams& fp, int L) {
    const int cp = fp.cp_len * L;
    if (is_otfs_family(frame.kind)) {
        // One frame-coherent block, one CP.
        cvec up = dirichlet_interpolate(frame.samples, L);
        cvec out;
        out.reserve(up.size() + cp);
        out.insert(out.end(), up.end() - cp, up.end());
        out.insert(out.end(), up.begin(), up.end());
        return out;
    }

    // Per-symbol blocks, one CP each.
    const int blk = fp.M * L;
    cvec out;
    out.reserve(static_cast<std::size_t>(fp.N) * (blk + cp));
    cvec sym(fp.M);
    for (int n = 0; n < fp.N; ++n) {
        std::copy(frame.samples.begin() + static_cast<std::size_t>(n) * fp.M,
                  frame.samples.begin() + static_cast<std::size_t>(n + 1) * fp.M, sym.begin());
        cvec up = dirichlet_interpolate(sym, L);
        out.insert(out.end(), up.end() - cp, up.end());
        out.insert(out.end(), up.begin(), up.end());
    }
    return out;
}

Grid ofdm_receive_tf(const FrameParams& fp, const ChannelSpec& spec, const Grid& x_tf,
                     double sigma_w2, Rng& rng) {
    x_tf.require(Domain::TimeFreq, "ofdm_receive_tf");
    x_tf.require_shape(fp.M, fp.N, "ofdm_receive_tf");

    const int M = fp.M;
    const double Ts = fp.sample_period();
    const double t_sym = (M + fp.cp_len) * Ts;  // per-symbol duration incl. CP

    Grid rx(fp.M, fp.N, Domain::TimeFreq);
    cvec tx_time(M), acc(M), delayed(M);
    for (int n = 0; n < fp.N; ++n) {
        // Time-domain symbol block.
        for (int m = 0; m < M; ++m) tx_time[m] = x_tf.at(m, n);
        fft::transform_many(tx_time.data(), M, 1, 1, 0, false);
        fft::scale(tx_time.data(), M, 1.0 / std::sqrt(static_cast<double>(M)));

        std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
        for (const auto& path : spec.paths) {
            // Circular fractional delay: bin m picks up exp(-j 2 pi m df tau).
            delayed = tx_time;
            fft::transform_many(delayed.data(), M, 1, 1, 0, true);
            for (int m = 0; m < M; ++m)
                delayed[m] *= std::polar(1.0, -kTwoPi * m * fp.delta_f * path.tau);
            fft::transform_many(delayed.data(), M, 1, 1, 0, false);
            fft::scale(delayed.data(), M, 1.0 / static_cast<double>(M));

            // Doppler: intra-symbol mixing plus the symbol-start phase.
            const double t0 = n * t_sym + fp.cp_len * Ts;
            for (int m = 0; m < M; ++m)
                acc[m] += path.alpha * std::polar(1.0, kTwoPi * path.nu * (t0 + m * Ts)) * delayed[m];
        }
        if (sigma_w2 > 0.0)
            for (int m = 0; m < M; ++m) acc[m] += rng.cnormal(sigma_w2);

        fft::transform_many(acc.data(), M, 1, 1, 0, true);
        fft::scale(acc.data(), M, 1.0 / std::sqrt(static_cast<double>(M)));
        for (int m = 0; m < M; ++m) rx.at(m, n) = acc[m];
    }
    return rx;
}

namespace {

// Matched-filter profile over the elementwise conjugate product
// Q[m,n] = Y[m,n] conj(X[m,n]): objective |sum Q e^{+j2pi m df tau}
// e^{-j2pi nu t_n}|^2 under the ICI-free model, which makes the single-path
// response alpha |X|^2 times the phase model. Avoids the noise blow-up a
// per-bin division would cause on low-amplitude precoded symbols.
struct QuotientProfile {
    const FrameParams& fp;
    double t_sym;

    cplx correlate(const Grid& q, double tau, double nu) const {
        cplx acc = 0.0;
        for (int n = 0; n < fp.N; ++n) {
            const double t0 = n * t_sym + fp.cp_len * fp.sample_period();
            const cplx sym_phase = std::polar(1.0, -kTwoPi * nu * t0);
            cplx row = 0.0;
            for (int m = 0; m < fp.M; ++m)
                row += q.at(m, n) * std::polar(1.0, kTwoPi * m * fp.delta_f * tau);
            acc += row * sym_phase;
        }
        return acc;
    }
};

EstimationResult sense_ofdm_quotient(const FrameParams& fp, const Grid& x_tf, const Grid& y_rx,
                                     int P, const TpeConfig& cfg) {
    const int M = fp.M, N = fp.N;
    const double Ts = fp.sample_period();
    const double t_sym = (M + fp.cp_len) * Ts;
    const QuotientProfile profile{fp, t_sym};

    Grid q(M, N, Domain::TimeFreq);
    double power = 0.0;
    for (int i = 0; i < M * N; ++i) {
        const cplx x = x_tf.values()[i];
        q.values()[i] = y_rx.values()[i] * std::conj(x);
        power += std::norm(x);
    }
    if (power <= 0.0) throw std::invalid_argument("sense_with: transmit grid carries no energy");

    // Coarse peak by zero-padded transforms: backward FFT over the delay
    // axis, forward FFT over the symbol axis (the constant per-symbol CP
    // phase offset drops out of the magnitude), then golden refinement.
    constexpr int kPad = 4;
    const int iters = phase2_iterations(cfg);

    EstimationResult result;
    const double q2_initial = energy(q.values());
    for (int target = 0; target < P; ++target) {
        const int mpad = M * kPad, npad = N * kPad;
        cvec padded(static_cast<std::size_t>(mpad) * npad, cplx(0.0, 0.0));
        for (int n = 0; n < N; ++n)
            for (int m = 0; m < M; ++m)
                padded[static_cast<std::size_t>(m) + static_cast<std::size_t>(n) * mpad] =
                    q.at(m, n);
        fft::columns(padded.data(), mpad, npad, false);  // delay profile per symbol
        fft::rows(padded.data(), mpad, npad, true);      // Doppler profile per delay

        double best = -1.0;
        double tau0 = 0.0, nu0 = 0.0;
        for (int li = 0; li < mpad; ++li) {
            for (int ki = -npad / 2; ki < npad / 2; ++ki) {
                const int kc = (ki + npad) % npad;
                const double v = std::norm(
                    padded[static_cast<std::size_t>(li) + static_cast<std::size_t>(kc) * mpad]);
                if (v > best) {
                    best = v;
                    tau0 = li / (static_cast<double>(mpad) * fp.delta_f);
                    nu0 = ki / (static_cast<double>(npad) * t_sym);
                }
            }
        }

        SearchRegion region{tau0 - 1.0 / (M * fp.delta_f), tau0 + 1.0 / (M * fp.delta_f),
                            nu0 - 1.0 / (N * t_sym), nu0 + 1.0 / (N * t_sym)};
        auto objective = [&](double tau, double nu) {
            return std::norm(profile.correlate(q, tau, nu));
        };
        const auto [tau_hat, nu_hat] = golden_max_2d(objective, region, iters);

        const cplx alpha_hat = profile.correlate(q, tau_hat, nu_hat) / power;
        for (int n = 0; n < N; ++n) {
            const double t0 = n * t_sym + fp.cp_len * Ts;
            for (int m = 0; m < M; ++m)
                q.at(m, n) -= alpha_hat * std::norm(x_tf.at(m, n)) *
                              std::polar(1.0, -kTwoPi * m * fp.delta_f * tau_hat +
                                                  kTwoPi * nu_hat * t0);
        }
        result.targets.push_back(TargetEstimate{alpha_hat, tau_hat, nu_hat});
    }
    result.residual_ratio = (q2_initial > 0.0) ? energy(q.values()) / q2_initial : 0.0;
    return result;
}

}  // namespace

EstimationResult sense_with(WaveformKind kind, const FrameParams& fp, const Grid& x_tx,
                            const Grid& y_rx, int P, const TpeConfig& cfg) {
    if (is_otfs_family(kind)) {
        x_tx.require(Domain::DelayDoppler, "sense_with");
        y_rx.require(Domain::DelayDoppler, "sense_with");
        return tpe_estimate(fp, y_rx.values(), x_tx, P, cfg);
    }
    x_tx.require(Domain::TimeFreq, "sense_with");
    y_rx.require(Domain::TimeFreq, "sense_with");
    return sense_ofdm_quotient(fp, x_tx, y_rx, P, cfg);
}

}  // namespace ddisac
