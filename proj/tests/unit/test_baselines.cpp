#include <doctest.h>

#include <cmath>

#include "dense.hpp"
#include "ddisac/analysis.hpp"
#include "ddisac/baselines.hpp"
#include "ddisac/rng.hpp"

using namespace ddisac;

namespace {

const FrameParams kFp = make_frame(32, 8, 1.92e6, 8, 0.3e12, 4);

BitVec random_bits(Rng& rng, std::size_t n) {
    BitVec b(n);
    for (auto& x : b) x = rng.bit() ? 1 : 0;
    return b;
}

const std::vector<WaveformKind> kAll = {WaveformKind::Ofdm, WaveformKind::DftSOfdm,
                                        WaveformKind::Otfs, WaveformKind::DftSOtfs};

}  // namespace

TEST_SUITE_BEGIN("baselines");

TEST_CASE("waveform names round trip") {
    for (auto kind : kAll) CHECK(waveform_from_name(waveform_name(kind)) == kind);
    CHECK_THROWS_AS(waveform_from_name("cdma"), std::invalid_argument);
}

TEST_CASE("noiseless loopback identity holds for every kind") {
    Rng rng(90);
    const auto alphabet = QamAlphabet::make(4);
    for (auto kind : kAll) {
        const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
        const ModulatedFrame frame = modulate(kind, bits, kFp, alphabet, 1.0);
        CHECK(demodulate(kind, frame.samples, kFp, alphabet, 1.0) == bits);
    }

    // OTFS family with superimposed pilots.
    const PilotConfig pilot = PilotConfig::centered(kFp, 0.08);
    for (auto kind : {WaveformKind::Otfs, WaveformKind::DftSOtfs}) {
        const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
        const ModulatedFrame frame = modulate(kind, bits, kFp, alphabet, 0.92, &pilot);
        CHECK(demodulate(kind, frame.samples, kFp, alphabet, 0.92, &pilot) == bits);
    }
}

TEST_CASE("pilots are rejected for the OFDM family") {
    Rng rng(91);
    const auto alphabet = QamAlphabet::make(4);
    const PilotConfig pilot = PilotConfig::centered(kFp, 0.05);
    const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
    CHECK_THROWS_AS(modulate(WaveformKind::Ofdm, bits, kFp, alphabet, 0.95, &pilot),
                    std::invalid_argument);
}

TEST_CASE("OTFS with an explicit spread equals DFT-s-OTFS bit-exactly") {
    Rng rng(92);
    const auto alphabet = QamAlphabet::make(4);
    const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));

    const ModulatedFrame direct = modulate(WaveformKind::DftSOtfs, bits, kFp, alphabet, 1.0);
    const Grid spread = dft_spread(qam_map(bits, alphabet, 1.0, kFp));
    const cvec manual = heisenberg(isfft(spread));
    CHECK(oracle::max_abs_diff(direct.samples, manual) == 0.0);
}

TEST_CASE("DFT-s-OFDM time samples are the QAM symbols themselves") {
    Rng rng(93);
    const auto alphabet = QamAlphabet::make(4);
    const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
    const ModulatedFrame frame = modulate(WaveformKind::DftSOfdm, bits, kFp, alphabet, 1.0);
    const Grid data = qam_map(bits, alphabet, 1.0, kFp);
    CHECK(oracle::max_abs_diff(frame.samples, data.values()) < 1e-12);

    // Hence the oversampled PAPR equals the constellation's own interpolated
    // PAPR rather than a multicarrier one (well below the OFDM level).
    const double p = papr_db(oversample_waveform(frame, kFp, 4));
    CHECK(p < 9.0);
}

TEST_CASE("an OFDM frame with one active subcarrier is a complex exponential per symbol") {
    const auto alphabet = QamAlphabet::make(4);
    Grid tf(kFp.M, kFp.N, Domain::TimeFreq);
    for (int n = 0; n < kFp.N; ++n) tf.at(5, n) = 1.0;
    const cvec s = heisenberg(tf);
    for (int n = 0; n < kFp.N; ++n)
        for (int l = 0; l < kFp.M; ++l) {
            const cplx expect =
                std::polar(1.0 / std::sqrt(static_cast<double>(kFp.M)), kTwoPi * 5.0 * l / kFp.M);
            CHECK(std::abs(s[l + n * kFp.M] - expect) < 1e-12);
        }
}

TEST_CASE("equal mean transmit power across kinds for the same payload") {
    Rng rng(94);
    const auto alphabet = QamAlphabet::make(16);
    const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
    const double reference = energy(modulate(kAll[0], bits, kFp, alphabet, 1.0).samples);
    for (auto kind : kAll) {
        const double e = energy(modulate(kind, bits, kFp, alphabet, 1.0).samples);
        CHECK(std::abs(e - reference) / reference < 1e-12);
    }
}

TEST_CASE("transmit stream shapes follow each family's CP convention") {
    Rng rng(95);
    const auto alphabet = QamAlphabet::make(4);
    const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
    const int L = 2;

    const cvec otfs = transmit_stream(modulate(WaveformKind::Otfs, bits, kFp, alphabet, 1.0),
                                      kFp, L);
    CHECK(otfs.size() == static_cast<std::size_t>(L) * (kFp.frame_len() + kFp.cp_len));

    const cvec ofdm = transmit_stream(modulate(WaveformKind::Ofdm, bits, kFp, alphabet, 1.0),
                                      kFp, L);
    CHECK(ofdm.size() == static_cast<std::size_t>(L) * kFp.N * (kFp.M + kFp.cp_len));

    // CP really is a cyclic prefix: it repeats the block tail.
    const int cpL = kFp.cp_len * L;
    const int blk = kFp.frame_len() * L;
    for (int i = 0; i < cpL; ++i) CHECK(otfs[i] == otfs[blk + i]);
}

TEST_CASE("ofdm receive matches the frame operator for a static common-delay channel") {
    // With nu = 0 and an integer delay, per-symbol circular convolution and
    // the quotient model agree exactly with the TF image of the channel.
    Rng rng(96);
    const auto alphabet = QamAlphabet::make(4);
    const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
    const Grid tf = qam_map(bits, alphabet, 1.0, kFp).retagged(Domain::TimeFreq);

    ChannelSpec spec;
    spec.paths = {{std::polar(0.9, 0.4), 2.0 * kFp.sample_period(), 0.0}};
    Rng noise_rng(1);
    const Grid rx = ofdm_receive_tf(kFp, spec, tf, 0.0, noise_rng);

    for (int n = 0; n < kFp.N; ++n)
        for (int m = 0; m < kFp.M; ++m) {
            const cplx h = spec.paths[0].alpha *
                           std::polar(1.0, -kTwoPi * m * kFp.delta_f * spec.paths[0].tau);
            CHECK(std::abs(rx.at(m, n) - h * tf.at(m, n)) < 1e-10);
        }
}

TEST_CASE("all kinds locate a static target to sub-bin accuracy noiselessly") {
    Rng rng(97);
    const auto alphabet = QamAlphabet::make(4);
    const double range_m = 11.0;
    const double bin_m = kSpeedOfLight / (2.0 * kFp.bandwidth());

    for (auto kind : kAll) {
        const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
        const ChannelSpec spec{
            {geometry_to_path(range_m, 0.0, kFp, Mode::Active)}, 1.0, Mode::Active};

        EstimationResult est;
        if (is_otfs_family(kind)) {
            const Grid x = (kind == WaveformKind::DftSOtfs)
                               ? dft_spread(qam_map(bits, alphabet, 1.0, kFp))
                               : qam_map(bits, alphabet, 1.0, kFp).retagged(Domain::DelayDoppler);
            const CddsOperator H(kFp, spec);
            const cvec r = H.apply(heisenberg(isfft(x)));
            const Grid y(kFp.M, kFp.N, Domain::DelayDoppler, sfft(wigner(r, kFp)).values());
            est = sense_with(kind, kFp, x, y, 1, {});
        } else {
            Grid tf = qam_map(bits, alphabet, 1.0, kFp).retagged(Domain::TimeFreq);
            if (kind == WaveformKind::DftSOfdm) {
                // precoding happens inside modulate; sensing works on the TF grid
                const ModulatedFrame frame = modulate(kind, bits, kFp, alphabet, 1.0);
                tf = wigner(frame.samples, kFp);
            }
            Rng noise_rng(2);
            const Grid rx = ofdm_receive_tf(kFp, spec, tf, 0.0, noise_rng);
            est = sense_with(kind, kFp, tf, rx, 1, {});
        }
        const auto [r_hat, v_hat] = to_range_velocity(est.targets[0].tau, est.targets[0].nu,
                                                      kFp.f_c, Mode::Active);
        CHECK(std::abs(r_hat - range_m) < 0.05 * bin_m);
        CHECK(std::abs(v_hat) < 0.5);
    }
}

TEST_CASE("quotient sensing degrades with strong Doppler while the OTFS path does not") {
    Rng rng(98);
    const auto alphabet = QamAlphabet::make(4);
    const double range_m = 11.0;

    auto ofdm_error = [&](double velocity) {
        const BitVec bits = random_bits(rng, payload_bits(kFp, alphabet));
        const Grid tf = qam_map(bits, alphabet, 1.0, kFp).retagged(Domain::TimeFreq);
        const ChannelSpec spec{
            {geometry_to_path(range_m, velocity, kFp, Mode::Active)}, 1.0, Mode::Active};
        Rng noise_rng(3);
        const Grid rx = ofdm_receive_tf(kFp, spec, tf, 0.0, noise_rng);
        const EstimationResult est = sense_with(WaveformKind::Ofdm, kFp, tf, rx, 1, {});
        const auto [r_hat, v_hat] =
            to_range_velocity(est.targets[0].tau, est.targets[0].nu, kFp.f_c, Mode::Active);
        return std::abs(r_hat - range_m);
    };

    const double slow = ofdm_error(2.0);
    const double fast = ofdm_error(80.0);  // ~nu/delta_f = 0.08 at 0.3 THz
    CHECK(fast > 5.0 * slow);
}

TEST_SUITE_END();
