// Criteria 2, 4, 5, 6: transform unitarity and loopback, the PAPR gap, the
// PA-efficiency deltas and the out-of-band emission gap.

#include <cmath>
#include <vector>

#include "dense.hpp"
#include "ddisac/analysis.hpp"
#include "ddisac/baselines.hpp"
#include "ddisac/detect.hpp"
#include "ddisac/rng.hpp"
#include "harness.hpp"

using namespace ddisac;

namespace {

BitVec random_bits(Rng& rng, std::size_t n) {
    BitVec b(n);
    for (auto& x : b) x = rng.bit() ? 1 : 0;
    return b;
}

const acceptance::Register c2{2, "transform unitarity, round trips and noiseless loopback",
                              [](acceptance::Context& ctx) {
    Rng rng(1002);
    double worst_norm = 0.0, worst_round = 0.0;
    for (const auto [m, n] : {std::pair{8, 4}, {16, 8}, {64, 16}}) {
        const FrameParams fp = make_frame(m, n, 1.92e6, 4, 1.4e11, 4);
        Grid x(fp.M, fp.N, Domain::DelayDoppler);
        for (auto& v : x.values()) v = rng.cnormal(1.0);

        const Grid tf = isfft(x);
        worst_norm = std::max(worst_norm, std::abs(std::sqrt(energy(tf.values())) -
                                                   std::sqrt(energy(x.values()))));
        worst_round =
            std::max(worst_round, oracle::max_abs_diff(sfft(tf).values(), x.values()));

        const cvec s = heisenberg(tf);
        worst_norm = std::max(worst_norm,
                              std::abs(std::sqrt(energy(s)) - std::sqrt(energy(x.values()))));
        worst_round =
            std::max(worst_round, oracle::max_abs_diff(wigner(s, fp).values(), tf.values()));

        const Grid data = x.retagged(Domain::Data);
        worst_round = std::max(worst_round, oracle::max_abs_diff(
                                                dft_despread(dft_spread(data)).values(),
                                                data.values()));
    }
    ctx.check_less(worst_norm, 1e-12, "unitarity (norm preservation)");
    ctx.check_less(worst_round, 1e-12, "round trips (isfft/sfft, heisenberg/wigner, spread)");

    // Full noiseless chain over an identity channel recovers the bits exactly,
    // CP stages included, for every waveform kind.
    const FrameParams fp = make_frame(64, 16, 1.92e6, 16, 1.4e11, 4);
    const auto alphabet = QamAlphabet::make(4);
    ChannelSpec ident;
    ident.paths = {{cplx(1.0, 0.0), 0.0, 0.0}};
    const CddsOperator H(fp, ident);
    const PilotConfig pilot = PilotConfig::centered(fp, 0.06);

    bool all_exact = true;
    for (auto kind : {WaveformKind::Ofdm, WaveformKind::DftSOfdm, WaveformKind::Otfs,
                      WaveformKind::DftSOtfs}) {
        const bool with_pilot = is_otfs_family(kind);
        const double sd2 = with_pilot ? 1.0 - pilot.sigma_p2 : 1.0;
        const BitVec bits = random_bits(rng, payload_bits(fp, alphabet));
        const ModulatedFrame tx =
            modulate(kind, bits, fp, alphabet, sd2, with_pilot ? &pilot : nullptr);
        // CP stages around the (frame-circular) channel operator.
        const cvec rx = H.apply(remove_cp(add_cp(tx.samples, fp), fp));
        const BitVec out =
            demodulate(kind, rx, fp, alphabet, sd2, with_pilot ? &pilot : nullptr);
        if (out != bits) all_exact = false;
    }
    ctx.check(all_exact, "noiseless modulate -> channel(identity) -> demodulate is bit exact");
}};

struct PaprEnsembles {
    std::vector<double> otfs, dfts_otfs, ofdm, dfts_ofdm;
};

PaprEnsembles papr_ensembles(int frames, int threads) {
    const FrameParams fp = make_frame(64, 16, 1.92e6, 16, 1.4e11, 4);
    const auto alphabet = QamAlphabet::make(4);
    PaprEnsembles out;
    out.otfs.resize(frames);
    out.dfts_otfs.resize(frames);
    out.ofdm.resize(frames);
    out.dfts_ofdm.resize(frames);

    acceptance::parallel_for(frames, threads, [&](int t) {
        Rng rng(Rng::derive(2024, t));
        const BitVec bits = random_bits(rng, payload_bits(fp, alphabet));
        auto papr_of = [&](WaveformKind kind) {
            const ModulatedFrame frame = modulate(kind, bits, fp, alphabet, 1.0);
            return papr_db(oversample_waveform(frame, fp, 4));
        };
        out.otfs[t] = papr_of(WaveformKind::Otfs);
        out.dfts_otfs[t] = papr_of(WaveformKind::DftSOtfs);
        out.ofdm[t] = papr_of(WaveformKind::Ofdm);
        out.dfts_ofdm[t] = papr_of(WaveformKind::DftSOfdm);
    });
    return out;
}

const acceptance::Register c4{4, "PAPR gap at CCDF 1e-3 (M=64, N=16, 4-QAM, L=4, 1e5 frames)",
                              [](acceptance::Context& ctx) {
    const int frames = 100000;
    const PaprEnsembles e = papr_ensembles(frames, ctx.threads);

    const double q_otfs = papr_at_ccdf(e.otfs, 1e-3);
    const double q_dfts_otfs = papr_at_ccdf(e.dfts_otfs, 1e-3);
    const double q_ofdm = papr_at_ccdf(e.ofdm, 1e-3);
    const double q_dfts_ofdm = papr_at_ccdf(e.dfts_ofdm, 1e-3);
    ctx.note("PAPR@1e-3: otfs " + std::to_string(q_otfs) + " dB, dft-s-otfs " +
             std::to_string(q_dfts_otfs) + " dB, ofdm " + std::to_string(q_ofdm) +
             " dB, dft-s-ofdm " + std::to_string(q_dfts_ofdm) + " dB");

    ctx.check_close(q_otfs - q_dfts_otfs, 3.0, 0.7, "OTFS minus DFT-s-OTFS at CCDF 1e-3");
    ctx.check_close(q_dfts_otfs - q_dfts_ofdm, 0.0, 0.5,
                    "DFT-s-OTFS minus DFT-s-OFDM at CCDF 1e-3");

    // Median ordering over the ensemble.
    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    ctx.check(median(e.dfts_otfs) < median(e.otfs),
              "median PAPR(DFT-s-OTFS) < median PAPR(OTFS)");
}};

const acceptance::Register c5{5, "PA efficiency deltas over the criterion-4 ensemble",
                              [](acceptance::Context& ctx) {
    const int frames = 100000;
    const PaprEnsembles e = papr_ensembles(frames, ctx.threads);

    auto mean_eff = [](const std::vector<double>& papr, const PaModel& model) {
        double acc = 0.0;
        for (double v : papr) acc += pa_efficiency(v, model);
        return acc / static_cast<double>(papr.size());
    };
    const double da = mean_eff(e.dfts_otfs, kClassA) - mean_eff(e.otfs, kClassA);
    const double db = mean_eff(e.dfts_otfs, kClassB) - mean_eff(e.otfs, kClassB);
    ctx.check_close(da, 7.0, 2.0, "class A mean-efficiency improvement (points)");
    ctx.check_close(db, 10.0, 2.0, "class B mean-efficiency improvement (points)");
}};

const acceptance::Register c6{6, "OOBE gap at the band edge (M=128, N=32)",
                              [](acceptance::Context& ctx) {
    const FrameParams fp = make_frame(128, 32, 1.92e6, 16, 1.4e11, 4);
    const auto alphabet = QamAlphabet::make(4);
    const int frames = 150;
    const int L = 4;
    const int nfft = L * fp.frame_len();

    auto shoulder_of = [&](WaveformKind kind, std::uint64_t seed) {
        std::vector<cvec> pieces(frames);
        acceptance::parallel_for(frames, ctx.threads, [&](int t) {
            Rng rng(Rng::derive(seed, t));
            const BitVec bits = random_bits(rng, payload_bits(fp, alphabet));
            pieces[t] = transmit_stream(modulate(kind, bits, fp, alphabet, 1.0), fp, L);
        });
        cvec stream;
        stream.reserve(pieces.size() * pieces[0].size());
        for (auto& p : pieces) stream.insert(stream.end(), p.begin(), p.end());
        return band_edge_shoulder_db(welch_psd_db(stream, nfft), L);
    };

    const double s_otfs = shoulder_of(WaveformKind::Otfs, 61);
    const double s_dfts_otfs = shoulder_of(WaveformKind::DftSOtfs, 62);
    const double s_ofdm = shoulder_of(WaveformKind::Ofdm, 63);
    const double s_dfts_ofdm = shoulder_of(WaveformKind::DftSOfdm, 64);
    ctx.note("shoulders (dB): otfs " + std::to_string(s_otfs) + ", dft-s-otfs " +
             std::to_string(s_dfts_otfs) + ", ofdm " + std::to_string(s_ofdm) +
             ", dft-s-ofdm " + std::to_string(s_dfts_ofdm));

    const double gap = 0.5 * (s_ofdm + s_dfts_ofdm) - 0.5 * (s_otfs + s_dfts_otfs);
    ctx.check_close(gap, 10.0, 3.0, "OFDM-family shoulder minus OTFS-family shoulder");
}};

}  // namespace
