#include "ddisac/experiment/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "ddisac/analysis.hpp"
#include "ddisac/detect.hpp"

namespace ddisac::experiment {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

BitVec random_bits(Rng& rng, std::size_t n) {
    BitVec bits(n);
    for (auto& b : bits) b = rng.bit() ? 1 : 0;
    return bits;
}

ResultRecord make_record(const ExperimentConfig& cfg, std::string point, std::string metric,
                         double value, long trials = 1, double ci = 0.0, bool has_ci = false) {
    return ResultRecord{cfg.name, std::move(point), std::move(metric), value, trials, ci, has_ci};
}

void push_aggregate(std::vector<ResultRecord>& records, const ExperimentConfig& cfg,
                    const std::string& point, const std::string& metric,
                    const std::vector<double>& samples) {
    const Aggregate a = aggregate(samples);
    records.push_back(make_record(cfg, point, metric, a.mean, a.n, a.ci95, a.n > 1));
}

// ----------------------------------------------------------------------------
// papr / pa efficiency
// ----------------------------------------------------------------------------

std::vector<ResultRecord> run_papr(const ExperimentConfig& cfg, int threads) {
    const QamAlphabet alphabet = QamAlphabet::make(cfg.qam_order);
    std::vector<ResultRecord> records;

    for (std::size_t wi = 0; wi < cfg.waveforms.size(); ++wi) {
        const WaveformKind kind = cfg.waveforms[wi];
        const bool with_pilot = is_otfs_family(kind) && cfg.pilot.sigma_p2 > 0.0;
        const double sigma_d2 = with_pilot ? cfg.sigma_d2() : 1.0;

        std::vector<double> papr_samples(cfg.trials);
        parallel_trials(cfg.trials, threads, [&](int t) {
            Rng rng(Rng::derive(cfg.seed, wi * static_cast<std::uint64_t>(cfg.trials) + t));
            const BitVec bits = random_bits(rng, payload_bits(cfg.frame, alphabet));
            const ModulatedFrame frame =
                modulate(kind, bits, cfg.frame, alphabet, sigma_d2,
                         with_pilot ? &cfg.pilot : nullptr);
            papr_samples[t] =
                papr_db(oversample_waveform(frame, cfg.frame, cfg.frame.oversampling));
        });

        const std::string point = "waveform=" + waveform_name(kind);
        push_aggregate(records, cfg, point, "papr_mean_db", papr_samples);
        for (double p : {1e-1, 1e-2, 1e-3})
            records.push_back(make_record(cfg, point,
                                          "papr_db_at_ccdf_" + fmt(p), papr_at_ccdf(papr_samples, p),
                                          cfg.trials));

        for (const PaModel* model : {&kClassA, &kClassB}) {
            std::vector<double> eff(papr_samples.size());
            for (std::size_t i = 0; i < papr_samples.size(); ++i)
                eff[i] = pa_efficiency(papr_samples[i], *model);
            push_aggregate(records, cfg, point,
                           model == &kClassA ? "pa_eff_class_a_pct" : "pa_eff_class_b_pct", eff);
        }

        if (!cfg.papr_thresholds_db.empty()) {
            const CcdfTable table = papr_ccdf(papr_samples, cfg.papr_thresholds_db);
            for (const auto& pt : table.points)
                records.push_back(make_record(cfg, point + ";threshold_db=" + fmt(pt.threshold_db),
                                              "papr_ccdf", pt.prob, cfg.trials));
        }
    }
    return records;
}

// ----------------------------------------------------------------------------
// oobe
// ----------------------------------------------------------------------------

std::vector<ResultRecord> run_oobe(const ExperimentConfig& cfg, int threads) {
    const QamAlphabet alphabet = QamAlphabet::make(cfg.qam_order);
    const int L = cfg.frame.oversampling;
    const int nfft = cfg.psd_nfft > 0 ? cfg.psd_nfft : L * cfg.frame.frame_len();
    std::vector<ResultRecord> records;

    for (std::size_t wi = 0; wi < cfg.waveforms.size(); ++wi) {
        const WaveformKind kind = cfg.waveforms[wi];
        const bool with_pilot = is_otfs_family(kind) && cfg.pilot.sigma_p2 > 0.0;
        const double sigma_d2 = with_pilot ? cfg.sigma_d2() : 1.0;

        std::vector<cvec> pieces(cfg.trials);
        parallel_trials(cfg.trials, threads, [&](int t) {
            Rng rng(Rng::derive(cfg.seed, wi * static_cast<std::uint64_t>(cfg.trials) + t));
            const BitVec bits = random_bits(rng, payload_bits(cfg.frame, alphabet));
            const ModulatedFrame frame =
                modulate(kind, bits, cfg.frame, alphabet, sigma_d2,
                         with_pilot ? &cfg.pilot : nullptr);
            pieces[t] = transmit_stream(frame, cfg.frame, L);
        });

        cvec stream;
        for (const auto& p : pieces) stream.insert(stream.end(), p.begin(), p.end());
        const std::vector<double> psd = welch_psd_db(stream, nfft);
        const double shoulder = band_edge_shoulder_db(psd, L);

        const std::string point = "waveform=" + waveform_name(kind);
        records.push_back(make_record(cfg, point, "oobe_shoulder_db", shoulder, cfg.trials));

        const int step = std::max(1, nfft / 256);
        for (int i = 0; i < nfft; i += step)
            records.push_back(
                make_record(cfg, point + ";bin=" + std::to_string(i), "psd_db", psd[i], cfg.trials));
    }
    return records;
}

// ----------------------------------------------------------------------------
// ber (iterative channel estimation and data detection)
// ----------------------------------------------------------------------------

struct BerTrial {
    double ber = 0.0;
    double iterations = 0.0;
    double converged = 0.0;
    double converged_2_5 = 0.0;
};

std::vector<ResultRecord> run_ber(const ExperimentConfig& cfg, int threads) {
    const QamAlphabet alphabet = QamAlphabet::make(cfg.qam_order);
    const std::vector<double> pilot_powers =
        cfg.pilot_powers.empty() ? std::vector<double>{cfg.pilot.sigma_p2} : cfg.pilot_powers;
    const int P = cfg.channel.path_count();
    std::vector<ResultRecord> records;

    std::uint64_t point_index = 0;
    for (double sp2 : pilot_powers) {
        PilotConfig pilot = cfg.pilot;
        pilot.sigma_p2 = sp2;
        const double sigma_d2 = 1.0 - sp2;
        const Grid x_p = build_pilot_grid(cfg.frame, pilot);

        for (double snr : cfg.snr_db) {
            const double snr_lin = from_db10(snr);
            const double sigma_w2 = cfg.channel.sigma_h2 / snr_lin;

            DetectorConfig det_cfg;
            det_cfg.cg.lambda = 1.0 / snr_lin;

            std::vector<BerTrial> out(cfg.trials);
            const std::uint64_t base = point_index * static_cast<std::uint64_t>(cfg.trials);
            parallel_trials(cfg.trials, threads, [&](int t) {
                const std::uint64_t trial_seed = Rng::derive(cfg.seed, base + t);
                Rng rng(trial_seed);
                try {
                    const ChannelSpec spec = cfg.channel.realize(cfg.frame, rng);
                    const CddsOperator H(cfg.frame, spec);

                    const BitVec bits = random_bits(rng, payload_bits(cfg.frame, alphabet));
                    const Grid xd = qam_map(bits, alphabet, sigma_d2, cfg.frame);
                    const Grid x = superimpose(dft_spread(xd), x_p);
                    const cvec s = heisenberg(isfft(x));
                    const cvec r = add_awgn(H.apply(s), sigma_w2, rng);

                    const DetectorResult det =
                        iterative_ce_dd(cfg.frame, r, x_p, P, alphabet, sigma_d2, det_cfg);
                    const BitVec rx_bits = qam_demap(det.xd_hat, alphabet, sigma_d2);

                    out[t].ber = ber(bits, rx_bits);
                    out[t].iterations = det.iterations;
                    out[t].converged = det.converged ? 1.0 : 0.0;
                    out[t].converged_2_5 =
                        (det.converged && det.iterations >= 2 && det.iterations <= 5) ? 1.0 : 0.0;
                } catch (const std::exception& e) {
                    throw TrialError(e.what(), trial_seed);
                }
            });

            const std::string point = "sigma_p2=" + fmt(sp2) + ";snr_db=" + fmt(snr);
            std::vector<double> v(cfg.trials);
            auto collect = [&](auto member) {
                for (int t = 0; t < cfg.trials; ++t) v[t] = out[t].*member;
                return v;
            };
            push_aggregate(records, cfg, point, "ber", collect(&BerTrial::ber));
            push_aggregate(records, cfg, point, "outer_iterations",
                           collect(&BerTrial::iterations));
            push_aggregate(records, cfg, point, "converged_fraction",
                           collect(&BerTrial::converged));
            push_aggregate(records, cfg, point, "converged_in_2_to_5_fraction",
                           collect(&BerTrial::converged_2_5));
            ++point_index;
        }
    }
    return records;
}

// ----------------------------------------------------------------------------
// sense-active
// ----------------------------------------------------------------------------

std::vector<ResultRecord> run_sense_active(const ExperimentConfig& cfg, int threads) {
    const QamAlphabet alphabet = QamAlphabet::make(cfg.qam_order);
    const int P = cfg.channel.path_count();
    const double sigma_d2 = cfg.sigma_d2();
    const Grid x_p = build_pilot_grid(cfg.frame, cfg.pilot);
    std::vector<ResultRecord> records;

    TpeConfig tpe;
    tpe.resolution_divisor = 4000.0;  // sub-millimeter quantization at these bandwidths

    std::uint64_t point_index = 0;
    for (double snr : cfg.snr_db) {
        const double sigma_w2 = cfg.channel.sigma_h2 / from_db10(snr);

        std::vector<std::vector<double>> range_truth(cfg.trials), range_est(cfg.trials);
        std::vector<std::vector<double>> vel_truth(cfg.trials), vel_est(cfg.trials);
        const std::uint64_t base = point_index * static_cast<std::uint64_t>(cfg.trials);
        parallel_trials(cfg.trials, threads, [&](int t) {
            const std::uint64_t trial_seed = Rng::derive(cfg.seed, base + t);
            Rng rng(trial_seed);
            try {
                const ChannelSpec spec = cfg.channel.realize(cfg.frame, rng);
                const CddsOperator H(cfg.frame, spec);

                const BitVec bits = random_bits(rng, payload_bits(cfg.frame, alphabet));
                const Grid x = superimpose(dft_spread(qam_map(bits, alphabet, sigma_d2, cfg.frame)),
                                           x_p);
                const cvec s = heisenberg(isfft(x));
                const cvec r = add_awgn(H.apply(s), sigma_w2, rng);
                const cvec y = sfft(wigner(r, cfg.frame)).values();

                const EstimationResult est = tpe_estimate(cfg.frame, y, x, P, tpe);
                for (const auto& path : spec.paths) {
                    const auto [rr, vv] =
                        to_range_velocity(path.tau, path.nu, cfg.frame.f_c, spec.mode);
                    range_truth[t].push_back(rr);
                    vel_truth[t].push_back(vv);
                }
                for (const auto& tgt : est.targets) {
                    const auto [rr, vv] =
                        to_range_velocity(tgt.tau, tgt.nu, cfg.frame.f_c, spec.mode);
                    range_est[t].push_back(rr);
                    vel_est[t].push_back(vv);
                }
            } catch (const std::exception& e) {
                throw TrialError(e.what(), trial_seed);
            }
        });

        const std::string point = "snr_db=" + fmt(snr);
        records.push_back(make_record(cfg, point, "range_rmse_m",
                                      rmse_matched(range_truth, range_est), cfg.trials));
        records.push_back(make_record(cfg, point, "velocity_rmse_mps",
                                      rmse_matched(vel_truth, vel_est), cfg.trials));
        ++point_index;
    }
    return records;
}

// ----------------------------------------------------------------------------
// sense-passive (joint passive sensing and data detection)
// ----------------------------------------------------------------------------

std::vector<ResultRecord> run_sense_passive(const ExperimentConfig& cfg, int threads) {
    const QamAlphabet alphabet = QamAlphabet::make(cfg.qam_order);
    const double r_s_truth = passive_target_range(cfg.passive.los_range_m,
                                                  cfg.passive.nlos_range_m,
                                                  cfg.passive.theta_rad);
    const std::vector<double> pilot_powers =
        cfg.pilot_powers.empty() ? std::vector<double>{cfg.pilot.sigma_p2} : cfg.pilot_powers;
    std::vector<ResultRecord> records;

    // LoS plus one reflected path, both static.
    ChannelConfig chan = cfg.channel;
    chan.type = ChannelConfig::Type::Targets;
    chan.mode = Mode::Passive;
    chan.targets = {{cfg.passive.los_range_m, 0.0}, {cfg.passive.nlos_range_m, 0.0}};

    std::uint64_t point_index = 0;
    for (double sp2 : pilot_powers) {
        PilotConfig pilot = cfg.pilot;
        pilot.sigma_p2 = sp2;
        const double sigma_d2 = 1.0 - sp2;
        const Grid x_p = build_pilot_grid(cfg.frame, pilot);

        for (double snr : cfg.snr_db) {
            const double snr_lin = from_db10(snr);
            const double sigma_w2 = chan.sigma_h2 / snr_lin;
            DetectorConfig det_cfg;
            det_cfg.cg.lambda = 1.0 / snr_lin;
            det_cfg.tpe.resolution_divisor = 4000.0;

            std::vector<double> sq_err(cfg.trials), bers(cfg.trials);
            const std::uint64_t base = point_index * static_cast<std::uint64_t>(cfg.trials);
            parallel_trials(cfg.trials, threads, [&](int t) {
                const std::uint64_t trial_seed = Rng::derive(cfg.seed, base + t);
                Rng rng(trial_seed);
                try {
                    const ChannelSpec spec = chan.realize(cfg.frame, rng);
                    const CddsOperator H(cfg.frame, spec);

                    const BitVec bits = random_bits(rng, payload_bits(cfg.frame, alphabet));
                    const Grid x = superimpose(
                        dft_spread(qam_map(bits, alphabet, sigma_d2, cfg.frame)), x_p);
                    const cvec s = heisenberg(isfft(x));
                    const cvec r = add_awgn(H.apply(s), sigma_w2, rng);

                    const DetectorResult det =
                        iterative_ce_dd(cfg.frame, r, x_p, 2, alphabet, sigma_d2, det_cfg);
                    bers[t] = ber(bits, qam_demap(det.xd_hat, alphabet, sigma_d2));

                    double r0 = det.channel.targets[0].tau * kSpeedOfLight;
                    double r1 = det.channel.targets[1].tau * kSpeedOfLight;
                    if (r0 > r1) std::swap(r0, r1);
                    const double r_s_hat =
                        passive_target_range(r0, r1, cfg.passive.theta_rad);
                    sq_err[t] = (r_s_hat - r_s_truth) * (r_s_hat - r_s_truth);
                } catch (const std::exception& e) {
                    throw TrialError(e.what(), trial_seed);
                }
            });

            const std::string point = "sigma_p2=" + fmt(sp2) + ";snr_db=" + fmt(snr);
            double mse = 0.0;
            for (double e : sq_err) mse += e;
            records.push_back(make_record(cfg, point, "target_range_rmse_m",
                                          std::sqrt(mse / cfg.trials), cfg.trials));
            push_aggregate(records, cfg, point, "ber", bers);
            ++point_index;
        }
    }
    return records;
}

// ----------------------------------------------------------------------------
// power-opt
// ----------------------------------------------------------------------------

std::vector<ResultRecord> run_power_opt(const ExperimentConfig& cfg, int) {
    const int P = cfg.channel.path_count();
    std::vector<ResultRecord> records;
    for (double snr : cfg.snr_db) {
        const double sigma_w2 = cfg.channel.sigma_h2 / from_db10(snr);
        const PilotPowerResult opt =
            optimize_pilot_power(cfg.channel.sigma_h2, sigma_w2, P, cfg.frame.M, cfg.frame.N);
        const std::string point = "snr_db=" + fmt(snr);
        records.push_back(make_record(cfg, point, "sigma_p2_opt", opt.sigma_p2));
        records.push_back(make_record(cfg, point, "sinr_db_at_opt", db10(opt.sinr)));
        if (opt.degenerate)
            records.push_back(make_record(cfg, point, "degenerate_flat_objective", 1.0));
    }
    return records;
}

}  // namespace

Aggregate aggregate(const std::vector<double>& samples) {
    Aggregate a;
    a.n = static_cast<long>(samples.size());
    if (samples.empty()) return a;
    double sum = 0.0;
    for (double v : samples) sum += v;
    a.mean = sum / static_cast<double>(a.n);
    if (a.n > 1) {
        double ss = 0.0;
        for (double v : samples) ss += (v - a.mean) * (v - a.mean);
        const double sd = std::sqrt(ss / static_cast<double>(a.n - 1));
        a.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(a.n));
    }
    return a;
}

void parallel_trials(int trials, int threads, const std::function<void(int)>& body) {
    if (threads < 1) threads = 1;
    if (threads == 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const int n = std::min(threads, trials);
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

RunOutput run(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    RunOutput out;
    switch (cfg.kind) {
        case Kind::Papr: out.records = run_papr(cfg, threads); break;
        case Kind::Oobe: out.records = run_oobe(cfg, threads); break;
        case Kind::Ber: out.records = run_ber(cfg, threads); break;
        case Kind::SenseActive: out.records = run_sense_active(cfg, threads); break;
        case Kind::SensePassive: out.records = run_sense_passive(cfg, threads); break;
        case Kind::PowerOpt: out.records = run_power_opt(cfg, threads); break;
    }
    return out;
}

void write_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "experiment,point,metric,value,trials,ci95\n";
    for (const auto& r : records) {
        out << r.experiment << ',' << r.point << ',' << r.metric << ',' << fmt(r.value) << ','
            << r.trials << ',' << (r.has_ci ? fmt(r.ci95) : std::string()) << '\n';
    }
}

void write_summary(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records,
                   const std::string& path) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_to_json(cfg));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json rec = {{"point", r.point}, {"metric", r.metric}, {"value", r.value},
                              {"trials", r.trials}};
        if (r.has_ci) rec["ci95"] = r.ci95;
        arr.push_back(rec);
    }
    j["results"] = arr;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_summary: cannot open " + path);
    out << j.dump(2) << '\n';
}

std::vector<std::string> run_to_files(const ExperimentConfig& cfg, int threads) {
    const RunOutput output = run(cfg, threads);
    std::filesystem::create_directories(cfg.out);
    const std::string csv = cfg.out + "/" + cfg.name + "_results.csv";
    const std::string summary = cfg.out + "/" + cfg.name + "_summary.json";
    write_csv(output.records, csv);
    write_summary(cfg, output.records, summary);
    return {csv, summary};
}

}  // namespace ddisac::experiment
