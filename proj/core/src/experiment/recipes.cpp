#include "ddisac/experiment/recipes.hpp"

#include <cmath>

namespace ddisac::experiment {

namespace {

const std::vector<std::string> kRecipeNames = {
    "fig5_papr",         "fig6_pa_eff",  "fig7_oobe",      "fig8_ber140",
    "fig9_power_opt",    "fig10_ber300", "fig11_range_rmse",
    "fig12_velocity_rmse", "fig13_passive"};

std::vector<WaveformKind> all_waveforms() {
    return {WaveformKind::Ofdm, WaveformKind::DftSOfdm, WaveformKind::Otfs,
            WaveformKind::DftSOtfs};
}

ExperimentConfig base(Kind kind, const std::string& name, int M, int N, double f_c, int cp_len) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.name = name;
    cfg.frame = make_frame(M, N, 1.92e6, cp_len, f_c, 4);
    cfg.seed = 42;
    return cfg;
}

// Indoor three-path time-invariant channel: a dominant path and two weaker
// reflections at fractional delays, unit total power.
void set_three_path_channel(ExperimentConfig& cfg) {
    const double ts = cfg.frame.sample_period();
    cfg.channel.type = ChannelConfig::Type::Explicit;
    cfg.channel.sigma_h2 = 1.0;
    cfg.channel.explicit_paths = {
        {cplx(0.866025403784, 0.0), 0.3 * ts, 0.0},
        {cplx(0.273861278753, 0.273861278753), 3.6 * ts, 0.0},
        {cplx(-0.158113883008, 0.273861278753), 7.2 * ts, 0.0},
    };
}

}  // namespace

std::vector<std::string> list_recipes() { return kRecipeNames; }

ExperimentConfig recipe(const std::string& name) {
    if (name == "fig5_papr") {
        auto cfg = base(Kind::Papr, name, 64, 16, 0.3e12, 16);
        cfg.waveforms = all_waveforms();
        cfg.trials = 3000;
        for (double thr = 4.0; thr <= 13.0 + 1e-9; thr += 0.5)
            cfg.papr_thresholds_db.push_back(thr);
        return cfg;
    }
    if (name == "fig6_pa_eff") {
        auto cfg = base(Kind::Papr, name, 64, 16, 0.3e12, 16);
        cfg.waveforms = all_waveforms();
        cfg.trials = 2000;
        return cfg;
    }
    if (name == "fig7_oobe") {
        auto cfg = base(Kind::Oobe, name, 128, 32, 0.3e12, 16);
        cfg.waveforms = all_waveforms();
        cfg.trials = 60;  // frames per waveform
        return cfg;
    }
    if (name == "fig8_ber140") {
        auto cfg = base(Kind::Ber, name, 64, 16, 140e9, 8);
        set_three_path_channel(cfg);
        cfg.pilot = PilotConfig::centered(cfg.frame, 0.06);
        cfg.pilot_given = true;
        cfg.pilot_powers = {0.02, 0.06, 0.14};
        cfg.snr_db = {9, 12, 15};
        cfg.trials = 12;
        return cfg;
    }
    if (name == "fig9_power_opt") {
        // (M, N, P, sigma_h2) = (64, 16, 3, 1) reproduces the reference
        // optima 0.0403 at 15 dB and 0.0633 at 21 dB.
        auto cfg = base(Kind::PowerOpt, name, 64, 16, 140e9, 16);
        cfg.channel.type = ChannelConfig::Type::Random;
        cfg.channel.paths = 3;
        cfg.channel.sigma_h2 = 1.0;
        for (double snr = 0.0; snr <= 25.0 + 1e-9; snr += 1.0) cfg.snr_db.push_back(snr);
        return cfg;
    }
    if (name == "fig10_ber300") {
        auto cfg = base(Kind::Ber, name, 64, 16, 0.3e12, 8);
        cfg.channel.type = ChannelConfig::Type::Random;
        cfg.channel.paths = 3;
        cfg.channel.gains = GainModel::Rayleigh;
        cfg.channel.tau_max_bins = 6.0;
        cfg.channel.max_velocity_mps = 138.9;  // 500 km/h
        cfg.pilot = PilotConfig::centered(cfg.frame, 0.06);
        cfg.pilot_given = true;
        cfg.pilot_powers = {0.06, 0.14};
        cfg.snr_db = {6, 9, 12, 15};
        cfg.trials = 10;
        return cfg;
    }
    if (name == "fig11_range_rmse" || name == "fig12_velocity_rmse") {
        auto cfg = base(Kind::SenseActive, name, 64, 16, 0.3e12, 48);
        cfg.channel.type = ChannelConfig::Type::Targets;
        cfg.channel.mode = Mode::Active;
        cfg.channel.gains = GainModel::FixedMagnitude;
        cfg.channel.targets = {{10.0, 10.0}, {30.0, 20.0}, {50.0, 30.0}};
        cfg.pilot = PilotConfig::centered(cfg.frame, 0.0);
        cfg.snr_db = {-5, 0, 5, 10, 15};
        cfg.trials = 40;
        return cfg;
    }
    if (name == "fig13_passive") {
        auto cfg = base(Kind::SensePassive, name, 64, 16, 0.3e12, 8);
        cfg.channel.gains = GainModel::FixedMagnitude;
        cfg.passive = PassiveGeometry{5.0, 8.0, kPi / 3.0};
        cfg.pilot = PilotConfig::centered(cfg.frame, 0.14);
        cfg.pilot_given = true;
        cfg.pilot_powers = {0.02, 0.06, 0.14};
        cfg.snr_db = {3, 9, 15};
        cfg.trials = 8;
        return cfg;
    }
    throw ConfigError("unknown recipe '" + name + "'");
}

}  // namespace ddisac::experiment
