#include "ddisac/experiment/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ddisac::experiment {

using nlohmann::json;

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Papr: return "papr";
        case Kind::Oobe: return "oobe";
        case Kind::Ber: return "ber";
        case Kind::SenseActive: return "sense-active";
        case Kind::SensePassive: return "sense-passive";
        case Kind::PowerOpt: return "power-opt";
    }
    throw std::logic_error("kind_name: unreachable");
}

Kind kind_from_name(const std::string& name) {
    if (name == "papr") return Kind::Papr;
    if (name == "oobe") return Kind::Oobe;
    if (name == "ber") return Kind::Ber;
    if (name == "sense-active") return Kind::SenseActive;
    if (name == "sense-passive") return Kind::SensePassive;
    if (name == "power-opt") return Kind::PowerOpt;
    throw ConfigError("experiment: unknown kind '" + name + "'");
}

int ChannelConfig::path_count() const {
    switch (type) {
        case Type::Random: return paths;
        case Type::Targets: return static_cast<int>(targets.size());
        case Type::Explicit: return static_cast<int>(explicit_paths.size());
    }
    throw std::logic_error("path_count: unreachable");
}

ChannelSpec ChannelConfig::realize(const FrameParams& fp, Rng& rng) const {
    switch (type) {
        case Type::Random: {
            const double bins = tau_max_bins > 0.0 ? tau_max_bins : static_cast<double>(fp.cp_len);
            const double factor = (mode == Mode::Active) ? 2.0 : 1.0;
            const double nu_max = max_velocity_mps > 0.0
                                      ? factor * fp.f_c * max_velocity_mps / kSpeedOfLight
                                      : -1.0;
            return random_channel(fp, paths, sigma_h2, bins * fp.sample_period(), gains, rng, mode,
                                  nu_max);
        }
        case Type::Targets:
            return targets_channel(fp, targets, mode, sigma_h2, gains, rng);
        case Type::Explicit: {
            ChannelSpec spec;
            spec.paths = explicit_paths;
            spec.sigma_h2 = sigma_h2;
            spec.mode = mode;
            return spec;
        }
    }
    throw std::logic_error("realize: unreachable");
}

void ExperimentConfig::validate() const {
    frame.validate();
    if (qam_order != 4 && qam_order != 16 && qam_order != 64)
        throw ConfigError("qam_order: must be 4, 16 or 64");
    if (trials < 1) throw ConfigError("trials: must be >= 1");
    if (pilot.sigma_p2 < 0.0 || pilot.sigma_p2 >= 1.0)
        throw ConfigError("pilot.sigma_p2: must be in [0, 1)");
    for (double sp2 : pilot_powers)
        if (sp2 < 0.0 || sp2 >= 1.0) throw ConfigError("pilot_powers: values must be in [0, 1)");

    const bool needs_snr = kind == Kind::Ber || kind == Kind::SenseActive ||
                           kind == Kind::SensePassive || kind == Kind::PowerOpt;
    if (needs_snr && snr_db.empty())
        throw ConfigError("snr_db: required and non-empty for this experiment");
    if ((kind == Kind::Papr || kind == Kind::Oobe) && waveforms.empty())
        throw ConfigError("waveforms: required and non-empty for this experiment");
    if (kind == Kind::SenseActive && channel.type != ChannelConfig::Type::Targets &&
        channel.type != ChannelConfig::Type::Explicit)
        throw ConfigError("channel: sense-active needs targets or explicit paths");
    if (kind == Kind::SensePassive) {
        if (passive.los_range_m <= 0.0 || passive.nlos_range_m <= 0.0)
            throw ConfigError("passive: los_range_m and nlos_range_m must be positive");
        if (pilot.sigma_p2 <= 0.0 && pilot_powers.empty())
            throw ConfigError("pilot.sigma_p2: passive sensing needs pilot power > 0");
    }
    if (kind == Kind::Ber && pilot.sigma_p2 <= 0.0 && pilot_powers.empty())
        throw ConfigError("pilot.sigma_p2: ber experiment needs pilot power > 0");
}

namespace {

// Fail fast on unknown keys: silent typos corrupt sweeps.
void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double get_num(const json& j, const std::string& where, const std::string& key,
               bool required = true, double fallback = 0.0) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(where + ": missing key '" + key + "'");
        return fallback;
    }
    if (!j[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return j[key].get<double>();
}

std::string get_str(const json& j, const std::string& where, const std::string& key,
                    bool required = true, const std::string& fallback = "") {
    if (!j.contains(key)) {
        if (required) throw ConfigError(where + ": missing key '" + key + "'");
        return fallback;
    }
    if (!j[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return j[key].get<std::string>();
}

FrameParams parse_frame(const json& j) {
    check_keys(j, "frame", {"M", "N", "delta_f", "cp_len", "f_c", "oversampling"});
    FrameParams fp;
    fp.M = static_cast<int>(get_num(j, "frame", "M"));
    fp.N = static_cast<int>(get_num(j, "frame", "N"));
    fp.delta_f = get_num(j, "frame", "delta_f");
    fp.cp_len = static_cast<int>(get_num(j, "frame", "cp_len"));
    fp.f_c = get_num(j, "frame", "f_c");
    fp.oversampling = static_cast<int>(get_num(j, "frame", "oversampling", false, 4.0));
    try {
        fp.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("frame: ") + e.what());
    }
    return fp;
}

ChannelConfig parse_channel(const json& j) {
    check_keys(j, "channel",
               {"type", "paths", "sigma_h2", "gains", "mode", "tau_max_bins",
                "max_velocity_mps", "targets", "explicit"});
    ChannelConfig cc;
    const std::string type = get_str(j, "channel", "type");
    if (type == "random")
        cc.type = ChannelConfig::Type::Random;
    else if (type == "targets")
        cc.type = ChannelConfig::Type::Targets;
    else if (type == "explicit")
        cc.type = ChannelConfig::Type::Explicit;
    else
        throw ConfigError("channel.type: must be random, targets or explicit");

    cc.paths = static_cast<int>(get_num(j, "channel", "paths", false, 1.0));
    cc.sigma_h2 = get_num(j, "channel", "sigma_h2", false, 1.0);
    cc.tau_max_bins = get_num(j, "channel", "tau_max_bins", false, -1.0);
    cc.max_velocity_mps = get_num(j, "channel", "max_velocity_mps", false, -1.0);

    const std::string gains = get_str(j, "channel", "gains", false, "rayleigh");
    if (gains == "rayleigh")
        cc.gains = GainModel::Rayleigh;
    else if (gains == "fixed")
        cc.gains = GainModel::FixedMagnitude;
    else
        throw ConfigError("channel.gains: must be rayleigh or fixed");

    const std::string mode = get_str(j, "channel", "mode", false, "passive");
    if (mode == "passive")
        cc.mode = Mode::Passive;
    else if (mode == "active")
        cc.mode = Mode::Active;
    else
        throw ConfigError("channel.mode: must be active or passive");

    if (j.contains("targets")) {
        if (!j["targets"].is_array()) throw ConfigError("channel.targets: expected an array");
        for (const auto& t : j["targets"]) {
            check_keys(t, "channel.targets[]", {"range_m", "velocity_mps"});
            cc.targets.emplace_back(get_num(t, "channel.targets[]", "range_m"),
                                    get_num(t, "channel.targets[]", "velocity_mps"));
        }
    }
    if (j.contains("explicit")) {
        if (!j["explicit"].is_array()) throw ConfigError("channel.explicit: expected an array");
        for (const auto& p : j["explicit"]) {
            check_keys(p, "channel.explicit[]", {"alpha_re", "alpha_im", "tau_s", "nu_hz"});
            PathParams path;
            path.alpha = cplx(get_num(p, "channel.explicit[]", "alpha_re"),
                              get_num(p, "channel.explicit[]", "alpha_im", false, 0.0));
            path.tau = get_num(p, "channel.explicit[]", "tau_s");
            path.nu = get_num(p, "channel.explicit[]", "nu_hz", false, 0.0);
            cc.explicit_paths.push_back(path);
        }
    }
    if (cc.type == ChannelConfig::Type::Targets && cc.targets.empty())
        throw ConfigError("channel.targets: required for type targets");
    if (cc.type == ChannelConfig::Type::Explicit && cc.explicit_paths.empty())
        throw ConfigError("channel.explicit: required for type explicit");
    return cc;
}

std::vector<double> parse_number_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    check_keys(j, "config",
               {"experiment", "name", "frame", "qam_order", "waveforms", "pilot", "pilot_powers",
                "channel", "passive", "snr_db", "papr_thresholds_db", "psd_nfft", "trials",
                "seed", "out"});

    ExperimentConfig cfg;
    cfg.kind = kind_from_name(get_str(j, "config", "experiment"));
    cfg.name = get_str(j, "config", "name", false, kind_name(cfg.kind));
    if (!j.contains("frame")) throw ConfigError("config: missing key 'frame'");
    cfg.frame = parse_frame(j["frame"]);
    cfg.qam_order = static_cast<int>(get_num(j, "config", "qam_order", false, 4.0));

    if (j.contains("waveforms")) {
        if (!j["waveforms"].is_array()) throw ConfigError("waveforms: expected an array");
        for (const auto& w : j["waveforms"]) {
            if (!w.is_string()) throw ConfigError("waveforms: expected strings");
            try {
                cfg.waveforms.push_back(waveform_from_name(w.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("waveforms: ") + e.what());
            }
        }
    }

    if (j.contains("pilot")) {
        check_keys(j["pilot"], "pilot", {"l_p", "k_p", "sigma_p2"});
        cfg.pilot.sigma_p2 = get_num(j["pilot"], "pilot", "sigma_p2");
        cfg.pilot.l_p = static_cast<int>(
            get_num(j["pilot"], "pilot", "l_p", false, static_cast<double>(cfg.frame.M / 2)));
        cfg.pilot.k_p = static_cast<int>(
            get_num(j["pilot"], "pilot", "k_p", false, static_cast<double>(cfg.frame.N / 2)));
        cfg.pilot_given = true;
    } else {
        cfg.pilot = PilotConfig::centered(cfg.frame, 0.0);
    }
    if (j.contains("pilot_powers"))
        cfg.pilot_powers = parse_number_array(j["pilot_powers"], "pilot_powers");

    if (j.contains("channel")) cfg.channel = parse_channel(j["channel"]);
    if (j.contains("passive")) {
        check_keys(j["passive"], "passive", {"los_range_m", "nlos_range_m", "theta_rad"});
        cfg.passive.los_range_m = get_num(j["passive"], "passive", "los_range_m");
        cfg.passive.nlos_range_m = get_num(j["passive"], "passive", "nlos_range_m");
        cfg.passive.theta_rad = get_num(j["passive"], "passive", "theta_rad");
    }
    if (j.contains("snr_db")) cfg.snr_db = parse_number_array(j["snr_db"], "snr_db");
    if (j.contains("papr_thresholds_db"))
        cfg.papr_thresholds_db = parse_number_array(j["papr_thresholds_db"], "papr_thresholds_db");
    cfg.psd_nfft = static_cast<int>(get_num(j, "config", "psd_nfft", false, 0.0));
    cfg.trials = static_cast<int>(get_num(j, "config", "trials", false, 1.0));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError("seed: expected an unsigned integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    cfg.out = get_str(j, "config", "out", false, "results");

    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = kind_name(cfg.kind);
    j["name"] = cfg.name;
    j["frame"] = {{"M", cfg.frame.M},           {"N", cfg.frame.N},
                  {"delta_f", cfg.frame.delta_f}, {"cp_len", cfg.frame.cp_len},
                  {"f_c", cfg.frame.f_c},       {"oversampling", cfg.frame.oversampling}};
    j["qam_order"] = cfg.qam_order;
    if (!cfg.waveforms.empty()) {
        json arr = json::array();
        for (auto w : cfg.waveforms) arr.push_back(waveform_name(w));
        j["waveforms"] = arr;
    }
    if (cfg.pilot_given || cfg.pilot.sigma_p2 > 0.0)
        j["pilot"] = {{"l_p", cfg.pilot.l_p}, {"k_p", cfg.pilot.k_p},
                      {"sigma_p2", cfg.pilot.sigma_p2}};
    if (!cfg.pilot_powers.empty()) j["pilot_powers"] = cfg.pilot_powers;

    json ch;
    switch (cfg.channel.type) {
        case ChannelConfig::Type::Random:
            ch["type"] = "random";
            ch["paths"] = cfg.channel.paths;
            break;
        case ChannelConfig::Type::Targets: {
            ch["type"] = "targets";
            json arr = json::array();
            for (const auto& [r, v] : cfg.channel.targets)
                arr.push_back({{"range_m", r}, {"velocity_mps", v}});
            ch["targets"] = arr;
            break;
        }
        case ChannelConfig::Type::Explicit: {
            ch["type"] = "explicit";
            json arr = json::array();
            for (const auto& p : cfg.channel.explicit_paths)
                arr.push_back({{"alpha_re", p.alpha.real()},
                               {"alpha_im", p.alpha.imag()},
                               {"tau_s", p.tau},
                               {"nu_hz", p.nu}});
            ch["explicit"] = arr;
            break;
        }
    }
    ch["sigma_h2"] = cfg.channel.sigma_h2;
    ch["gains"] = cfg.channel.gains == GainModel::Rayleigh ? "rayleigh" : "fixed";
    ch["mode"] = cfg.channel.mode == Mode::Active ? "active" : "passive";
    if (cfg.channel.tau_max_bins > 0.0) ch["tau_max_bins"] = cfg.channel.tau_max_bins;
    if (cfg.channel.max_velocity_mps > 0.0) ch["max_velocity_mps"] = cfg.channel.max_velocity_mps;
    j["channel"] = ch;

    if (cfg.kind == Kind::SensePassive)
        j["passive"] = {{"los_range_m", cfg.passive.los_range_m},
                        {"nlos_range_m", cfg.passive.nlos_range_m},
                        {"theta_rad", cfg.passive.theta_rad}};
    if (!cfg.snr_db.empty()) j["snr_db"] = cfg.snr_db;
    if (!cfg.papr_thresholds_db.empty()) j["papr_thresholds_db"] = cfg.papr_thresholds_db;
    if (cfg.psd_nfft > 0) j["psd_nfft"] = cfg.psd_nfft;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    return j.dump(2);
}

}  // namespace ddisac::experiment
