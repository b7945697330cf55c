#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddisac/baselines.hpp"
#include "ddisac/channel.hpp"
#include "ddisac/frame.hpp"
#include "ddisac/lattice.hpp"

namespace ddisac::experiment {

// Invalid configuration (exit code 2 at the CLI).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during a campaign (exit code 3 at the CLI); carries the
// seed of the failing trial so it can be replayed.
struct TrialError : std::runtime_error {
    TrialError(const std::string& what, std::uint64_t seed)
        : std::runtime_error(what + " (trial seed " + std::to_string(seed) + ")"),
          trial_seed(seed) {}
    std::uint64_t trial_seed;
};

enum class Kind { Papr, Oobe, Ber, SenseActive, SensePassive, PowerOpt };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct ChannelConfig {
    enum class Type { Random, Targets, Explicit };
    Type type = Type::Random;
    int paths = 1;                   // P for Random
    double sigma_h2 = 1.0;
    GainModel gains = GainModel::Rayleigh;
    Mode mode = Mode::Passive;
    double tau_max_bins = -1.0;      // Random: delay support in bins; <0 means cp_len
    double max_velocity_mps = -1.0;  // Random: Doppler support cap; <0 means unambiguous range
    std::vector<std::pair<double, double>> targets;  // (range m, velocity m/s)
    std::vector<PathParams> explicit_paths;

    // One ChannelSpec realization (gains and, for Random, the path set).
    ChannelSpec realize(const FrameParams& fp, Rng& rng) const;
    int path_count() const;
};

struct PassiveGeometry {
    double los_range_m = 0.0;
    double nlos_range_m = 0.0;
    double theta_rad = 0.0;
};

struct ExperimentConfig {
    Kind kind = Kind::Papr;
    std::string name;  // experiment id in outputs; defaults to the kind name
    FrameParams frame;
    int qam_order = 4;
    std::vector<WaveformKind> waveforms;
    PilotConfig pilot{0, 0, 0.0};
    bool pilot_given = false;
    std::vector<double> pilot_powers;  // sweep over sigma_p2 (BER/passive)
    ChannelConfig channel;
    PassiveGeometry passive;
    std::vector<double> snr_db;
    std::vector<double> papr_thresholds_db;
    int psd_nfft = 0;     // OOBE segment length; 0 = one oversampled frame
    int trials = 1;
    std::uint64_t seed = 1;
    std::string out = "results";

    double sigma_d2() const { return 1.0 - pilot.sigma_p2; }
    void validate() const;
};

// Strict parsing: unknown keys anywhere are errors.
ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

// Round-trip the config to canonical JSON text (used by the summary file).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace ddisac::experiment
