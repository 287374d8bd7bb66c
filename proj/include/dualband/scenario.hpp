#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace dualband {

using Rng = std::mt19937_64;

struct PathLossParams {
    double alpha_db = 0.0;
    double beta = 1.0;
    double shadow_sigma_db = 0.0;
};

struct BandConfig {
    double bandwidth_hz = 0.0;    ///< total band, Omega
    double rb_bandwidth_hz = 0.0; ///< per RB, omega
    PathLossParams pathloss;

    /// floor(Omega / omega).
    std::size_t rb_count() const;
};

enum class RadialDistribution { UniformRadius, UniformArea };

/// How long each mmW UA transmits inside a slot.
enum class MmwTimeMode {
    Fixed,  ///< tau' = mmw_tx_time
    Shared, ///< tau' = (tau - N'_eff * mmw_tx_time) / N'_eff, mmw_tx_time read as per-UA overhead
};

enum class EscalationMode { Global, PerUa };

/// Every physical, protocol and algorithm parameter of a run. The defaults
/// reproduce the reference simulation table (10 kbit per UA, 10 MHz / 1 GHz
/// bands of 180 kHz RBs, 38/70 dB intercepts, ...).
struct ScenarioConfig {
    double cell_radius_m = 200.0;
    double min_distance_m = 5.0;
    RadialDistribution radial_distribution = RadialDistribution::UniformRadius;
    std::size_t num_ues = 10;
    std::size_t uas_per_ue = 3;
    double bits_required = 10e3;

    BandConfig muw{10e6, 180e3, {38.0, 3.0, 10.0}};
    BandConfig mmw{1e9, 180e3, {70.0, 2.0, 5.2}};

    double slot_duration = 10e-3;
    double mmw_tx_time = 0.1e-3;
    MmwTimeMode mmw_time_mode = MmwTimeMode::Fixed;
    double noise_density = 3.981071705534972e-21; ///< -174 dBm/Hz in W/Hz
    double rician_k = 2.4;
    double beam_gain_dbi = 18.0;

    std::size_t mmw_quota = 20;
    double step = 0.01;
    EscalationMode escalation_mode = EscalationMode::Global;
    std::size_t escalation_cap = 1'000'000;

    double eta = 1.0;
    double gamma = 1.0;
    std::vector<std::size_t> qos_horizons{1};
    std::uint64_t rng_seed = 1;
};

/// Throws ConfigError naming the first field that violates an invariant.
void validate(const ScenarioConfig& cfg);

/// Parses a flat JSON object; unknown keys are rejected, missing keys keep
/// their defaults. The result is validated.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Flat JSON with every field, accepted back by parse_config.
std::string to_json(const ScenarioConfig& cfg);

struct UserApp {
    std::size_t ua_id = 0;
    std::size_t ue_id = 0;
    double distance_m = 0.0;
    double angle_rad = 0.0;
    double demand_bits = 0.0;
    std::size_t qos_horizon = 1;
};

/// UAs tolerating at most `horizon` slots. Members are ua ids, ascending.
struct QoSClass {
    std::size_t horizon = 1;
    std::vector<std::size_t> members;
};

struct Topology {
    std::size_t num_ues = 0;
    std::vector<UserApp> uas; ///< indexed by ua_id, grouped UE-major
    std::vector<QoSClass> classes; ///< ascending horizon; empty classes omitted

    std::size_t max_horizon() const;
};

/// Draws UE positions and spawns their UAs. Pure function of (cfg, rng state).
Topology generate_topology(const ScenarioConfig& cfg, Rng& rng);

/// Independent stream for one trial; `stream` separates the channel draw
/// from algorithm-internal randomness so paired runs see the same channel.
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

std::string_view to_string(RadialDistribution v);
std::string_view to_string(MmwTimeMode v);
std::string_view to_string(EscalationMode v);

} // namespace dualband
