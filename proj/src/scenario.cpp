#include "dualband/scenario.hpp"

#include "dualband/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace dualband {

namespace {

using nlohmann::json;

double read_double(const json& j, const std::string& key)
{
    if (!j.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    return j.get<double>();
}

std::size_t read_count(const json& j, const std::string& key)
{
    if (!j.is_number_unsigned()) {
        throw ConfigError(key, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

std::string read_string(const json& j, const std::string& key)
{
    if (!j.is_string()) {
        throw ConfigError(key, "expected a string");
    }
    return j.get<std::string>();
}

RadialDistribution parse_radial(const std::string& s)
{
    if (s == "uniform_radius") return RadialDistribution::UniformRadius;
    if (s == "uniform_area") return RadialDistribution::UniformArea;
    throw ConfigError("radial_distribution", "expected uniform_radius or uniform_area, got '" + s + "'");
}

MmwTimeMode parse_time_mode(const std::string& s)
{
    if (s == "fixed") return MmwTimeMode::Fixed;
    if (s == "shared") return MmwTimeMode::Shared;
    throw ConfigError("mmw_time_mode", "expected fixed or shared, got '" + s + "'");
}

EscalationMode parse_escalation(const std::string& s)
{
    if (s == "global") return EscalationMode::Global;
    if (s == "per_ua") return EscalationMode::PerUa;
    throw ConfigError("escalation_mode", "expected global or per_ua, got '" + s + "'");
}

void require(bool ok, const char* field, const char* what)
{
    if (!ok) {
        throw ConfigError(field, what);
    }
}

} // namespace

std::size_t BandConfig::rb_count() const
{
    if (!(bandwidth_hz > 0.0) || !(rb_bandwidth_hz > 0.0)) {
        return 0;
    }
    // Guard against 10e6/180e3 style quotients landing a hair below an integer.
    const double q = bandwidth_hz / rb_bandwidth_hz;
    return static_cast<std::size_t>(std::floor(q * (1.0 + 1e-12)));
}

void validate(const ScenarioConfig& cfg)
{
    require(cfg.cell_radius_m > 0.0 && std::isfinite(cfg.cell_radius_m), "cell_radius_m", "must be positive");
    require(cfg.min_distance_m > 0.0, "min_distance_m", "must be positive");
    require(cfg.min_distance_m < cfg.cell_radius_m, "min_distance_m", "must be below cell_radius_m");
    require(cfg.num_ues >= 1, "num_ues", "must be at least 1");
    require(cfg.uas_per_ue >= 1, "uas_per_ue", "must be at least 1");
    require(cfg.bits_required > 0.0 && std::isfinite(cfg.bits_required), "bits_required", "must be positive");

    require(cfg.muw.rb_bandwidth_hz > 0.0, "muw_rb_bandwidth", "must be positive");
    require(cfg.muw.rb_count() >= 1, "muw_bandwidth", "must hold at least one RB");
    require(cfg.mmw.rb_bandwidth_hz > 0.0, "mmw_rb_bandwidth", "must be positive");
    require(cfg.mmw.rb_count() >= 1, "mmw_bandwidth", "must hold at least one RB");
    require(cfg.muw.pathloss.beta > 0.0, "muw_beta", "must be positive");
    require(cfg.mmw.pathloss.beta > 0.0, "mmw_beta", "must be positive");
    require(cfg.muw.pathloss.shadow_sigma_db >= 0.0, "muw_shadow_sigma", "must be non-negative");
    require(cfg.mmw.pathloss.shadow_sigma_db >= 0.0, "mmw_shadow_sigma", "must be non-negative");

    require(cfg.slot_duration > 0.0 && std::isfinite(cfg.slot_duration), "slot_duration", "must be positive");
    require(cfg.mmw_tx_time > 0.0 && std::isfinite(cfg.mmw_tx_time), "mmw_tx_time", "must be positive");
    const double busy = static_cast<double>(cfg.mmw_quota) * cfg.mmw_tx_time;
    if (cfg.mmw_time_mode == MmwTimeMode::Fixed) {
        require(busy <= cfg.slot_duration, "mmw_quota", "mmw_quota * mmw_tx_time exceeds slot_duration");
    } else {
        require(busy < cfg.slot_duration, "mmw_quota", "training overhead leaves no mmW transmit time");
    }
    require(cfg.noise_density > 0.0 && std::isfinite(cfg.noise_density), "noise_density", "must be positive");
    require(cfg.rician_k >= 0.0, "rician_k", "must be non-negative");
    require(std::isfinite(cfg.beam_gain_dbi), "beam_gain", "must be finite");
    require(cfg.step > 0.0 && std::isfinite(cfg.step), "step", "must be positive");
    require(cfg.escalation_cap >= 1, "escalation_cap", "must be at least 1");
    require(cfg.eta >= 0.0 && std::isfinite(cfg.eta), "eta", "must be non-negative");
    require(cfg.gamma >= 0.0 && std::isfinite(cfg.gamma), "gamma", "must be non-negative");
    require(!cfg.qos_horizons.empty(), "qos_horizons", "must list at least one horizon");
    for (std::size_t t : cfg.qos_horizons) {
        require(t >= 1, "qos_horizons", "horizons must be at least 1");
    }
    std::set<std::size_t> unique(cfg.qos_horizons.begin(), cfg.qos_horizons.end());
    require(unique.size() == cfg.qos_horizons.size(), "qos_horizons", "horizons must be distinct");
}

ScenarioConfig parse_config(std::string_view text)
{
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("parse error: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("", "parse error: top level must be an object");
    }

    ScenarioConfig cfg;
    for (const auto& [key, v] : j.items()) {
        if (key == "cell_radius_m") cfg.cell_radius_m = read_double(v, key);
        else if (key == "min_distance_m") cfg.min_distance_m = read_double(v, key);
        else if (key == "radial_distribution") cfg.radial_distribution = parse_radial(read_string(v, key));
        else if (key == "num_ues") cfg.num_ues = read_count(v, key);
        else if (key == "uas_per_ue") cfg.uas_per_ue = read_count(v, key);
        else if (key == "bits_required") cfg.bits_required = read_double(v, key);
        else if (key == "muw_bandwidth") cfg.muw.bandwidth_hz = read_double(v, key);
        else if (key == "muw_rb_bandwidth") cfg.muw.rb_bandwidth_hz = read_double(v, key);
        else if (key == "mmw_bandwidth") cfg.mmw.bandwidth_hz = read_double(v, key);
        else if (key == "mmw_rb_bandwidth") cfg.mmw.rb_bandwidth_hz = read_double(v, key);
        else if (key == "muw_alpha") cfg.muw.pathloss.alpha_db = read_double(v, key);
        else if (key == "muw_beta") cfg.muw.pathloss.beta = read_double(v, key);
        else if (key == "muw_shadow_sigma") cfg.muw.pathloss.shadow_sigma_db = read_double(v, key);
        else if (key == "mmw_alpha") cfg.mmw.pathloss.alpha_db = read_double(v, key);
        else if (key == "mmw_beta") cfg.mmw.pathloss.beta = read_double(v, key);
        else if (key == "mmw_shadow_sigma") cfg.mmw.pathloss.shadow_sigma_db = read_double(v, key);
        else if (key == "slot_duration") cfg.slot_duration = read_double(v, key);
        else if (key == "mmw_tx_time") cfg.mmw_tx_time = read_double(v, key);
        else if (key == "mmw_time_mode") cfg.mmw_time_mode = parse_time_mode(read_string(v, key));
        else if (key == "noise_density") cfg.noise_density = read_double(v, key);
        else if (key == "rician_k") cfg.rician_k = read_double(v, key);
        else if (key == "beam_gain") cfg.beam_gain_dbi = read_double(v, key);
        else if (key == "mmw_quota") cfg.mmw_quota = read_count(v, key);
        else if (key == "step") cfg.step = read_double(v, key);
        else if (key == "escalation_mode") cfg.escalation_mode = parse_escalation(read_string(v, key));
        else if (key == "escalation_cap") cfg.escalation_cap = read_count(v, key);
        else if (key == "eta") cfg.eta = read_double(v, key);
        else if (key == "gamma") cfg.gamma = read_double(v, key);
        else if (key == "rng_seed") {
            if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
            cfg.rng_seed = v.get<std::uint64_t>();
        } else if (key == "qos_horizons") {
            if (!v.is_array()) throw ConfigError(key, "expected an array of horizons");
            cfg.qos_horizons.clear();
            for (const auto& h : v) cfg.qos_horizons.push_back(read_count(h, key));
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const ScenarioConfig& cfg)
{
    json j = {
        {"cell_radius_m", cfg.cell_radius_m},
        {"min_distance_m", cfg.min_distance_m},
        {"radial_distribution", to_string(cfg.radial_distribution)},
        {"num_ues", cfg.num_ues},
        {"uas_per_ue", cfg.uas_per_ue},
        {"bits_required", cfg.bits_required},
        {"muw_bandwidth", cfg.muw.bandwidth_hz},
        {"muw_rb_bandwidth", cfg.muw.rb_bandwidth_hz},
        {"mmw_bandwidth", cfg.mmw.bandwidth_hz},
        {"mmw_rb_bandwidth", cfg.mmw.rb_bandwidth_hz},
        {"muw_alpha", cfg.muw.pathloss.alpha_db},
        {"muw_beta", cfg.muw.pathloss.beta},
        {"muw_shadow_sigma", cfg.muw.pathloss.shadow_sigma_db},
        {"mmw_alpha", cfg.mmw.pathloss.alpha_db},
        {"mmw_beta", cfg.mmw.pathloss.beta},
        {"mmw_shadow_sigma", cfg.mmw.pathloss.shadow_sigma_db},
        {"slot_duration", cfg.slot_duration},
        {"mmw_tx_time", cfg.mmw_tx_time},
        {"mmw_time_mode", to_string(cfg.mmw_time_mode)},
        {"noise_density", cfg.noise_density},
        {"rician_k", cfg.rician_k},
        {"beam_gain", cfg.beam_gain_dbi},
        {"mmw_quota", cfg.mmw_quota},
        {"step", cfg.step},
        {"escalation_mode", to_string(cfg.escalation_mode)},
        {"escalation_cap", cfg.escalation_cap},
        {"eta", cfg.eta},
        {"gamma", cfg.gamma},
        {"qos_horizons", cfg.qos_horizons},
        {"rng_seed", cfg.rng_seed},
    };
    return j.dump(2);
}

std::size_t Topology::max_horizon() const
{
    std::size_t t = 0;
    for (const auto& c : classes) {
        t = std::max(t, c.horizon);
    }
    return t;
}

Topology generate_topology(const ScenarioConfig& cfg, Rng& rng)
{
    validate(cfg);

    Topology topo;
    topo.num_ues = cfg.num_ues;
    topo.uas.reserve(cfg.num_ues * cfg.uas_per_ue);

    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(cfg.min_distance_m, cfg.cell_radius_m);
    std::uniform_real_distribution<double> radius_sq(cfg.min_distance_m * cfg.min_distance_m,
                                                     cfg.cell_radius_m * cfg.cell_radius_m);
    std::uniform_int_distribution<std::size_t> pick_horizon(0, cfg.qos_horizons.size() - 1);

    for (std::size_t ue = 0; ue < cfg.num_ues; ++ue) {
        double d = cfg.radial_distribution == RadialDistribution::UniformRadius
                       ? radius(rng)
                       : std::sqrt(radius_sq(rng));
        d = std::clamp(d, cfg.min_distance_m, cfg.cell_radius_m);
        const double theta = angle(rng);
        for (std::size_t i = 0; i < cfg.uas_per_ue; ++i) {
            UserApp ua;
            ua.ua_id = topo.uas.size();
            ua.ue_id = ue;
            ua.distance_m = d;
            ua.angle_rad = theta;
            ua.demand_bits = cfg.bits_required;
            ua.qos_horizon = cfg.qos_horizons.size() == 1 ? cfg.qos_horizons.front()
                                                          : cfg.qos_horizons[pick_horizon(rng)];
            topo.uas.push_back(ua);
        }
    }

    std::vector<std::size_t> horizons = cfg.qos_horizons;
    std::sort(horizons.begin(), horizons.end());
    for (std::size_t t : horizons) {
        QoSClass q;
        q.horizon = t;
        for (const auto& ua : topo.uas) {
            if (ua.qos_horizon == t) {
                q.members.push_back(ua.ua_id);
            }
        }
        if (!q.members.empty()) {
            topo.classes.push_back(std::move(q));
        }
    }
    return topo;
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

std::string_view to_string(RadialDistribution v)
{
    return v == RadialDistribution::UniformRadius ? "uniform_radius" : "uniform_area";
}

std::string_view to_string(MmwTimeMode v)
{
    return v == MmwTimeMode::Fixed ? "fixed" : "shared";
}

std::string_view to_string(EscalationMode v)
{
    return v == EscalationMode::Global ? "global" : "per_ua";
}

} // namespace dualband
