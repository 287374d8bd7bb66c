#include "dualband/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dualband {

namespace {

// Below this |g|^2 the normalised noise overflows; such draws have zero measure.
constexpr double kMinGain = 1e-300;

std::complex<double> draw_rayleigh(Rng& rng)
{
    std::normal_distribution<double> n(0.0, std::numbers::sqrt2 / 2.0);
    return {n(rng), n(rng)};
}

std::complex<double> draw_rician(double k, Rng& rng)
{
    if (std::isinf(k)) {
        return {1.0, 0.0};
    }
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double los = std::sqrt(k / (k + 1.0));
    const double nlos = std::sqrt(1.0 / (k + 1.0));
    return std::polar(los, phase(rng)) + nlos * draw_rayleigh(rng);
}

double db_to_linear(double db)
{
    return std::pow(10.0, 0.1 * db);
}

} // namespace

std::string_view to_string(Band b)
{
    return b == Band::Microwave ? "muw" : "mmw";
}

double path_loss_db(const PathLossParams& params, double distance_m, double shadow_db)
{
    if (!(distance_m > 0.0)) {
        throw std::domain_error("path_loss_db: distance must be positive");
    }
    return params.alpha_db + 10.0 * params.beta * std::log10(distance_m) + shadow_db;
}

std::vector<std::complex<double>> draw_fading(Band band, std::size_t rbs, std::size_t slots,
                                              double rician_k, Rng& rng)
{
    std::vector<std::complex<double>> out(rbs * slots);
    for (auto& g : out) {
        do {
            g = band == Band::Microwave ? draw_rayleigh(rng) : draw_rician(rician_k, rng);
        } while (!(std::norm(g) > kMinGain));
    }
    return out;
}

ChannelDraws draw_channel(const ScenarioConfig& cfg, std::size_t num_ues, std::size_t slots, Rng& rng)
{
    ChannelDraws d;
    d.slots = slots;
    std::normal_distribution<double> std_normal(0.0, 1.0);
    const std::size_t k1 = cfg.muw.rb_count();
    const std::size_t k2 = cfg.mmw.rb_count();
    for (std::size_t ue = 0; ue < num_ues; ++ue) {
        d.muw_shadow_db.push_back(cfg.muw.pathloss.shadow_sigma_db * std_normal(rng));
        d.mmw_shadow_db.push_back(cfg.mmw.pathloss.shadow_sigma_db * std_normal(rng));
        d.muw_fading.push_back(draw_fading(Band::Microwave, k1, slots, cfg.rician_k, rng));
        d.mmw_fading.push_back(draw_fading(Band::MillimeterWave, k2, slots, cfg.rician_k, rng));
    }
    return d;
}

EffectiveNoiseMap::EffectiveNoiseMap(Band band, std::size_t num_rbs, std::size_t num_slots,
                                     std::vector<std::size_t> ua_to_ue, std::size_t num_ues)
    : band_(band), num_rbs_(num_rbs), num_slots_(num_slots), ua_to_ue_(std::move(ua_to_ue)),
      values_(num_ues * num_slots * num_rbs, 0.0)
{
    for (std::size_t ue : ua_to_ue_) {
        if (ue >= num_ues) {
            throw std::out_of_range("EffectiveNoiseMap: UA mapped to unknown UE");
        }
    }
}

std::size_t EffectiveNoiseMap::offset(std::size_t ue, std::size_t slot) const
{
    return (ue * num_slots_ + slot) * num_rbs_;
}

double EffectiveNoiseMap::at(std::size_t ua, std::size_t rb, std::size_t slot) const
{
    return row(ua, slot)[rb];
}

std::span<const double> EffectiveNoiseMap::row(std::size_t ua, std::size_t slot) const
{
    if (ua >= ua_to_ue_.size() || slot >= num_slots_) {
        throw std::out_of_range("EffectiveNoiseMap: index out of range");
    }
    return std::span<const double>(values_).subspan(offset(ua_to_ue_[ua], slot), num_rbs_);
}

std::span<double> EffectiveNoiseMap::ue_row(std::size_t ue, std::size_t slot)
{
    return std::span<double>(values_).subspan(offset(ue, slot), num_rbs_);
}

EffectiveNoiseMap effective_noise(const ScenarioConfig& cfg, Band band, std::span<const UserApp> uas,
                                  const ChannelDraws& draws, const BeamGainProfile& beam_gain)
{
    const BandConfig& bc = band == Band::Microwave ? cfg.muw : cfg.mmw;
    const auto& fading = band == Band::Microwave ? draws.muw_fading : draws.mmw_fading;
    const auto& shadow = band == Band::Microwave ? draws.muw_shadow_db : draws.mmw_shadow_db;
    const std::size_t rbs = bc.rb_count();
    const std::size_t num_ues = fading.size();

    std::vector<std::size_t> ua_to_ue;
    std::vector<double> ue_distance(num_ues, 0.0);
    for (const auto& ua : uas) {
        if (ua.ue_id >= num_ues) {
            throw std::invalid_argument("effective_noise: UA refers to a UE without channel draws");
        }
        ua_to_ue.push_back(ua.ue_id);
        ue_distance[ua.ue_id] = ua.distance_m;
    }
    if (shadow.size() != num_ues) {
        throw std::invalid_argument("effective_noise: shadow and fading draws disagree on UE count");
    }

    EffectiveNoiseMap map(band, rbs, draws.slots, std::move(ua_to_ue), num_ues);
    const double thermal = bc.rb_bandwidth_hz * cfg.noise_density;
    for (std::size_t ue = 0; ue < num_ues; ++ue) {
        if (fading[ue].size() != rbs * draws.slots) {
            throw std::invalid_argument("effective_noise: fading draw has the wrong dimensions");
        }
        const double d = ue_distance[ue];
        if (!(d > 0.0)) {
            continue; // UE without UAs
        }
        const double loss = db_to_linear(path_loss_db(bc.pathloss, d, shadow[ue]));
        double gain = 1.0;
        if (band == Band::MillimeterWave) {
            gain = db_to_linear(beam_gain ? beam_gain(d) : cfg.beam_gain_dbi);
        }
        for (std::size_t t = 0; t < draws.slots; ++t) {
            auto out = map.ue_row(ue, t);
            for (std::size_t k = 0; k < rbs; ++k) {
                const double v = thermal * loss / (gain * std::norm(fading[ue][t * rbs + k]));
                if (!(v > 0.0) || !std::isfinite(v)) {
                    throw std::domain_error("effective_noise: non-finite noise entry");
                }
                out[k] = v;
            }
        }
    }
    return map;
}

ChannelState build_channel(const ScenarioConfig& cfg, const Topology& topo, std::size_t slots, Rng& rng)
{
    const ChannelDraws draws = draw_channel(cfg, topo.num_ues, slots, rng);
    return {effective_noise(cfg, Band::Microwave, topo.uas, draws),
            effective_noise(cfg, Band::MillimeterWave, topo.uas, draws)};
}

} // namespace dualband
