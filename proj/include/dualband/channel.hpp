#pragma once

#include "dualband/scenario.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dualband {

enum class Band { Microwave, MillimeterWave };

std::string_view to_string(Band b);

/// alpha + 10 beta log10(d) + shadow, in dB. Throws std::domain_error for d <= 0.
double path_loss_db(const PathLossParams& params, double distance_m, double shadow_db);

/// Small-scale fading for `rbs` x `slots` RBs, laid out slot-major
/// (index = slot * rbs + rb). Microwave draws unit-power Rayleigh; mmW draws
/// Rician with the given K-factor normalised to E|h|^2 = 1 (K = inf gives a
/// pure line-of-sight gain). Zero-gain draws are resampled.
std::vector<std::complex<double>> draw_fading(Band band, std::size_t rbs, std::size_t slots,
                                              double rician_k, Rng& rng);

/// Random channel state of one trial, one entry per UE.
struct ChannelDraws {
    std::size_t slots = 0;
    std::vector<std::vector<std::complex<double>>> muw_fading;
    std::vector<std::vector<std::complex<double>>> mmw_fading;
    std::vector<double> muw_shadow_db;
    std::vector<double> mmw_shadow_db;
};

/// Shadowing is drawn once per (UE, band); fading per (UE, RB, slot).
ChannelDraws draw_channel(const ScenarioConfig& cfg, std::size_t num_ues, std::size_t slots, Rng& rng);

/// Beamforming gain in dBi as a function of distance.
using BeamGainProfile = std::function<double(double distance_m)>;

/// Per-(UA, RB, slot) noise normalised by path loss, fading and beam gain, in W.
///
/// Storage is per UE: co-located UAs share the same rows.
class EffectiveNoiseMap {
public:
    EffectiveNoiseMap() = default;
    EffectiveNoiseMap(Band band, std::size_t num_rbs, std::size_t num_slots,
                      std::vector<std::size_t> ua_to_ue, std::size_t num_ues);

    Band band() const noexcept { return band_; }
    std::size_t num_uas() const noexcept { return ua_to_ue_.size(); }
    std::size_t num_rbs() const noexcept { return num_rbs_; }
    std::size_t num_slots() const noexcept { return num_slots_; }

    double at(std::size_t ua, std::size_t rb, std::size_t slot) const;
    std::span<const double> row(std::size_t ua, std::size_t slot) const;

    std::span<double> ue_row(std::size_t ue, std::size_t slot);

private:
    std::size_t offset(std::size_t ue, std::size_t slot) const;

    Band band_ = Band::Microwave;
    std::size_t num_rbs_ = 0;
    std::size_t num_slots_ = 0;
    std::vector<std::size_t> ua_to_ue_;
    std::vector<double> values_;
};

/// Builds the effective-noise map of one band from a channel realisation.
/// An empty `beam_gain` uses the constant gain from the config.
EffectiveNoiseMap effective_noise(const ScenarioConfig& cfg, Band band, std::span<const UserApp> uas,
                                  const ChannelDraws& draws, const BeamGainProfile& beam_gain = {});

struct ChannelState {
    EffectiveNoiseMap muw;
    EffectiveNoiseMap mmw;
};

/// Draws a channel for `slots` slots and builds both noise maps.
ChannelState build_channel(const ScenarioConfig& cfg, const Topology& topo, std::size_t slots, Rng& rng);

} // namespace dualband
