#pragma once

#include "dualband/allocation.hpp"
#include "dualband/channel.hpp"
#include "dualband/scenario.hpp"

#include <span>

namespace dualband {

/// Per-UA transmit time when `served` UAs share the mmW band of one slot.
double mmw_tx_time(const ScenarioConfig& cfg, std::size_t served);

/// Minimum power for one UA holding every RB of `noise_row` for `tx_time`.
double mmw_min_power(std::span<const double> noise_row, double bits, double tx_time,
                     double rb_bandwidth);

/// Serves the min(N', |group|) UAs with the lowest mmW minimum power over
/// mmW (ties by ua id) and hands the rest to the microwave band.
MmwSelection select_greedy(std::span<const std::size_t> group, std::span<const UserApp> uas,
                           const EffectiveNoiseMap& mmw, std::size_t slot, const ScenarioConfig& cfg);

} // namespace dualband
