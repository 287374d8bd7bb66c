#include "dualband/mmw_alloc.hpp"

#include "dualband/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace dualband {

double mmw_tx_time(const ScenarioConfig& cfg, std::size_t served)
{
    if (cfg.mmw_time_mode == MmwTimeMode::Fixed || served == 0) {
        return cfg.mmw_tx_time;
    }
    const double n = static_cast<double>(served);
    const double t = (cfg.slot_duration - n * cfg.mmw_tx_time) / n;
    if (!(t > 0.0)) {
        throw AllocationError("mmW training overhead of " + std::to_string(served) +
                              " UAs leaves no transmit time");
    }
    return t;
}

double mmw_min_power(std::span<const double> noise_row, double bits, double tx_time,
                     double rb_bandwidth)
{
    return min_power_total(noise_row, bits, tx_time, rb_bandwidth);
}

MmwSelection select_greedy(std::span<const std::size_t> group, std::span<const UserApp> uas,
                           const EffectiveNoiseMap& mmw, std::size_t slot, const ScenarioConfig& cfg)
{
    MmwSelection sel;
    sel.slot = slot;
    const std::size_t served = std::min(cfg.mmw_quota, group.size());
    sel.tx_time = mmw_tx_time(cfg, served);
    const double bw = cfg.mmw.rb_bandwidth_hz;

    struct Candidate {
        std::size_t ua;
        double power;
    };
    std::vector<Candidate> ranked;
    ranked.reserve(group.size());
    if (served > 0) {
        for (std::size_t id : group) {
            ranked.push_back({id, mmw_min_power(mmw.row(id, slot), uas[id].demand_bits, sel.tx_time, bw)});
        }
        std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
            if (a.power != b.power) return a.power < b.power;
            return a.ua < b.ua;
        });
    } else {
        for (std::size_t id : group) {
            ranked.push_back({id, 0.0});
        }
    }

    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const std::size_t id = ranked[i].ua;
        if (i < served) {
            sel.selected.push_back(id);
            sel.solutions.push_back(
                min_power_waterfill(mmw.row(id, slot), uas[id].demand_bits, sel.tx_time, bw));
            sel.total_power += sel.solutions.back().total_power;
        } else {
            sel.remainder.push_back(id);
        }
    }
    std::sort(sel.remainder.begin(), sel.remainder.end());
    return sel;
}

} // namespace dualband
