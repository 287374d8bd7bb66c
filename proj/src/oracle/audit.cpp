#include "dualband/oracle/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace dualband::oracle {

namespace {

bool close(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

// Bits carried over `duration` by per-RB powers on the given noise row.
double carried_bits(std::span<const double> row, std::span<const std::size_t> rbs, std::span<const double> power,
                    double duration, double bw)
{
    double bits = 0.0;
    for (std::size_t i = 0; i < rbs.size(); ++i) {
        bits += duration * bw * std::log1p(power[i] / row[rbs[i]]) / std::log(2.0);
    }
    return bits;
}

class Auditor {
public:
    Auditor(const TrialReport& r, const ScenarioConfig& c, const AuditOptions& o) : report(r), cfg(c), opt(o) {}

    std::vector<Violation> run()
    {
        if (!report.channel) {
            throw std::invalid_argument("audit_trial: report was produced without keep_channel");
        }
        double muw_sum = 0.0;
        double mmw_sum = 0.0;
        for (const ClassOutcome& c : report.classes) {
            check_class(c);
            for (const SlotAllocation& s : c.slots) {
                check_slot(s);
                muw_sum += s.muw_power;
                mmw_sum += s.mmw_power;
            }
        }
        if (!close(muw_sum, report.muw_power, opt.power_rel_tol) ||
            !close(mmw_sum, report.mmw_power, opt.power_rel_tol)) {
            flag("totals", 0, 0, "trial totals differ from the sum of slot totals");
        }
        return std::move(found);
    }

private:
    void flag(std::string constraint, std::size_t horizon, std::size_t slot, std::string detail)
    {
        found.push_back({std::move(constraint), horizon, slot, std::move(detail)});
    }

    // (1h): the slot groups of a class cover it exactly once.
    void check_class(const ClassOutcome& c)
    {
        const std::size_t h = c.grouping.horizon;
        const QoSClass* qos = nullptr;
        for (const QoSClass& q : report.topology.classes) {
            if (q.horizon == h) qos = &q;
        }
        if (!qos) {
            flag("1h", h, 0, "no QoS class with this horizon");
            return;
        }
        if (c.slots.size() != h) {
            flag("1h", h, 0, "expected one slot allocation per slot of the horizon");
        }
        std::multiset<std::size_t> seen;
        for (const SlotAllocation& s : c.slots) seen.insert(s.group.begin(), s.group.end());
        const std::multiset<std::size_t> want(qos->members.begin(), qos->members.end());
        if (seen != want) {
            flag("1h", h, 0, "slot groups do not partition the class");
        }
    }

    void check_slot(const SlotAllocation& s)
    {
        const std::size_t h = s.horizon;
        const std::size_t t = s.slot;
        const EffectiveNoiseMap& muw_map = report.channel->muw;
        const EffectiveNoiseMap& mmw_map = report.channel->mmw;

        // Where every group member ended up.
        std::map<std::size_t, int> placed;
        for (std::size_t id : s.group) placed[id] = 0;

        // (1b): mmW serves exactly min(N', |G|) UAs.
        const std::size_t quota = std::min(cfg.mmw_quota, s.group.size());
        if (s.mmw.selected.size() != quota) {
            flag("1b", h, t,
                 "mmW serves " + std::to_string(s.mmw.selected.size()) + ", expected " + std::to_string(quota));
        }
        // TDMA: mmW transmissions plus any per-UA overhead fit in the slot.
        const double per_ua = s.mmw.tx_time + (cfg.mmw_time_mode == MmwTimeMode::Shared ? cfg.mmw_tx_time : 0.0);
        if (static_cast<double>(s.mmw.selected.size()) * per_ua > cfg.slot_duration * (1.0 + 1e-12)) {
            flag("time", h, t, "mmW transmissions exceed the slot");
        }
        if (cfg.mmw_time_mode == MmwTimeMode::Fixed && s.mmw.tx_time != cfg.mmw_tx_time) {
            flag("time", h, t, "mmW transmit time differs from the configured value");
        }

        double mmw_total = 0.0;
        for (std::size_t i = 0; i < s.mmw.selected.size(); ++i) {
            const std::size_t id = s.mmw.selected[i];
            if (!placed.contains(id)) {
                flag("1h", h, t, "mmW UA " + std::to_string(id) + " is not in the slot group");
                continue;
            }
            placed[id] |= 2;
            const RbSetSolution& sol = s.mmw.solutions.at(i);
            check_powers(sol.power, "1f", h, t, id);
            std::set<std::size_t> rbs(sol.rbs.begin(), sol.rbs.end());
            if (rbs.size() != sol.rbs.size() || (!rbs.empty() && *rbs.rbegin() >= mmw_map.num_rbs())) {
                flag("1f", h, t, "mmW RB list of UA " + std::to_string(id) + " is malformed");
                continue;
            }
            const double bits =
                carried_bits(mmw_map.row(id, t), sol.rbs, sol.power, s.mmw.tx_time, cfg.mmw.rb_bandwidth_hz);
            const double need = report.topology.uas.at(id).demand_bits;
            if (bits < need * (1.0 - opt.demand_rel_tol)) {
                flag("1d", h, t, "mmW UA " + std::to_string(id) + " carries " + std::to_string(bits) + " of " +
                                     std::to_string(need) + " bits");
            }
            for (double p : sol.power) mmw_total += p;
        }
        if (!close(mmw_total, s.mmw_power, opt.power_rel_tol)) {
            flag("totals", h, t, "mmW slot total differs from the sum of per-RB powers");
        }

        // (1a): each microwave RB carries power for at most one UA.
        std::vector<int> holders(muw_map.num_rbs(), 0);
        double muw_total = 0.0;
        if (s.muw.solutions.size() != s.muw.uas.size()) {
            flag("1c", h, t, "microwave solutions do not match the microwave UA list");
            return;
        }
        for (std::size_t i = 0; i < s.muw.uas.size(); ++i) {
            const std::size_t id = s.muw.uas[i];
            if (!placed.contains(id)) {
                flag("1h", h, t, "microwave UA " + std::to_string(id) + " is not in the slot group");
                continue;
            }
            placed[id] |= 1;
            const RbSetSolution& sol = s.muw.solutions[i];
            check_powers(sol.power, "1e", h, t, id);
            bool bad_rb = false;
            for (std::size_t rb : sol.rbs) {
                if (rb >= holders.size()) {
                    bad_rb = true;
                    continue;
                }
                ++holders[rb];
                if (s.muw.ownership.rb_owner.size() != holders.size() || s.muw.ownership.rb_owner[rb] != i) {
                    flag("1a", h, t, "RB " + std::to_string(rb) + " powered by a UA that does not own it");
                }
            }
            if (bad_rb) {
                flag("1e", h, t, "microwave RB index out of range for UA " + std::to_string(id));
                continue;
            }
            const double bits =
                carried_bits(muw_map.row(id, t), sol.rbs, sol.power, cfg.slot_duration, cfg.muw.rb_bandwidth_hz);
            const double need = report.topology.uas.at(id).demand_bits;
            if (bits < need * (1.0 - opt.demand_rel_tol)) {
                flag("1c", h, t, "microwave UA " + std::to_string(id) + " carries " + std::to_string(bits) +
                                     " of " + std::to_string(need) + " bits");
            }
            for (double p : sol.power) muw_total += p;
        }
        for (std::size_t rb = 0; rb < holders.size(); ++rb) {
            if (holders[rb] > 1) flag("1a", h, t, "RB " + std::to_string(rb) + " used by several UAs");
        }
        if (!close(muw_total, s.muw_power, opt.power_rel_tol)) {
            flag("totals", h, t, "microwave slot total differs from the sum of per-RB powers");
        }

        // (1g): no UA on both bands; every member on exactly one.
        for (const auto& [id, where] : placed) {
            if (where == 3) flag("1g", h, t, "UA " + std::to_string(id) + " served on both bands");
            if (where == 0) flag("1c", h, t, "UA " + std::to_string(id) + " served on neither band");
        }
    }

    void check_powers(std::span<const double> power, const char* constraint, std::size_t h, std::size_t t,
                      std::size_t id)
    {
        for (double p : power) {
            if (!std::isfinite(p) || p < 0.0) {
                flag(constraint, h, t, "UA " + std::to_string(id) + " has an invalid power " + std::to_string(p));
                return;
            }
        }
    }

    const TrialReport& report;
    const ScenarioConfig& cfg;
    const AuditOptions& opt;
    std::vector<Violation> found;
};

} // namespace

std::vector<Violation> audit_trial(const TrialReport& report, const ScenarioConfig& cfg, const AuditOptions& options)
{
    return Auditor(report, cfg, options).run();
}

} // namespace dualband::oracle
