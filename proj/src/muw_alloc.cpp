#include "dualband/muw_alloc.hpp"

#include "dualband/errors.hpp"
#include "dualband/mmw_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dualband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum power of one UA over an RB set, evaluated on ascending noise with
// cached logs. Scratch buffers are reused across calls.
class SetEvaluator {
public:
    explicit SetEvaluator(const MuwInstance& inst) : inst_(inst), logs_(inst.noise.size())
    {
        for (std::size_t i = 0; i < inst.noise.size(); ++i) {
            logs_[i] = std::log2(inst.noise[i]);
        }
    }

    double exponent(std::size_t ua) const
    {
        return inst_.demand[ua] / (inst_.slot_duration * inst_.rb_bandwidth);
    }

    // `rbs` ascending by noise for this UA.
    double value(std::size_t ua, std::span<const std::size_t> rbs)
    {
        if (inst_.demand[ua] == 0.0) {
            return 0.0;
        }
        if (rbs.empty()) {
            return kInf;
        }
        noise_.clear();
        log_.clear();
        for (std::size_t k : rbs) {
            noise_.push_back(inst_.noise_at(ua, k));
            log_.push_back(logs_[ua * inst_.num_rbs + k]);
        }
        return min_power_total_sorted(noise_, log_, exponent(ua));
    }

    std::vector<std::size_t> sorted_by_noise(std::size_t ua, std::span<const std::size_t> rbs) const
    {
        std::vector<std::size_t> out(rbs.begin(), rbs.end());
        std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
            return inst_.noise_at(ua, a) < inst_.noise_at(ua, b);
        });
        return out;
    }

    // Value of `sorted` without `skip`.
    double value_without(std::size_t ua, std::span<const std::size_t> sorted, std::size_t skip)
    {
        tmp_.clear();
        for (std::size_t k : sorted) {
            if (k != skip) tmp_.push_back(k);
        }
        return value(ua, tmp_);
    }

    // Value of `sorted` with `extra` inserted in noise order.
    double value_with(std::size_t ua, std::span<const std::size_t> sorted, std::size_t extra)
    {
        tmp_.clear();
        const double n_extra = inst_.noise_at(ua, extra);
        bool placed = false;
        for (std::size_t k : sorted) {
            if (!placed && n_extra < inst_.noise_at(ua, k)) {
                tmp_.push_back(extra);
                placed = true;
            }
            tmp_.push_back(k);
        }
        if (!placed) tmp_.push_back(extra);
        return value(ua, tmp_);
    }

private:
    const MuwInstance& inst_;
    std::vector<double> logs_;
    std::vector<double> noise_;
    std::vector<double> log_;
    std::vector<std::size_t> tmp_;
};

double sum_power(std::span<const RbSetSolution> sols)
{
    double total = 0.0;
    for (const auto& s : sols) total += s.total_power;
    return total;
}

RbSetSolution settle_one(const MuwInstance& inst, std::size_t ua, std::span<const std::size_t> rbs)
{
    if (rbs.empty()) {
        if (inst.demand[ua] > 0.0) {
            throw AllocationError("settle_power: UA " + std::to_string(ua) + " has demand but owns no RB");
        }
        return {};
    }
    return min_power_waterfill(inst.row(ua), rbs, inst.demand[ua], inst.slot_duration, inst.rb_bandwidth);
}

std::size_t demanding_uas(const MuwInstance& inst)
{
    return static_cast<std::size_t>(
        std::count_if(inst.demand.begin(), inst.demand.end(), [](double b) { return b > 0.0; }));
}

} // namespace

MuwInstance make_muw_instance(std::span<const std::size_t> ua_ids, std::span<const UserApp> uas,
                              const EffectiveNoiseMap& muw, std::size_t slot, const ScenarioConfig& cfg)
{
    MuwInstance inst;
    inst.num_uas = ua_ids.size();
    inst.num_rbs = muw.num_rbs();
    inst.slot_duration = cfg.slot_duration;
    inst.rb_bandwidth = cfg.muw.rb_bandwidth_hz;
    inst.noise.reserve(inst.num_uas * inst.num_rbs);
    for (std::size_t id : ua_ids) {
        const auto row = muw.row(id, slot);
        inst.noise.insert(inst.noise.end(), row.begin(), row.end());
        inst.demand.push_back(uas[id].demand_bits);
        inst.distance.push_back(uas[id].distance_m);
    }
    return inst;
}

std::vector<std::size_t> rb_budgets_from_distance(std::span<const double> distances, std::size_t num_rbs)
{
    const std::size_t n = distances.size();
    std::vector<std::size_t> m(n, 1);
    if (n == 0 || n >= num_rbs) {
        return m;
    }
    const double total = std::accumulate(distances.begin(), distances.end(), 0.0);
    std::vector<double> quota(n);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        quota[i] = total > 0.0 ? static_cast<double>(num_rbs) * distances[i] / total
                               : static_cast<double>(num_rbs) / static_cast<double>(n);
        m[i] = static_cast<std::size_t>(std::floor(quota[i]));
        assigned += m[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
    });
    for (std::size_t i = 0; assigned < num_rbs; i = (i + 1) % n) {
        ++m[order[i]];
        ++assigned;
    }
    // Lift zero budgets to one, paying from the largest budget.
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i] == 0) {
            const auto largest = std::max_element(m.begin(), m.end());
            --*largest;
            m[i] = 1;
        }
    }
    return m;
}

double beta_init(std::span<const double> noise_row, double demand, std::size_t rb_budget,
                 double slot_duration, double rb_bandwidth)
{
    if (rb_budget == 0 || noise_row.empty()) {
        throw std::invalid_argument("beta_init: budget and noise row must be non-empty");
    }
    const double scale = slot_duration * rb_bandwidth / std::numbers::ln2;
    double mean_log = 0.0;
    for (double n : noise_row) {
        mean_log += std::log2(scale / n);
    }
    mean_log /= static_cast<double>(noise_row.size());
    return demand / (slot_duration * static_cast<double>(rb_budget) * rb_bandwidth) - mean_log;
}

BetaState init_beta(const MuwInstance& inst)
{
    BetaState beta;
    beta.rb_budget = rb_budgets_from_distance(inst.distance, inst.num_rbs);
    for (std::size_t n = 0; n < inst.num_uas; ++n) {
        beta.log2_neg_beta.push_back(
            beta_init(inst.row(n), inst.demand[n], beta.rb_budget[n], inst.slot_duration, inst.rb_bandwidth));
    }
    return beta;
}

std::vector<double> estimate_rates(const MuwInstance& inst, const BetaState& beta)
{
    const double scale = inst.slot_duration * inst.rb_bandwidth / std::numbers::ln2;
    std::vector<double> out(inst.num_uas * inst.num_rbs, 0.0);
    for (std::size_t n = 0; n < inst.num_uas; ++n) {
        for (std::size_t k = 0; k < inst.num_rbs; ++k) {
            const double r = inst.rb_bandwidth * (beta.log2_neg_beta[n] + std::log2(scale / inst.noise_at(n, k)));
            out[n * inst.num_rbs + k] = r > 0.0 ? r : 0.0;
        }
    }
    return out;
}

AssignmentResult construct_assignment(const MuwInstance& inst, std::span<const double> estimated)
{
    const std::size_t n_ua = inst.num_uas;
    const std::size_t n_rb = inst.num_rbs;
    if (estimated.size() != n_ua * n_rb) {
        throw std::invalid_argument("construct_assignment: estimate matrix has the wrong size");
    }

    std::vector<double> hardness(n_ua, 0.0);
    for (std::size_t n = 0; n < n_ua; ++n) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < n_rb; ++k) {
            const double r = estimated[n * n_rb + k];
            if (r > 0.0) {
                sum += r;
                ++count;
            }
        }
        if (inst.demand[n] == 0.0) {
            hardness[n] = 0.0;
        } else {
            hardness[n] = count == 0 ? kInf : inst.demand[n] / (sum / static_cast<double>(count));
        }
    }
    std::vector<std::size_t> order(n_ua);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return hardness[a] > hardness[b]; });

    AssignmentResult res;
    res.ownership = OwnershipMap(n_ua, n_rb);
    res.satisfied.assign(n_ua, false);
    res.feasible = true;

    std::vector<std::size_t> ranked;
    for (std::size_t n : order) {
        if (inst.demand[n] == 0.0) {
            res.satisfied[n] = true;
            continue;
        }
        ranked.clear();
        for (std::size_t k = 0; k < n_rb; ++k) {
            if (estimated[n * n_rb + k] > 0.0 && res.ownership.rb_owner[k] == OwnershipMap::kUnowned) {
                ranked.push_back(k);
            }
        }
        std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            return estimated[n * n_rb + a] > estimated[n * n_rb + b];
        });
        double carried = 0.0;
        for (std::size_t k : ranked) {
            if (carried >= inst.demand[n]) break;
            res.ownership.assign(k, n);
            carried += inst.slot_duration * estimated[n * n_rb + k];
        }
        if (carried >= inst.demand[n]) {
            res.satisfied[n] = true;
        } else {
            res.feasible = false;
            for (std::size_t k : std::vector<std::size_t>(res.ownership.owned[n])) {
                res.ownership.release(k);
            }
        }
    }
    return res;
}

void escalate(BetaState& beta, double step, const std::vector<bool>& only)
{
    for (std::size_t n = 0; n < beta.log2_neg_beta.size(); ++n) {
        if (only.empty() || only[n]) {
            beta.log2_neg_beta[n] += step;
        }
    }
}

EscalationOutcome find_feasible_assignment(const MuwInstance& inst, BetaState beta, double step,
                                           EscalationMode mode, std::size_t cap)
{
    const std::size_t demanding = demanding_uas(inst);
    if (demanding > inst.num_rbs) {
        throw AllocationError("feasibility escalation cannot succeed: " + std::to_string(demanding) +
                              " microwave UAs for " + std::to_string(inst.num_rbs) + " RBs");
    }
    if (!(step > 0.0)) {
        throw std::invalid_argument("find_feasible_assignment: step must be positive");
    }
    for (std::size_t count = 0;; ++count) {
        AssignmentResult res = construct_assignment(inst, estimate_rates(inst, beta));
        if (res.feasible) {
            return {std::move(res.ownership), std::move(beta), count};
        }
        if (count >= cap) {
            throw AllocationError("feasibility escalation hit its iteration cap of " + std::to_string(cap));
        }
        if (mode == EscalationMode::PerUa) {
            std::vector<bool> unsatisfied(res.satisfied.size());
            std::transform(res.satisfied.begin(), res.satisfied.end(), unsatisfied.begin(),
                           [](bool s) { return !s; });
            escalate(beta, step, unsatisfied);
        } else {
            escalate(beta, step);
        }
    }
}

std::vector<RbSetSolution> settle_power(const MuwInstance& inst, const OwnershipMap& own)
{
    if (own.num_uas() != inst.num_uas || own.num_rbs() != inst.num_rbs) {
        throw std::invalid_argument("settle_power: ownership does not match the instance");
    }
    std::vector<RbSetSolution> out;
    out.reserve(inst.num_uas);
    for (std::size_t n = 0; n < inst.num_uas; ++n) {
        out.push_back(settle_one(inst, n, own.owned[n]));
    }
    return out;
}

TransferDeltas transfer_deltas(const MuwInstance& inst, const OwnershipMap& own,
                               std::span<const RbSetSolution> settled)
{
    const std::size_t n_ua = inst.num_uas;
    const std::size_t n_rb = inst.num_rbs;
    if (settled.size() != n_ua) {
        throw std::invalid_argument("transfer_deltas: one settled solution per UA required");
    }

    SetEvaluator eval(inst);
    std::vector<std::vector<std::size_t>> sorted(n_ua);
    std::vector<double> current(n_ua);
    for (std::size_t n = 0; n < n_ua; ++n) {
        sorted[n] = eval.sorted_by_noise(n, own.owned[n]);
        current[n] = eval.value(n, sorted[n]);
    }

    TransferDeltas d;
    d.num_rbs = n_rb;
    d.num_uas = n_ua;
    d.net.assign(n_rb * n_ua, -kInf);
    d.best.assign(n_rb, -kInf);
    d.best_receiver.assign(n_rb, OwnershipMap::kUnowned);

    for (std::size_t k = 0; k < n_rb; ++k) {
        const std::size_t donor = own.rb_owner[k];
        double donor_change = 0.0;
        if (donor != OwnershipMap::kUnowned) {
            if (own.owned[donor].size() < 2) {
                continue;
            }
            donor_change = current[donor] - eval.value_without(donor, sorted[donor], k);
        }
        for (std::size_t r = 0; r < n_ua; ++r) {
            if (r == donor) continue;
            double receiver_change = 0.0;
            if (inst.demand[r] > 0.0) {
                const bool above_level = !sorted[r].empty() && inst.noise_at(r, k) >= settled[r].water_level;
                if (!above_level) {
                    receiver_change = current[r] - eval.value_with(r, sorted[r], k);
                }
            }
            const double net = donor_change + receiver_change;
            d.net[k * n_ua + r] = net;
            if (net > d.best[k]) {
                d.best[k] = net;
                d.best_receiver[k] = r;
            }
        }
    }
    return d;
}

LocalSearchResult local_search(const MuwInstance& inst, OwnershipMap own, const DescentTrace& trace,
                               double relative_tolerance)
{
    for (std::size_t n = 0; n < inst.num_uas; ++n) {
        if (inst.demand[n] > 0.0 && own.owned.at(n).empty()) {
            throw std::invalid_argument("local_search: starting ownership leaves a UA without RBs");
        }
    }

    LocalSearchResult res;
    res.solutions = settle_power(inst, own);
    res.initial_power = sum_power(res.solutions);
    res.total_power = res.initial_power;
    res.power_trace.push_back(res.total_power);

    for (;;) {
        const TransferDeltas d = transfer_deltas(inst, own, res.solutions);
        std::size_t rb = OwnershipMap::kUnowned;
        double best = -kInf;
        for (std::size_t k = 0; k < d.num_rbs; ++k) {
            if (d.best[k] > best) {
                best = d.best[k];
                rb = k;
            }
        }
        if (rb == OwnershipMap::kUnowned || !(best > relative_tolerance * res.total_power)) {
            break;
        }
        const std::size_t donor = own.rb_owner[rb];
        const std::size_t receiver = d.best_receiver[rb];
        const std::vector<RbSetSolution> before = res.solutions;
        own.transfer(rb, receiver);
        if (donor != OwnershipMap::kUnowned) {
            res.solutions[donor] = settle_one(inst, donor, own.owned[donor]);
        }
        res.solutions[receiver] = settle_one(inst, receiver, own.owned[receiver]);
        const double total = sum_power(res.solutions);
        if (!(total < res.total_power)) {
            // Rounding ate the predicted gain; undo and stop.
            if (donor == OwnershipMap::kUnowned) {
                own.release(rb);
            } else {
                own.transfer(rb, donor);
            }
            res.solutions = before;
            break;
        }
        res.total_power = total;
        ++res.transfers;
        res.power_trace.push_back(total);
        if (trace) {
            trace({res.transfers, rb, donor, receiver, total});
        }
    }
    res.ownership = std::move(own);
    return res;
}

MuwAllocation settle_allocation(const MuwInstance& inst, std::span<const std::size_t> ua_ids,
                                OwnershipMap own)
{
    MuwAllocation out;
    if (ua_ids.empty()) {
        out.uas.resize(inst.num_uas);
        std::iota(out.uas.begin(), out.uas.end(), std::size_t{0});
    } else {
        out.uas.assign(ua_ids.begin(), ua_ids.end());
    }
    out.solutions = settle_power(inst, own);
    out.total_power = sum_power(out.solutions);
    out.ownership = std::move(own);
    return out;
}

MuwAllocation allocate_muw(const MuwInstance& inst, std::span<const std::size_t> ua_ids,
                           const ScenarioConfig& cfg, const DescentTrace& trace)
{
    if (!ua_ids.empty() && ua_ids.size() != inst.num_uas) {
        throw std::invalid_argument("allocate_muw: ua_ids must label every UA of the instance");
    }
    if (inst.num_uas == 0) {
        MuwAllocation empty;
        empty.ownership = OwnershipMap(0, inst.num_rbs);
        return empty;
    }
    EscalationOutcome start = find_feasible_assignment(inst, init_beta(inst), cfg.step, cfg.escalation_mode,
                                                       cfg.escalation_cap);
    LocalSearchResult ls = local_search(inst, std::move(start.ownership), trace);

    MuwAllocation out;
    if (ua_ids.empty()) {
        out.uas.resize(inst.num_uas);
        std::iota(out.uas.begin(), out.uas.end(), std::size_t{0});
    } else {
        out.uas.assign(ua_ids.begin(), ua_ids.end());
    }
    out.ownership = std::move(ls.ownership);
    out.solutions = std::move(ls.solutions);
    out.total_power = ls.total_power;
    out.escalations = start.escalations;
    out.transfers = ls.transfers;
    return out;
}

SlotAllocation allocate_slot(std::span<const std::size_t> group, std::span<const UserApp> uas,
                             const ChannelState& channel, std::size_t slot, std::size_t horizon,
                             const ScenarioConfig& cfg, const DescentTrace& trace)
{
    SlotAllocation out;
    out.horizon = horizon;
    out.slot = slot;
    out.group.assign(group.begin(), group.end());
    out.mmw = select_greedy(group, uas, channel.mmw, slot, cfg);
    const MuwInstance inst = make_muw_instance(out.mmw.remainder, uas, channel.muw, slot, cfg);
    DescentTrace relabel;
    if (trace) {
        relabel = [&](const DescentStep& s) {
            DescentStep g = s;
            if (g.donor != OwnershipMap::kUnowned) g.donor = out.mmw.remainder[g.donor];
            g.receiver = out.mmw.remainder[g.receiver];
            trace(g);
        };
    }
    out.muw = allocate_muw(inst, out.mmw.remainder, cfg, relabel);
    if (out.muw.uas.empty()) {
        out.muw.uas = out.mmw.remainder;
    }
    out.mmw_power = out.mmw.total_power;
    out.muw_power = out.muw.total_power;
    return out;
}

} // namespace dualband
