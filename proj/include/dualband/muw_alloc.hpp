#pragma once

#include "dualband/allocation.hpp"
#include "dualband/channel.hpp"
#include "dualband/scenario.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dualband {

/// Dense microwave sub-problem of one slot: the UAs left after mmW
/// selection and their noise rows over the K1 RBs.
struct MuwInstance {
    std::size_t num_uas = 0;
    std::size_t num_rbs = 0;
    std::vector<double> noise; ///< row-major [ua][rb], W
    std::vector<double> demand; ///< bits per UA
    std::vector<double> distance; ///< meters per UA
    double slot_duration = 0.0;
    double rb_bandwidth = 0.0;

    double noise_at(std::size_t ua, std::size_t rb) const { return noise[ua * num_rbs + rb]; }
    std::span<const double> row(std::size_t ua) const
    {
        return std::span<const double>(noise).subspan(ua * num_rbs, num_rbs);
    }
};

MuwInstance make_muw_instance(std::span<const std::size_t> ua_ids, std::span<const UserApp> uas,
                              const EffectiveNoiseMap& muw, std::size_t slot, const ScenarioConfig& cfg);

// --- rate estimation -------------------------------------------------------
//
// Stationarity of the Lagrangian gives, for every RB a UA actually uses,
//   R_nk >= omega log2(-beta_n tau omega / (N_nk ln 2)).
// Requiring m such RBs to carry the demand bounds log2(-beta_n) from below by
//   b / (tau m omega) - (1/m) sum_{k<=m} log2(tau omega / (N_nk ln 2)).
// Neither m nor the m RBs are known up front, so the estimate uses a
// distance-proportional budget m_n and averages the log term over all K1 RBs.

/// Estimated multiplier per UA, log2(-beta_n), and the RB budget it was built from.
struct BetaState {
    std::vector<double> log2_neg_beta;
    std::vector<std::size_t> rb_budget;
};

/// m_n proportional to distance with largest-remainder rounding, each >= 1,
/// summing to `num_rbs` whenever there are at most `num_rbs` UAs.
std::vector<std::size_t> rb_budgets_from_distance(std::span<const double> distances, std::size_t num_rbs);

/// b / (tau m omega) - mean_k log2(tau omega / (N_k ln 2)).
double beta_init(std::span<const double> noise_row, double demand, std::size_t rb_budget,
                 double slot_duration, double rb_bandwidth);

BetaState init_beta(const MuwInstance& inst);

/// Row-major [ua][rb] estimates max(0, omega (log2(-beta_n) + log2(tau omega / (N ln 2)))).
/// RB k is a candidate for UA n iff its estimate is positive.
std::vector<double> estimate_rates(const MuwInstance& inst, const BetaState& beta);

struct AssignmentResult {
    bool feasible = false;
    OwnershipMap ownership;
    std::vector<bool> satisfied;
};

/// Hardest-first greedy certificate for the 0-1 feasibility problem: UAs in
/// descending demand / (mean candidate estimate) claim their free candidate
/// RBs by descending estimate until tau * sum >= demand. Sufficient, not
/// necessary. A UA that cannot be satisfied releases its claims.
AssignmentResult construct_assignment(const MuwInstance& inst, std::span<const double> estimated);

/// Adds `step` to every log2(-beta_n), or only to UAs with `only[n]` set when
/// `only` is non-empty.
void escalate(BetaState& beta, double step, const std::vector<bool>& only = {});

struct EscalationOutcome {
    OwnershipMap ownership;
    BetaState beta;
    std::size_t escalations = 0;
};

/// Escalates until construct_assignment succeeds. Throws AllocationError when
/// the instance has more UAs with demand than RBs or after `cap` escalations.
EscalationOutcome find_feasible_assignment(const MuwInstance& inst, BetaState beta, double step,
                                           EscalationMode mode, std::size_t cap);

// --- power settlement and descent -------------------------------------------

/// Water-filling of each UA's demand over the RBs it owns.
std::vector<RbSetSolution> settle_power(const MuwInstance& inst, const OwnershipMap& own);

/// Net power reduction for moving RB k to UA n (positive = improvement).
///
/// Donor change V(n1, I) - V(n1, I \ k) is zero for an unowned RB; receiver
/// change V(n2, J) - V(n2, J + k) is zero when N_{n2,k} is at or above the
/// receiver's water level. Disallowed moves (current owner, donor left
/// without RBs) hold -infinity.
struct TransferDeltas {
    std::size_t num_rbs = 0;
    std::size_t num_uas = 0;
    std::vector<double> net; ///< rb-major [rb][receiver]
    std::vector<double> best; ///< per RB, max over receivers
    std::vector<std::size_t> best_receiver; ///< per RB, OwnershipMap::kUnowned if none

    double at(std::size_t rb, std::size_t receiver) const { return net[rb * num_uas + receiver]; }
};

TransferDeltas transfer_deltas(const MuwInstance& inst, const OwnershipMap& own,
                               std::span<const RbSetSolution> settled);

struct DescentStep {
    std::size_t iteration = 0;
    std::size_t rb = 0;
    std::size_t donor = OwnershipMap::kUnowned; ///< local index, kUnowned for a free RB
    std::size_t receiver = 0;
    double total_power = 0.0; ///< after the move
};

using DescentTrace = std::function<void(const DescentStep&)>;

struct LocalSearchResult {
    OwnershipMap ownership;
    std::vector<RbSetSolution> solutions;
    double initial_power = 0.0;
    double total_power = 0.0;
    std::size_t transfers = 0;
    std::vector<double> power_trace; ///< total after settlement, then after each move
};

/// Executes the single best RB move while it lowers total power by more than
/// `relative_tolerance` of the current total. Ties: lowest RB, then lowest receiver.
LocalSearchResult local_search(const MuwInstance& inst, OwnershipMap own, const DescentTrace& trace = {},
                               double relative_tolerance = 1e-12);

/// Full microwave allocator: estimation, feasibility escalation, settlement,
/// descent. `ua_ids` labels the local UAs in the result (local indices if empty).
MuwAllocation allocate_muw(const MuwInstance& inst, std::span<const std::size_t> ua_ids,
                           const ScenarioConfig& cfg, const DescentTrace& trace = {});

/// One slot end to end: greedy mmW selection, then the microwave allocator.
/// Trace steps report donor and receiver as ua ids.
SlotAllocation allocate_slot(std::span<const std::size_t> group, std::span<const UserApp> uas,
                             const ChannelState& channel, std::size_t slot, std::size_t horizon,
                             const ScenarioConfig& cfg, const DescentTrace& trace = {});

/// Settles a fixed ownership into a MuwAllocation (used by the baselines).
MuwAllocation settle_allocation(const MuwInstance& inst, std::span<const std::size_t> ua_ids,
                                OwnershipMap own);

} // namespace dualband
