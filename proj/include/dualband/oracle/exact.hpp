#pragma once

// Brute-force references for tests and gap reports. Nothing here calls the
// allocators; water-filling is re-derived by subset enumeration.

#include "dualband/grouping.hpp"
#include "dualband/muw_alloc.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace dualband::oracle {

struct OracleBudget {
    std::size_t max_uas = 3;
    std::size_t max_rbs = 6;
    std::size_t max_partitions = 1'000'000; ///< cap on enumerated patterns
};

/// Minimum over every nonempty subset S of the closed-form split on S,
/// skipping subsets where any RB would get negative power. Zero bits cost 0.
double subset_min_power(std::span<const double> noises, double bits, double duration, double rb_bandwidth);

enum class EnumerationOrder { Forward, Reverse };

struct ExactMuwResult {
    bool feasible = false;
    double total_power = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> rb_owner; ///< local UA or OwnershipMap::kUnowned
};

/// Every map RB -> UA or unowned; maps leaving a UA without RBs are skipped.
ExactMuwResult exact_muw_optimum(const MuwInstance& inst, const OracleBudget& budget = {},
                                 EnumerationOrder order = EnumerationOrder::Forward);

struct ExactGroupingResult {
    double objective = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> label; ///< group index per entry of the input
    std::size_t partitions = 0;     ///< labelled partitions evaluated
};

/// Every assignment of the UAs to `horizon` labelled, nonempty groups.
ExactGroupingResult exact_grouping(std::span<const ProxyEntry> uas, std::size_t horizon,
                                   const OracleBudget& budget = {});

/// Whether some 0-1 ownership (each RB to at most one UA) gives every UA
/// tau * sum of its estimated rates >= demand. `estimated` is [ua][rb].
bool exact_ilp_feasible(std::span<const double> estimated, std::span<const double> demand, std::size_t num_rbs,
                        double slot_duration, const OracleBudget& budget = {});

} // namespace dualband::oracle
