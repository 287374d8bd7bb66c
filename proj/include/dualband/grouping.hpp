#pragma once

#include "dualband/scenario.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dualband {

/// Per-UA grouping metric: minimum microwave power over all K1 RBs with
/// unit fading and no shadowing, so only distance matters.
double proxy_power(const UserApp& ua, const ScenarioConfig& cfg);

struct ProxyEntry {
    std::size_t ua_id = 0;
    double proxy = 0.0;
};

struct Group {
    std::vector<std::size_t> members; ///< ua ids in insertion order
    double power = 0.0;               ///< sum of member proxies
};

/// Partition of one QoS class into `groups.size()` slot groups.
struct GroupAssignment {
    std::size_t horizon = 0;
    std::vector<Group> groups;
    std::vector<ProxyEntry> proxies; ///< descending proxy, ties by ua id
    bool underfilled = false;        ///< fewer UAs than slots; some groups empty

    std::size_t size() const;
};

/// Greedy balance of cardinality and proxy power across `horizon` groups.
/// The first `horizon` UAs (by descending proxy) seed one group each; every
/// later UA joins the group with the largest weighted deviation reduction
/// D(j) = eta (a1 - b1) + gamma (a2 - b2), ties to the lowest index.
GroupAssignment group_users(std::span<const ProxyEntry> uas, std::size_t horizon, double eta,
                            double gamma);

/// Sum over consecutive groups of |1 - n_t / n_{t+1}| + |1 - P_t / P_{t+1}|.
/// Infinite when a successor group is empty or has zero power.
double grouping_objective(std::span<const std::size_t> counts, std::span<const double> powers);
double grouping_objective(const GroupAssignment& ga);

/// Proxies for the members of one class, sorted descending.
std::vector<ProxyEntry> class_proxies(const QoSClass& qos, std::span<const UserApp> uas,
                                      const ScenarioConfig& cfg);

/// Slot group = position in ua-id order modulo the horizon.
GroupAssignment cyclic_grouping(std::span<const ProxyEntry> uas, std::size_t horizon);

/// Uniform-random partition; the first `horizon` UAs of a random permutation
/// seed one group each so that no group is empty when N >= T.
GroupAssignment random_grouping(std::span<const ProxyEntry> uas, std::size_t horizon, Rng& rng);

/// True when `ga` partitions exactly the ids in `members`.
bool is_partition(const GroupAssignment& ga, std::span<const std::size_t> members);

} // namespace dualband
