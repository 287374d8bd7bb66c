#pragma once

#include "dualband/allocation.hpp"
#include "dualband/channel.hpp"
#include "dualband/grouping.hpp"
#include "dualband/muw_alloc.hpp"
#include "dualband/scenario.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dualband {

enum class Algorithm {
    GbEod,          ///< group-based scheduling + estimation/descent microwave allocation
    RandomGroupEod, ///< random grouping + the same slot allocator
    RoundRobin,     ///< cyclic grouping, cyclic microwave RBs
    Random,         ///< random grouping, random microwave RBs
};

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

/// RB k goes to local UA k mod n.
OwnershipMap round_robin_ownership(std::size_t num_uas, std::size_t num_rbs);

/// Every UA gets one distinct random RB, the rest are drawn uniformly.
OwnershipMap random_ownership(std::size_t num_uas, std::size_t num_rbs, Rng& rng);

struct ClassOutcome {
    GroupAssignment grouping;
    double grouping_objective = 0.0;
    std::vector<SlotAllocation> slots;
};

struct TrialReport {
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::GbEod;
    Topology topology;
    std::vector<ClassOutcome> classes;
    std::optional<ChannelState> channel; ///< kept on request
    double muw_power = 0.0;
    double mmw_power = 0.0;
    double grouping_objective = 0.0; ///< summed over classes
    std::size_t escalations = 0;
    std::size_t transfers = 0;
    double runtime_ms = 0.0; ///< wall clock; never written to CSV

    double total_power() const { return muw_power + mmw_power; }
};

using SlotDescentTrace =
    std::function<void(std::size_t horizon, std::size_t slot, const DescentStep& step)>;

struct TrialOptions {
    bool keep_channel = false;
    SlotDescentTrace trace;
};

/// One trial: topology, channel, grouping and per-slot dual-band allocation.
/// Deterministic in (cfg, seed, algorithm); all algorithms see the same
/// topology and channel for a given seed.
TrialReport run_trial(const ScenarioConfig& cfg, std::uint64_t seed, Algorithm algorithm,
                      const TrialOptions& options = {});

enum class SweepVariable { None, NumUes, MmwQuota };

SweepVariable parse_sweep_variable(std::string_view name);
std::string_view to_string(SweepVariable v);

/// Copy of `cfg` with the swept variable set to `value`.
ScenarioConfig apply_sweep_value(const ScenarioConfig& cfg, SweepVariable var, std::size_t value);

struct TrialSummary {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double muw_power = 0.0;
    double mmw_power = 0.0;
    double grouping_objective = 0.0;
    std::size_t escalations = 0;
    std::size_t transfers = 0;

    double total_power() const { return muw_power + mmw_power; }
};

struct Moments {
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation
    double stderr_mean = 0.0;
};

Moments moments(std::span<const double> xs);

struct SweepPoint {
    std::size_t value = 0;
    std::vector<TrialSummary> trials;
    std::size_t failures = 0;
    Moments muw;
    Moments mmw;
    Moments total;
};

struct SweepResult {
    SweepVariable variable = SweepVariable::None;
    Algorithm algorithm = Algorithm::GbEod;
    std::vector<SweepPoint> points;
};

TrialSummary summarize(const TrialReport& r, std::size_t trial);

/// Seed of trial `i` of a run based at `base_seed`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

/// Runs `trials` seeds per value (seeds from cfg.rng_seed). Failed trials are
/// recorded and excluded from the moments. Trials may run on `threads`
/// workers (0 = hardware concurrency); results are merged in seed order.
SweepResult sweep(const ScenarioConfig& cfg, SweepVariable var, std::span<const std::size_t> values,
                  std::size_t trials, Algorithm algorithm, unsigned threads = 0);

} // namespace dualband
