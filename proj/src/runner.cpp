#include "dualband/runner.hpp"

#include "dualband/errors.hpp"
#include "dualband/mmw_alloc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace dualband {

namespace {

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kAlgorithmStream = 1;

GroupAssignment make_grouping(Algorithm alg, const std::vector<ProxyEntry>& proxies, std::size_t horizon,
                              const ScenarioConfig& cfg, Rng& rng)
{
    switch (alg) {
    case Algorithm::GbEod:
        return group_users(proxies, horizon, cfg.eta, cfg.gamma);
    case Algorithm::RoundRobin:
        return cyclic_grouping(proxies, horizon);
    case Algorithm::RandomGroupEod:
    case Algorithm::Random:
        return random_grouping(proxies, horizon, rng);
    }
    throw std::logic_error("unknown algorithm");
}

void require_room(const MuwInstance& inst)
{
    if (inst.num_uas > inst.num_rbs) {
        throw AllocationError(std::to_string(inst.num_uas) + " microwave UAs for " +
                              std::to_string(inst.num_rbs) + " RBs");
    }
}

SlotAllocation baseline_slot(Algorithm alg, std::span<const std::size_t> group, std::span<const UserApp> uas,
                             const ChannelState& channel, std::size_t slot, std::size_t horizon,
                             const ScenarioConfig& cfg, Rng& rng)
{
    SlotAllocation out;
    out.horizon = horizon;
    out.slot = slot;
    out.group.assign(group.begin(), group.end());
    out.mmw = select_greedy(group, uas, channel.mmw, slot, cfg);
    const MuwInstance inst = make_muw_instance(out.mmw.remainder, uas, channel.muw, slot, cfg);
    if (inst.num_uas == 0) {
        out.muw.ownership = OwnershipMap(0, inst.num_rbs);
    } else {
        require_room(inst);
        OwnershipMap own = alg == Algorithm::RoundRobin ? round_robin_ownership(inst.num_uas, inst.num_rbs)
                                                        : random_ownership(inst.num_uas, inst.num_rbs, rng);
        out.muw = settle_allocation(inst, out.mmw.remainder, std::move(own));
    }
    out.muw.uas = out.mmw.remainder;
    out.mmw_power = out.mmw.total_power;
    out.muw_power = out.muw.total_power;
    return out;
}

} // namespace

Algorithm parse_algorithm(std::string_view name)
{
    if (name == "gb-eod") return Algorithm::GbEod;
    if (name == "random-group+eod") return Algorithm::RandomGroupEod;
    if (name == "round-robin") return Algorithm::RoundRobin;
    if (name == "random") return Algorithm::Random;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected gb-eod, random-group+eod, round-robin or random)");
}

std::string_view to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::GbEod: return "gb-eod";
    case Algorithm::RandomGroupEod: return "random-group+eod";
    case Algorithm::RoundRobin: return "round-robin";
    case Algorithm::Random: return "random";
    }
    return "?";
}

OwnershipMap round_robin_ownership(std::size_t num_uas, std::size_t num_rbs)
{
    OwnershipMap own(num_uas, num_rbs);
    if (num_uas == 0) return own;
    for (std::size_t k = 0; k < num_rbs; ++k) {
        own.assign(k, k % num_uas);
    }
    return own;
}

OwnershipMap random_ownership(std::size_t num_uas, std::size_t num_rbs, Rng& rng)
{
    OwnershipMap own(num_uas, num_rbs);
    if (num_uas == 0) return own;
    if (num_uas > num_rbs) {
        throw AllocationError("random_ownership: more UAs than RBs");
    }
    std::vector<std::size_t> perm(num_rbs);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, num_uas - 1);
    for (std::size_t i = 0; i < num_rbs; ++i) {
        own.assign(perm[i], i < num_uas ? i : pick(rng));
    }
    return own;
}

TrialReport run_trial(const ScenarioConfig& cfg, std::uint64_t seed, Algorithm algorithm,
                      const TrialOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    TrialReport report;
    report.seed = seed;
    report.algorithm = algorithm;

    try {
        Rng channel_rng = make_rng(seed, kChannelStream);
        Rng algorithm_rng = make_rng(seed, kAlgorithmStream);
        report.topology = generate_topology(cfg, channel_rng);
        ChannelState channel = build_channel(cfg, report.topology, report.topology.max_horizon(), channel_rng);

        for (const QoSClass& qos : report.topology.classes) {
            ClassOutcome outcome;
            const auto proxies = class_proxies(qos, report.topology.uas, cfg);
            outcome.grouping = make_grouping(algorithm, proxies, qos.horizon, cfg, algorithm_rng);
            outcome.grouping_objective = grouping_objective(outcome.grouping);
            for (std::size_t t = 0; t < qos.horizon; ++t) {
                std::vector<std::size_t> group = outcome.grouping.groups[t].members;
                std::sort(group.begin(), group.end());
                SlotAllocation slot;
                if (algorithm == Algorithm::GbEod || algorithm == Algorithm::RandomGroupEod) {
                    DescentTrace trace;
                    if (options.trace) {
                        trace = [&, t, h = qos.horizon](const DescentStep& s) { options.trace(h, t, s); };
                    }
                    slot = allocate_slot(group, report.topology.uas, channel, t, qos.horizon, cfg, trace);
                } else {
                    slot = baseline_slot(algorithm, group, report.topology.uas, channel, t, qos.horizon, cfg,
                                         algorithm_rng);
                }
                report.muw_power += slot.muw_power;
                report.mmw_power += slot.mmw_power;
                report.escalations += slot.muw.escalations;
                report.transfers += slot.muw.transfers;
                outcome.slots.push_back(std::move(slot));
            }
            report.grouping_objective += outcome.grouping_objective;
            report.classes.push_back(std::move(outcome));
        }
        if (options.keep_channel) {
            report.channel = std::move(channel);
        }
    } catch (const AllocationError& e) {
        throw AllocationError("trial seed " + std::to_string(seed) + ": " + e.what());
    }

    report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

SweepVariable parse_sweep_variable(std::string_view name)
{
    if (name == "num_ues") return SweepVariable::NumUes;
    if (name == "mmw_quota") return SweepVariable::MmwQuota;
    if (name == "none" || name.empty()) return SweepVariable::None;
    throw std::invalid_argument("unknown sweep variable '" + std::string(name) + "' (expected num_ues or mmw_quota)");
}

std::string_view to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::None: return "none";
    case SweepVariable::NumUes: return "num_ues";
    case SweepVariable::MmwQuota: return "mmw_quota";
    }
    return "?";
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& cfg, SweepVariable var, std::size_t value)
{
    ScenarioConfig out = cfg;
    if (var == SweepVariable::NumUes) out.num_ues = value;
    if (var == SweepVariable::MmwQuota) out.mmw_quota = value;
    return out;
}

Moments moments(std::span<const double> xs)
{
    Moments m;
    if (xs.empty()) return m;
    const double n = static_cast<double>(xs.size());
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stddev = std::sqrt(ss / (n - 1.0));
        m.stderr_mean = m.stddev / std::sqrt(n);
    }
    return m;
}

TrialSummary summarize(const TrialReport& r, std::size_t trial)
{
    TrialSummary s;
    s.trial = trial;
    s.seed = r.seed;
    s.ok = true;
    s.muw_power = r.muw_power;
    s.mmw_power = r.mmw_power;
    s.grouping_objective = r.grouping_objective;
    s.escalations = r.escalations;
    s.transfers = r.transfers;
    return s;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial)
{
    return base_seed + static_cast<std::uint64_t>(trial);
}

SweepResult sweep(const ScenarioConfig& cfg, SweepVariable var, std::span<const std::size_t> values,
                  std::size_t trials, Algorithm algorithm, unsigned threads)
{
    SweepResult result;
    result.variable = var;
    result.algorithm = algorithm;

    struct Job {
        std::size_t point;
        std::size_t trial;
    };
    std::vector<Job> jobs;
    std::vector<ScenarioConfig> configs;
    std::vector<std::string> config_errors;
    for (std::size_t p = 0; p < values.size(); ++p) {
        SweepPoint point;
        point.value = values[p];
        point.trials.resize(trials);
        result.points.push_back(std::move(point));
        configs.push_back(apply_sweep_value(cfg, var, values[p]));
        try {
            validate(configs.back());
            config_errors.emplace_back();
        } catch (const std::exception& e) {
            config_errors.emplace_back(e.what());
        }
        for (std::size_t i = 0; i < trials; ++i) {
            jobs.push_back({p, i});
        }
    }

    auto run_job = [&](const Job& job) {
        TrialSummary& slot = result.points[job.point].trials[job.trial];
        slot.trial = job.trial;
        slot.seed = trial_seed(cfg.rng_seed, job.trial);
        if (!config_errors[job.point].empty()) {
            slot.error = config_errors[job.point];
            return;
        }
        try {
            slot = summarize(run_trial(configs[job.point], slot.seed, algorithm), job.trial);
        } catch (const std::exception& e) {
            slot.ok = false;
            slot.error = e.what();
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, jobs.size())));
    if (workers <= 1) {
        for (const Job& job : jobs) run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < jobs.size(); j = next++) run_job(jobs[j]);
            });
        }
    }

    for (SweepPoint& point : result.points) {
        std::vector<double> muw, mmw, total;
        for (const TrialSummary& s : point.trials) {
            if (!s.ok) {
                ++point.failures;
                continue;
            }
            muw.push_back(s.muw_power);
            mmw.push_back(s.mmw_power);
            total.push_back(s.total_power());
        }
        point.muw = moments(muw);
        point.mmw = moments(mmw);
        point.total = moments(total);
    }
    return result;
}

} // namespace dualband
