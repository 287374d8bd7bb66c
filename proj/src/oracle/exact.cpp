#include "dualband/oracle/exact.hpp"

#include "dualband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace dualband::oracle {

namespace {

// (base)^(exp), or nullopt once it passes `cap`.
std::optional<std::size_t> bounded_pow(std::size_t base, std::size_t exp, std::size_t cap)
{
    std::size_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && v > cap / base) return std::nullopt;
        v *= base;
    }
    return v <= cap ? std::optional<std::size_t>(v) : std::nullopt;
}

void check_sizes(const char* who, std::size_t uas, std::size_t rbs, std::size_t patterns_base,
                 const OracleBudget& budget, std::size_t& patterns)
{
    if (uas > budget.max_uas) {
        throw BudgetError(std::string(who) + ": " + std::to_string(uas) + " UAs exceed budget of " +
                          std::to_string(budget.max_uas));
    }
    if (rbs > budget.max_rbs) {
        throw BudgetError(std::string(who) + ": " + std::to_string(rbs) + " RBs exceed budget of " +
                          std::to_string(budget.max_rbs));
    }
    const auto n = bounded_pow(patterns_base, rbs, budget.max_partitions);
    if (!n) {
        throw BudgetError(std::string(who) + ": pattern count exceeds budget of " +
                          std::to_string(budget.max_partitions));
    }
    patterns = *n;
}

} // namespace

double subset_min_power(std::span<const double> noises, double bits, double duration, double rb_bandwidth)
{
    if (bits <= 0.0) return 0.0;
    const std::size_t n = noises.size();
    if (n == 0 || n >= 8 * sizeof(std::size_t)) {
        throw BudgetError("subset_min_power: need between 1 and 63 RBs");
    }
    const double x = bits / (duration * rb_bandwidth);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        double log_sum = 0.0;
        std::size_t k = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (mask & (std::size_t{1} << r)) {
                log_sum += std::log(noises[r]);
                ++k;
            }
        }
        const double level = std::exp((log_sum + x * std::numbers::ln2) / static_cast<double>(k));
        double total = 0.0;
        bool valid = true;
        for (std::size_t r = 0; r < n && valid; ++r) {
            if (!(mask & (std::size_t{1} << r))) continue;
            const double p = level - noises[r];
            if (p < 0.0) valid = false;
            total += p;
        }
        if (valid && total < best) best = total;
    }
    return best;
}

ExactMuwResult exact_muw_optimum(const MuwInstance& inst, const OracleBudget& budget, EnumerationOrder order)
{
    const std::size_t n = inst.num_uas;
    const std::size_t k = inst.num_rbs;
    std::size_t patterns = 0;
    check_sizes("exact_muw_optimum", n, k, n + 1, budget, patterns);

    ExactMuwResult best;
    if (n == 0) {
        best.feasible = true;
        best.total_power = 0.0;
        best.rb_owner.assign(k, OwnershipMap::kUnowned);
        return best;
    }

    // cost[ua][mask], filled on first use; NaN marks "not yet computed".
    const std::size_t masks = std::size_t{1} << k;
    std::vector<double> cost(n * masks, std::numeric_limits<double>::quiet_NaN());
    auto ua_cost = [&](std::size_t ua, std::size_t mask) {
        double& c = cost[ua * masks + mask];
        if (std::isnan(c)) {
            std::vector<double> noises;
            for (std::size_t r = 0; r < k; ++r) {
                if (mask & (std::size_t{1} << r)) noises.push_back(inst.noise_at(ua, r));
            }
            c = subset_min_power(noises, inst.demand[ua], inst.slot_duration, inst.rb_bandwidth);
        }
        return c;
    };

    std::vector<std::size_t> digit(k);
    std::vector<std::size_t> mask(n);
    for (std::size_t i = 0; i < patterns; ++i) {
        std::size_t code = order == EnumerationOrder::Forward ? i : patterns - 1 - i;
        // Forward reads RB 0 as the lowest digit, Reverse as the highest.
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t rb = order == EnumerationOrder::Forward ? j : k - 1 - j;
            digit[rb] = code % (n + 1);
            code /= n + 1;
        }
        std::fill(mask.begin(), mask.end(), 0);
        for (std::size_t rb = 0; rb < k; ++rb) {
            if (digit[rb] < n) mask[digit[rb]] |= std::size_t{1} << rb;
        }
        bool every_ua = true;
        for (std::size_t ua = 0; ua < n; ++ua) every_ua = every_ua && mask[ua] != 0;
        if (!every_ua) continue;

        double total = 0.0;
        for (std::size_t ua = 0; ua < n; ++ua) total += ua_cost(ua, mask[ua]);
        if (total < best.total_power) {
            best.feasible = true;
            best.total_power = total;
            best.rb_owner.resize(k);
            for (std::size_t rb = 0; rb < k; ++rb) {
                best.rb_owner[rb] = digit[rb] < n ? digit[rb] : OwnershipMap::kUnowned;
            }
        }
    }
    return best;
}

ExactGroupingResult exact_grouping(std::span<const ProxyEntry> uas, std::size_t horizon, const OracleBudget& budget)
{
    if (horizon == 0) {
        throw BudgetError("exact_grouping: horizon must be positive");
    }
    const std::size_t n = uas.size();
    const auto patterns = bounded_pow(horizon, n, budget.max_partitions);
    if (!patterns) {
        throw BudgetError("exact_grouping: partition count exceeds budget of " +
                          std::to_string(budget.max_partitions));
    }

    ExactGroupingResult best;
    std::vector<std::size_t> label(n);
    std::vector<double> count(horizon);
    std::vector<double> power(horizon);
    for (std::size_t code = 0; code < *patterns; ++code) {
        std::size_t c = code;
        std::fill(count.begin(), count.end(), 0.0);
        std::fill(power.begin(), power.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            label[i] = c % horizon;
            c /= horizon;
            count[label[i]] += 1.0;
            power[label[i]] += uas[i].proxy;
        }
        if (n >= horizon) {
            bool nonempty = true;
            for (double cnt : count) nonempty = nonempty && cnt > 0.0;
            if (!nonempty) continue;
        }
        ++best.partitions;

        double obj = 0.0;
        for (std::size_t t = 0; t + 1 < horizon; ++t) {
            if (count[t + 1] == 0.0 || power[t + 1] == 0.0) {
                obj = std::numeric_limits<double>::infinity();
                break;
            }
            obj += std::abs(1.0 - count[t] / count[t + 1]) + std::abs(1.0 - power[t] / power[t + 1]);
        }
        if (obj < best.objective || best.label.empty()) {
            best.objective = obj;
            best.label = label;
        }
    }
    return best;
}

bool exact_ilp_feasible(std::span<const double> estimated, std::span<const double> demand, std::size_t num_rbs,
                        double slot_duration, const OracleBudget& budget)
{
    const std::size_t n = demand.size();
    if (estimated.size() != n * num_rbs) {
        throw std::invalid_argument("exact_ilp_feasible: estimate matrix has wrong size");
    }
    bool any_demand = false;
    for (double b : demand) any_demand = any_demand || b > 0.0;
    if (!any_demand) return true;

    std::size_t patterns = 0;
    check_sizes("exact_ilp_feasible", n, num_rbs, n + 1, budget, patterns);

    // Slack so a sum accumulated in another order still counts as meeting the demand.
    constexpr double kSlack = 1e-12;
    std::vector<double> carried(n);
    for (std::size_t code = 0; code < patterns; ++code) {
        std::size_t c = code;
        std::fill(carried.begin(), carried.end(), 0.0);
        for (std::size_t rb = 0; rb < num_rbs; ++rb) {
            const std::size_t owner = c % (n + 1);
            c /= n + 1;
            if (owner < n) carried[owner] += slot_duration * estimated[owner * num_rbs + rb];
        }
        bool ok = true;
        for (std::size_t ua = 0; ua < n && ok; ++ua) {
            ok = carried[ua] >= demand[ua] * (1.0 - kSlack);
        }
        if (ok) return true;
    }
    return false;
}

} // namespace dualband::oracle
