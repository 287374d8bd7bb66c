#include "dualband/grouping.hpp"

#include "dualband/channel.hpp"
#include "dualband/powermodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace dualband {

namespace {

std::vector<ProxyEntry> sorted_descending(std::span<const ProxyEntry> uas)
{
    std::vector<ProxyEntry> sorted(uas.begin(), uas.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const ProxyEntry& a, const ProxyEntry& b) {
        if (a.proxy != b.proxy) return a.proxy > b.proxy;
        return a.ua_id < b.ua_id;
    });
    return sorted;
}

GroupAssignment empty_assignment(std::span<const ProxyEntry> uas, std::size_t horizon)
{
    if (horizon == 0) {
        throw std::invalid_argument("grouping: horizon must be at least 1");
    }
    GroupAssignment ga;
    ga.horizon = horizon;
    ga.groups.resize(horizon);
    ga.proxies = sorted_descending(uas);
    ga.underfilled = uas.size() < horizon;
    return ga;
}

void add(Group& g, const ProxyEntry& e)
{
    g.members.push_back(e.ua_id);
    g.power += e.proxy;
}

} // namespace

double proxy_power(const UserApp& ua, const ScenarioConfig& cfg)
{
    const double loss_db = path_loss_db(cfg.muw.pathloss, ua.distance_m, 0.0);
    const double noise = cfg.muw.rb_bandwidth_hz * cfg.noise_density * std::pow(10.0, 0.1 * loss_db);
    const std::vector<double> noises(cfg.muw.rb_count(), noise);
    return min_power_total(noises, ua.demand_bits, cfg.slot_duration, cfg.muw.rb_bandwidth_hz);
}

std::size_t GroupAssignment::size() const
{
    std::size_t n = 0;
    for (const auto& g : groups) {
        n += g.members.size();
    }
    return n;
}

GroupAssignment group_users(std::span<const ProxyEntry> uas, std::size_t horizon, double eta,
                            double gamma)
{
    GroupAssignment ga = empty_assignment(uas, horizon);
    const auto& sorted = ga.proxies;
    const double n = static_cast<double>(sorted.size());
    double total = 0.0;
    for (const auto& e : sorted) {
        total += e.proxy;
    }
    const double count_target = n / static_cast<double>(horizon);
    const double power_target = total / static_cast<double>(horizon);

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i < horizon) {
            add(ga.groups[i], sorted[i]);
            continue;
        }
        std::size_t best = 0;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < horizon; ++j) {
            const Group& g = ga.groups[j];
            const double count = static_cast<double>(g.members.size());
            const double a1 = std::abs(count - count_target);
            const double b1 = std::abs(count + 1.0 - count_target);
            const double a2 = std::abs(g.power - power_target);
            const double b2 = std::abs(g.power + sorted[i].proxy - power_target);
            const double gain = eta * (a1 - b1) + gamma * (a2 - b2);
            if (gain > best_gain) {
                best_gain = gain;
                best = j;
            }
        }
        add(ga.groups[best], sorted[i]);
    }
    return ga;
}

double grouping_objective(std::span<const std::size_t> counts, std::span<const double> powers)
{
    if (counts.size() != powers.size()) {
        throw std::invalid_argument("grouping_objective: counts and powers differ in length");
    }
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < counts.size(); ++t) {
        if (counts[t + 1] == 0 || !(powers[t + 1] > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        const double sigma = 1.0 - static_cast<double>(counts[t]) / static_cast<double>(counts[t + 1]);
        const double eps = 1.0 - powers[t] / powers[t + 1];
        sum += std::abs(sigma) + std::abs(eps);
    }
    return sum;
}

double grouping_objective(const GroupAssignment& ga)
{
    std::vector<std::size_t> counts;
    std::vector<double> powers;
    for (const auto& g : ga.groups) {
        counts.push_back(g.members.size());
        powers.push_back(g.power);
    }
    return grouping_objective(counts, powers);
}

std::vector<ProxyEntry> class_proxies(const QoSClass& qos, std::span<const UserApp> uas,
                                      const ScenarioConfig& cfg)
{
    std::vector<ProxyEntry> out;
    out.reserve(qos.members.size());
    for (std::size_t id : qos.members) {
        out.push_back({id, proxy_power(uas[id], cfg)});
    }
    return sorted_descending(out);
}

GroupAssignment cyclic_grouping(std::span<const ProxyEntry> uas, std::size_t horizon)
{
    GroupAssignment ga = empty_assignment(uas, horizon);
    std::vector<ProxyEntry> by_id(uas.begin(), uas.end());
    std::sort(by_id.begin(), by_id.end(),
              [](const ProxyEntry& a, const ProxyEntry& b) { return a.ua_id < b.ua_id; });
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        add(ga.groups[i % horizon], by_id[i]);
    }
    return ga;
}

GroupAssignment random_grouping(std::span<const ProxyEntry> uas, std::size_t horizon, Rng& rng)
{
    GroupAssignment ga = empty_assignment(uas, horizon);
    std::vector<ProxyEntry> order(uas.begin(), uas.end());
    std::sort(order.begin(), order.end(),
              [](const ProxyEntry& a, const ProxyEntry& b) { return a.ua_id < b.ua_id; });
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, horizon - 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        add(ga.groups[i < horizon ? i : pick(rng)], order[i]);
    }
    return ga;
}

bool is_partition(const GroupAssignment& ga, std::span<const std::size_t> members)
{
    std::multiset<std::size_t> seen;
    for (const auto& g : ga.groups) {
        seen.insert(g.members.begin(), g.members.end());
    }
    const std::multiset<std::size_t> expected(members.begin(), members.end());
    return seen == expected && std::set<std::size_t>(seen.begin(), seen.end()).size() == seen.size();
}

} // namespace dualband
