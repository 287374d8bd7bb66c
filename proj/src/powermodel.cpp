#include "dualband/powermodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dualband {

namespace {

struct PrefixLevel {
    std::size_t count = 0;
    double log2_level = 0.0;
};

// Largest prefix of the ascending noises that stays strictly below the water level.
template <typename Log2At>
PrefixLevel find_active_prefix(std::size_t n, double exponent, Log2At log2_at)
{
    PrefixLevel best;
    if (n == 0 || exponent <= 0.0) {
        return best;
    }
    double sum_log = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = log2_at(i);
        if (i > 0 && !(l < best.log2_level)) {
            break;
        }
        sum_log += l;
        best.count = i + 1;
        best.log2_level = (exponent + sum_log) / static_cast<double>(best.count);
    }
    return best;
}

double excess_power(double noise, double log2_noise, double log2_level)
{
    return noise * std::expm1(std::numbers::ln2 * (log2_level - log2_noise));
}

RbSetSolution solve(std::span<const double> noises, std::vector<std::size_t> rbs, double bits,
                    double duration, double rb_bandwidth)
{
    if (noises.empty()) {
        throw std::invalid_argument("min_power_waterfill: empty RB set");
    }
    if (!(bits >= 0.0) || !(duration > 0.0) || !(rb_bandwidth > 0.0)) {
        throw std::domain_error("min_power_waterfill: bits >= 0, duration > 0 and bandwidth > 0 required");
    }
    const std::size_t n = noises.size();
    for (double v : noises) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::domain_error("min_power_waterfill: noise must be positive and finite");
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return noises[a] < noises[b]; });

    std::vector<double> logs(n);
    for (std::size_t i = 0; i < n; ++i) {
        logs[i] = std::log2(noises[order[i]]);
    }

    const double exponent = bits / (duration * rb_bandwidth);
    const PrefixLevel prefix = find_active_prefix(n, exponent, [&](std::size_t i) { return logs[i]; });

    RbSetSolution out;
    out.rbs = std::move(rbs);
    out.power.assign(n, 0.0);
    out.rate.assign(n, 0.0);
    out.active.assign(n, false);
    if (prefix.count == 0) {
        return out;
    }

    out.water_level = std::exp2(prefix.log2_level);
    for (std::size_t i = 0; i < prefix.count; ++i) {
        const std::size_t r = order[i];
        out.active[r] = true;
        out.power[r] = excess_power(noises[r], logs[i], prefix.log2_level);
        out.rate[r] = rb_bandwidth * (prefix.log2_level - logs[i]);
        out.total_power += out.power[r];
    }
    return out;
}

} // namespace

double power_from_rate(double noise, double rate, double rb_bandwidth)
{
    if (rate < 0.0) {
        throw std::domain_error("power_from_rate: negative rate");
    }
    if (!(rb_bandwidth > 0.0) || !(noise > 0.0)) {
        throw std::domain_error("power_from_rate: noise and bandwidth must be positive");
    }
    return noise * std::expm1(std::numbers::ln2 * rate / rb_bandwidth);
}

double rate_from_power(double noise, double power, double rb_bandwidth)
{
    if (power < 0.0) {
        throw std::domain_error("rate_from_power: negative power");
    }
    if (!(rb_bandwidth > 0.0) || !(noise > 0.0)) {
        throw std::domain_error("rate_from_power: noise and bandwidth must be positive");
    }
    return rb_bandwidth * std::log1p(power / noise) / std::numbers::ln2;
}

std::size_t RbSetSolution::active_count() const
{
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

double RbSetSolution::total_rate() const
{
    return std::accumulate(rate.begin(), rate.end(), 0.0);
}

RbSetSolution min_power_waterfill(std::span<const double> noises, double bits, double duration,
                                  double rb_bandwidth)
{
    std::vector<std::size_t> rbs(noises.size());
    std::iota(rbs.begin(), rbs.end(), std::size_t{0});
    return solve(noises, std::move(rbs), bits, duration, rb_bandwidth);
}

RbSetSolution min_power_waterfill(std::span<const double> noise_row,
                                  std::span<const std::size_t> subset, double bits,
                                  double duration, double rb_bandwidth)
{
    std::vector<double> picked;
    picked.reserve(subset.size());
    for (std::size_t k : subset) {
        if (k >= noise_row.size()) {
            throw std::out_of_range("min_power_waterfill: RB index outside the noise row");
        }
        picked.push_back(noise_row[k]);
    }
    return solve(picked, std::vector<std::size_t>(subset.begin(), subset.end()), bits, duration,
                 rb_bandwidth);
}

double min_power_total_sorted(std::span<const double> sorted_noises,
                              std::span<const double> sorted_log2, double exponent)
{
    const PrefixLevel prefix = find_active_prefix(sorted_noises.size(), exponent,
                                                  [&](std::size_t i) { return sorted_log2[i]; });
    double total = 0.0;
    for (std::size_t i = 0; i < prefix.count; ++i) {
        total += excess_power(sorted_noises[i], sorted_log2[i], prefix.log2_level);
    }
    return total;
}

double min_power_total(std::span<const double> noises, double bits, double duration,
                       double rb_bandwidth)
{
    return min_power_waterfill(noises, bits, duration, rb_bandwidth).total_power;
}

} // namespace dualband
