#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dualband {

/// Transmit power needed on one RB to carry `rate` bit/s: noise * (2^(rate/bw) - 1).
double power_from_rate(double noise, double rate, double rb_bandwidth);

/// Shannon rate of one RB: bw * log2(1 + power / noise).
double rate_from_power(double noise, double power, double rb_bandwidth);

/// Minimum-power split of a bit demand over a set of RBs.
///
/// `rbs`, `power`, `rate` and `active` are parallel arrays over the candidate
/// RBs handed to the solver. Inactive RBs carry zero power and zero rate.
struct RbSetSolution {
    std::vector<std::size_t> rbs;
    std::vector<double> power;
    std::vector<double> rate;
    std::vector<bool> active;
    double water_level = 0.0;
    double total_power = 0.0;

    std::size_t active_count() const;
    /// Sum of rates (bit/s) over all candidate RBs.
    double total_rate() const;
};

/// Water-filling over `noises` (one entry per candidate RB, indices 0..n-1).
///
/// Active set: the k smallest noises, k the largest prefix whose water level
/// G = (prod N)^(1/k) * 2^(bits / (duration * bw * k)) stays above every
/// included noise. Each active RB gets power G - N_r. Ties N_r == G are
/// excluded. `bits == 0` returns an empty active set.
RbSetSolution min_power_waterfill(std::span<const double> noises, double bits, double duration,
                                  double rb_bandwidth);

/// Same as above restricted to `subset` of a full noise row; the solution's
/// `rbs` holds the row indices from `subset`.
RbSetSolution min_power_waterfill(std::span<const double> noise_row,
                                  std::span<const std::size_t> subset, double bits,
                                  double duration, double rb_bandwidth);

/// Total of the water-filling solution on an ascending `sorted_noises`
/// with precomputed base-2 logs. `exponent` is bits / (duration * bw).
/// Allocation-free hot path used by the local search.
double min_power_total_sorted(std::span<const double> sorted_noises,
                              std::span<const double> sorted_log2, double exponent);

/// Convenience: total minimum power for an unsorted noise list.
double min_power_total(std::span<const double> noises, double bits, double duration,
                       double rb_bandwidth);

} // namespace dualband
