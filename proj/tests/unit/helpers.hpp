#pragma once

#include "dualband/muw_alloc.hpp"
#include "dualband/scenario.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

// Log-uniform noise between 10^lo and 10^hi.
inline std::vector<double> log_uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> e(lo, hi);
    std::vector<double> out(n);
    for (double& v : out) v = std::pow(10.0, e(rng));
    return out;
}

// Random microwave instance with reference slot time and RB width.
inline dualband::MuwInstance random_instance(std::mt19937_64& rng, std::size_t uas, std::size_t rbs,
                                             double lo = -14.0, double hi = -11.0)
{
    dualband::MuwInstance inst;
    inst.num_uas = uas;
    inst.num_rbs = rbs;
    inst.noise = log_uniform(rng, uas * rbs, lo, hi);
    inst.demand.assign(uas, 10e3);
    std::uniform_real_distribution<double> d(5.0, 200.0);
    for (std::size_t i = 0; i < uas; ++i) inst.distance.push_back(d(rng));
    inst.slot_duration = 10e-3;
    inst.rb_bandwidth = 180e3;
    return inst;
}

inline bool rel_close(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace testutil
