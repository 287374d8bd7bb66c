#pragma once

#include "dualband/muw_alloc.hpp"
#include "dualband/runner.hpp"

#include <ostream>
#include <string>

namespace dualband {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v);

/// variable,value,algorithm,trials,failures,mean/std per band,stderr of the total.
void write_results_csv(std::ostream& os, const SweepResult& result);

/// One row per trial and sweep value.
void write_trials_csv(std::ostream& os, const SweepResult& result);

/// Per-RB ownership, power and rate for every slot of one trial.
void write_allocation_csv(std::ostream& os, const TrialReport& report);

/// ua,rb,slot,band,value. Requires a report produced with keep_channel.
void write_noise_csv(std::ostream& os, const TrialReport& report);

/// ua_id,horizon,group,proxy.
void write_groups_csv(std::ostream& os, const TrialReport& report);

void write_descent_header(std::ostream& os);
void write_descent_row(std::ostream& os, std::size_t horizon, std::size_t slot, const DescentStep& step);

} // namespace dualband
