#pragma once

#include "dualband/runner.hpp"

#include <string>
#include <vector>

namespace dualband::oracle {

struct Violation {
    std::string constraint; ///< "1a" .. "1h", or "totals", "time"
    std::size_t horizon = 0;
    std::size_t slot = 0;
    std::string detail;
};

struct AuditOptions {
    double demand_rel_tol = 1e-9;
    double power_rel_tol = 1e-9;
};

/// Re-checks a finished trial from its raw per-RB powers and the kept noise
/// maps. Rates are recomputed here, not taken from the solver.
/// Requires a report run with keep_channel.
std::vector<Violation> audit_trial(const TrialReport& report, const ScenarioConfig& cfg,
                                   const AuditOptions& options = {});

} // namespace dualband::oracle
