#include "dualband/report.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dualband {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& os, const SweepResult& result)
{
    os << "variable,value,algorithm,trials,failures,mean_muw_w,std_muw_w,mean_mmw_w,std_mmw_w,"
          "mean_total_w,std_total_w,stderr_total_w\n";
    for (const SweepPoint& p : result.points) {
        os << to_string(result.variable) << ',' << p.value << ',' << to_string(result.algorithm) << ','
           << p.trials.size() << ',' << p.failures << ',' << format_double(p.muw.mean) << ','
           << format_double(p.muw.stddev) << ',' << format_double(p.mmw.mean) << ','
           << format_double(p.mmw.stddev) << ',' << format_double(p.total.mean) << ','
           << format_double(p.total.stddev) << ',' << format_double(p.total.stderr_mean) << '\n';
    }
}

void write_trials_csv(std::ostream& os, const SweepResult& result)
{
    os << "variable,value,algorithm,trial,seed,status,muw_power_w,mmw_power_w,total_power_w,"
          "grouping_objective,escalations,transfers,error\n";
    for (const SweepPoint& p : result.points) {
        for (const TrialSummary& t : p.trials) {
            os << to_string(result.variable) << ',' << p.value << ',' << to_string(result.algorithm) << ','
               << t.trial << ',' << t.seed << ',' << (t.ok ? "ok" : "failed") << ',';
            if (t.ok) {
                os << format_double(t.muw_power) << ',' << format_double(t.mmw_power) << ','
                   << format_double(t.total_power()) << ',' << format_double(t.grouping_objective) << ','
                   << t.escalations << ',' << t.transfers << ',';
            } else {
                os << ",,,,,,";
            }
            std::string err = t.error;
            for (char& c : err) {
                if (c == ',' || c == '\n' || c == '"') c = ';';
            }
            os << err << '\n';
        }
    }
}

void write_allocation_csv(std::ostream& os, const TrialReport& report)
{
    os << "horizon,slot,band,rb,ua_id,power_w,rate_bps\n";
    for (const ClassOutcome& c : report.classes) {
        for (const SlotAllocation& s : c.slots) {
            const MuwAllocation& muw = s.muw;
            for (std::size_t k = 0; k < muw.ownership.num_rbs(); ++k) {
                const std::size_t owner = muw.ownership.rb_owner[k];
                if (owner == OwnershipMap::kUnowned) continue;
                const RbSetSolution& sol = muw.solutions[owner];
                for (std::size_t i = 0; i < sol.rbs.size(); ++i) {
                    if (sol.rbs[i] != k) continue;
                    os << s.horizon << ',' << s.slot << ",muw," << k << ',' << muw.uas[owner] << ','
                       << format_double(sol.power[i]) << ',' << format_double(sol.rate[i]) << '\n';
                }
            }
            for (std::size_t u = 0; u < s.mmw.selected.size(); ++u) {
                const RbSetSolution& sol = s.mmw.solutions[u];
                for (std::size_t i = 0; i < sol.rbs.size(); ++i) {
                    os << s.horizon << ',' << s.slot << ",mmw," << sol.rbs[i] << ',' << s.mmw.selected[u] << ','
                       << format_double(sol.power[i]) << ',' << format_double(sol.rate[i]) << '\n';
                }
            }
        }
    }
}

void write_noise_csv(std::ostream& os, const TrialReport& report)
{
    if (!report.channel) {
        throw std::invalid_argument("write_noise_csv: trial was run without keep_channel");
    }
    os << "ua,rb,slot,band,value\n";
    for (const EffectiveNoiseMap* map : {&report.channel->muw, &report.channel->mmw}) {
        for (std::size_t ua = 0; ua < map->num_uas(); ++ua) {
            for (std::size_t t = 0; t < map->num_slots(); ++t) {
                const auto row = map->row(ua, t);
                for (std::size_t k = 0; k < row.size(); ++k) {
                    os << ua << ',' << k << ',' << t << ',' << to_string(map->band()) << ','
                       << format_double(row[k]) << '\n';
                }
            }
        }
    }
}

void write_groups_csv(std::ostream& os, const TrialReport& report)
{
    os << "ua_id,horizon,group,proxy\n";
    for (const ClassOutcome& c : report.classes) {
        std::map<std::size_t, double> proxy;
        for (const ProxyEntry& e : c.grouping.proxies) proxy[e.ua_id] = e.proxy;
        std::map<std::size_t, std::size_t> group_of;
        for (std::size_t g = 0; g < c.grouping.groups.size(); ++g) {
            for (std::size_t id : c.grouping.groups[g].members) group_of[id] = g;
        }
        for (const auto& [id, g] : group_of) {
            os << id << ',' << c.grouping.horizon << ',' << g << ',' << format_double(proxy[id]) << '\n';
        }
    }
}

void write_descent_header(std::ostream& os)
{
    os << "horizon,slot,iteration,rb,donor,receiver,total_power_w\n";
}

void write_descent_row(std::ostream& os, std::size_t horizon, std::size_t slot, const DescentStep& step)
{
    os << horizon << ',' << slot << ',' << step.iteration << ',' << step.rb << ',';
    if (step.donor != OwnershipMap::kUnowned) os << step.donor;
    os << ',' << step.receiver << ',' << format_double(step.total_power) << '\n';
}

} // namespace dualband
