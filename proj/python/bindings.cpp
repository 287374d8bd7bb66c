#include "dualband/channel.hpp"
#include "dualband/errors.hpp"
#include "dualband/grouping.hpp"
#include "dualband/powermodel.hpp"
#include "dualband/report.hpp"
#include "dualband/runner.hpp"
#include "dualband/scenario.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace dualband;

namespace {

py::dict moments_dict(const Moments& m)
{
    return py::dict("mean"_a = m.mean, "std"_a = m.stddev, "stderr"_a = m.stderr_mean);
}

} // namespace

PYBIND11_MODULE(_dualband, m)
{
    m.doc() = "Joint mmW / microwave RB and power allocation";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("num_ues", &ScenarioConfig::num_ues)
        .def_readwrite("uas_per_ue", &ScenarioConfig::uas_per_ue)
        .def_readwrite("bits_required", &ScenarioConfig::bits_required)
        .def_readwrite("cell_radius_m", &ScenarioConfig::cell_radius_m)
        .def_readwrite("min_distance_m", &ScenarioConfig::min_distance_m)
        .def_readwrite("slot_duration", &ScenarioConfig::slot_duration)
        .def_readwrite("mmw_tx_time", &ScenarioConfig::mmw_tx_time)
        .def_readwrite("mmw_quota", &ScenarioConfig::mmw_quota)
        .def_readwrite("step", &ScenarioConfig::step)
        .def_readwrite("eta", &ScenarioConfig::eta)
        .def_readwrite("gamma", &ScenarioConfig::gamma)
        .def_readwrite("qos_horizons", &ScenarioConfig::qos_horizons)
        .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
        .def_property(
            "mmw_time_mode", [](const ScenarioConfig& c) { return std::string(to_string(c.mmw_time_mode)); },
            [](ScenarioConfig& c, const std::string& v) {
                if (v == "fixed") c.mmw_time_mode = MmwTimeMode::Fixed;
                else if (v == "shared") c.mmw_time_mode = MmwTimeMode::Shared;
                else throw ConfigError("mmw_time_mode", "expected fixed or shared");
            })
        .def("validate", [](const ScenarioConfig& c) { validate(c); })
        .def("to_json", [](const ScenarioConfig& c) { return to_json(c); });

    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, "text"_a,
          "ScenarioConfig from a flat JSON object; missing keys keep their defaults.");

    m.def(
        "min_power_waterfill",
        [](const std::vector<double>& noises, double bits, double duration, double rb_bandwidth) {
            const RbSetSolution s = min_power_waterfill(noises, bits, duration, rb_bandwidth);
            return py::dict("total_power"_a = s.total_power, "water_level"_a = s.water_level, "power"_a = s.power,
                            "rate"_a = s.rate, "active"_a = s.active);
        },
        "noises"_a, "bits"_a, "duration"_a, "rb_bandwidth"_a);

    m.def(
        "path_loss_db",
        [](double alpha_db, double beta, double distance_m, double shadow_db) {
            return path_loss_db(PathLossParams{alpha_db, beta, 0.0}, distance_m, shadow_db);
        },
        "alpha_db"_a, "beta"_a, "distance_m"_a, "shadow_db"_a = 0.0);

    m.def(
        "proxy_power",
        [](double distance_m, const ScenarioConfig& cfg) {
            UserApp ua;
            ua.distance_m = distance_m;
            ua.demand_bits = cfg.bits_required;
            return proxy_power(ua, cfg);
        },
        "distance_m"_a, "cfg"_a = ScenarioConfig{});

    m.def(
        "group_users",
        [](const std::vector<std::pair<std::size_t, double>>& proxies, std::size_t horizon, double eta,
           double gamma) {
            std::vector<ProxyEntry> entries;
            for (const auto& [id, p] : proxies) entries.push_back({id, p});
            std::sort(entries.begin(), entries.end(), [](const ProxyEntry& a, const ProxyEntry& b) {
                return a.proxy != b.proxy ? a.proxy > b.proxy : a.ua_id < b.ua_id;
            });
            const GroupAssignment ga = group_users(entries, horizon, eta, gamma);
            std::vector<std::vector<std::size_t>> out;
            for (const auto& g : ga.groups) out.push_back(g.members);
            return py::make_tuple(out, grouping_objective(ga));
        },
        "proxies"_a, "horizon"_a, "eta"_a = 1.0, "gamma"_a = 1.0,
        "Groups of ua ids and their objective for (ua_id, proxy) pairs.");

    m.def(
        "run_trial",
        [](const ScenarioConfig& cfg, std::uint64_t seed, const std::string& algorithm) {
            TrialReport r;
            {
                py::gil_scoped_release release;
                r = run_trial(cfg, seed, parse_algorithm(algorithm));
            }
            return py::dict("seed"_a = r.seed, "muw_power"_a = r.muw_power, "mmw_power"_a = r.mmw_power,
                            "total_power"_a = r.total_power(), "grouping_objective"_a = r.grouping_objective,
                            "escalations"_a = r.escalations, "transfers"_a = r.transfers);
        },
        "cfg"_a, "seed"_a, "algorithm"_a = "gb-eod");

    m.def(
        "sweep",
        [](const ScenarioConfig& cfg, const std::string& variable, const std::vector<std::size_t>& values,
           std::size_t trials, const std::string& algorithm, unsigned threads) {
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = sweep(cfg, parse_sweep_variable(variable), values, trials, parse_algorithm(algorithm), threads);
            }
            py::list rows;
            for (const auto& p : res.points) {
                rows.append(py::dict("value"_a = p.value, "failures"_a = p.failures, "muw"_a = moments_dict(p.muw),
                                     "mmw"_a = moments_dict(p.mmw), "total"_a = moments_dict(p.total)));
            }
            return rows;
        },
        "cfg"_a, "variable"_a, "values"_a, "trials"_a, "algorithm"_a = "gb-eod", "threads"_a = 0u);

    m.def(
        "sweep_csv",
        [](const ScenarioConfig& cfg, const std::string& variable, const std::vector<std::size_t>& values,
           std::size_t trials, const std::string& algorithm, unsigned threads) {
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = sweep(cfg, parse_sweep_variable(variable), values, trials, parse_algorithm(algorithm), threads);
            }
            std::ostringstream results, per_trial;
            write_results_csv(results, res);
            write_trials_csv(per_trial, res);
            return py::make_tuple(results.str(), per_trial.str());
        },
        "cfg"_a, "variable"_a, "values"_a, "trials"_a, "algorithm"_a = "gb-eod", "threads"_a = 0u,
        "(results.csv, trials.csv) text of a sweep.");
}
