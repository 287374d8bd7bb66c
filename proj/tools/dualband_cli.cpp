// Command-line driver: runs trials or sweeps and writes plot-ready CSV.

#include "dualband/errors.hpp"
#include "dualband/report.hpp"
#include "dualband/runner.hpp"
#include "dualband/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace dualband;

namespace {

std::ofstream open_csv(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.imbue(std::locale::classic());
    return os;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dual-band resource block and power allocation simulator"};

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::size_t trials = 1;
    std::string algorithm_name = "gb-eod";
    std::string sweep_name = "none";
    std::vector<std::size_t> values;
    std::string out_dir = ".";
    bool dump_noise = false;
    bool dump_groups = false;
    bool trace_descent = false;
    bool print_config = false;
    unsigned threads = 0;

    app.add_option("--config", config_path, "JSON scenario file (defaults apply to missing keys)")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Base seed; trial i uses seed + i (overrides rng_seed)");
    app.add_option("--trials", trials, "Trials per sweep value")->check(CLI::PositiveNumber);
    app.add_option("--algorithm", algorithm_name, "gb-eod, random-group+eod, round-robin or random");
    app.add_option("--sweep", sweep_name, "Variable to sweep: num_ues or mmw_quota")
        ->check(CLI::IsMember({"none", "num_ues", "mmw_quota"}));
    app.add_option("--values", values, "Comma-separated sweep values")->delimiter(',');
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--dump-noise", dump_noise, "Write noise.csv for the last trial");
    app.add_flag("--dump-groups", dump_groups, "Write groups.csv for the last trial");
    app.add_flag("--trace-descent", trace_descent, "Write descent.csv for the last trial");
    app.add_flag("--print-config", print_config, "Print the effective configuration as JSON and exit");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");

    CLI11_PARSE(app, argc, argv);

    try {
        ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
        if (seed) cfg.rng_seed = *seed;
        validate(cfg);
        if (print_config) {
            std::cout << to_json(cfg) << '\n';
            return 0;
        }

        const Algorithm algorithm = parse_algorithm(algorithm_name);
        const SweepVariable variable = parse_sweep_variable(sweep_name);
        if (variable == SweepVariable::None) {
            if (!values.empty()) throw std::invalid_argument("--values needs --sweep");
            values = {0};
        } else if (values.empty()) {
            throw std::invalid_argument("--sweep needs --values");
        }

        const fs::path out(out_dir);
        fs::create_directories(out);

        const SweepResult result = sweep(cfg, variable, values, trials, algorithm, threads);
        {
            auto os = open_csv(out / "results.csv");
            write_results_csv(os, result);
        }
        {
            auto os = open_csv(out / "trials.csv");
            write_trials_csv(os, result);
        }

        std::size_t failures = 0;
        for (const SweepPoint& p : result.points) failures += p.failures;

        // The last trial of the last point is rerun with its channel kept.
        const ScenarioConfig last_cfg = apply_sweep_value(cfg, variable, values.back());
        const std::uint64_t last_seed = trial_seed(cfg.rng_seed, trials - 1);
        std::optional<std::ofstream> descent;
        TrialOptions options;
        options.keep_channel = true;
        if (trace_descent) {
            descent = open_csv(out / "descent.csv");
            write_descent_header(*descent);
            options.trace = [&](std::size_t h, std::size_t t, const DescentStep& s) {
                write_descent_row(*descent, h, t, s);
            };
        }
        auto alloc = open_csv(out / "allocation.csv");
        try {
            const TrialReport last = run_trial(last_cfg, last_seed, algorithm, options);
            write_allocation_csv(alloc, last);
            if (dump_noise) {
                auto os = open_csv(out / "noise.csv");
                write_noise_csv(os, last);
            }
            if (dump_groups) {
                auto os = open_csv(out / "groups.csv");
                write_groups_csv(os, last);
            }
        } catch (const std::exception& e) {
            alloc << "horizon,slot,band,rb,ua_id,power_w,rate_bps\n";
            std::cerr << "last trial failed: " << e.what() << '\n';
        }

        const std::size_t total = trials * values.size();
        if (failures > 0) {
            std::cerr << failures << " of " << total << " trials failed; see trials.csv\n";
        }
        return failures == total ? 2 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
