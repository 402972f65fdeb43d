// Command line front end. Talks to the simulator exclusively through the C
// API so that it doubles as a smoke test for the shared library.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "prilsim.h"

namespace {

[[noreturn]] void die(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    std::exit(1);
}

void check(prilsim_status status, const std::string& what) {
    if (status != PRILSIM_OK) die(what + ": " + prilsim_last_error());
}

// Two-call buffer protocol: query the length, then fetch.
template <typename Fn>
std::string fetch_string(Fn&& fn, const std::string& what) {
    size_t len = 0;
    check(fn(nullptr, &len), what);
    std::string out(len, '\0');
    check(fn(out.data(), &(len = out.size() + 1)), what);
    out.resize(len);
    return out;
}

std::string config_get(const prilsim_config* cfg, const std::string& key) {
    return fetch_string(
        [&](char* buf, size_t* len) { return prilsim_config_get(cfg, key.c_str(), buf, len); },
        "config get " + key);
}

struct ConfigDeleter {
    void operator()(prilsim_config* p) const { prilsim_config_destroy(p); }
};
struct ResultDeleter {
    void operator()(prilsim_result* p) const { prilsim_result_destroy(p); }
};
using ConfigPtr = std::unique_ptr<prilsim_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<prilsim_result, ResultDeleter>;

ConfigPtr make_config() {
    prilsim_config* raw = nullptr;
    check(prilsim_config_create(&raw), "config create");
    return ConfigPtr(raw);
}

ConfigPtr clone_config(const prilsim_config* cfg) {
    prilsim_config* raw = nullptr;
    check(prilsim_config_clone(cfg, &raw), "config clone");
    return ConfigPtr(raw);
}

ResultPtr run_config(const prilsim_config* cfg) {
    prilsim_result* raw = nullptr;
    check(prilsim_run(cfg, &raw), "run");
    return ResultPtr(raw);
}

// Keys accepted both in config files and as --key flags.
const std::vector<std::string>& flag_keys() {
    static const std::vector<std::string> keys = {
        "strategy",    "seed",      "eps_f",       "eps_a",    "cca_detection", "n_tries",
        "t_app",       "phase",     "t_slot",      "n_slot",   "slot_offset",   "capacity",
        "n_ch",        "duration",  "e_tx_attempt", "e_rx_exchange", "e_idle",  "e_cca",
        "e_ack_wait",
    };
    return keys;
}

struct CommonConfigArgs {
    std::string config_file;
    std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* app, CommonConfigArgs& args) {
    app->add_option("--config", args.config_file, "key = value configuration file");
    for (const auto& key : flag_keys()) {
        std::string flag = "--" + key;
        for (auto& ch : flag)
            if (ch == '_') ch = '-';
        app->add_option_function<std::string>(
            flag, [&args, key](const std::string& v) { args.overrides[key] = v; },
            "override configuration key " + key);
    }
}

ConfigPtr build_config(const CommonConfigArgs& args) {
    ConfigPtr cfg = make_config();
    if (const char* env_seed = std::getenv("PRILSIM_SEED")) {
        check(prilsim_config_set(cfg.get(), "seed", env_seed), "PRILSIM_SEED");
    }
    if (!args.config_file.empty()) {
        check(prilsim_config_load_file(cfg.get(), args.config_file.c_str()),
              "load " + args.config_file);
    }
    for (const auto& [key, value] : args.overrides) {
        check(prilsim_config_set(cfg.get(), key.c_str(), value.c_str()), "set " + key);
    }
    return cfg;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) die("cannot open output file '" + path + "'");
    return file;
}

int cmd_run(const CommonConfigArgs& args, const std::string& output) {
    ConfigPtr cfg = build_config(args);
    ResultPtr result = run_config(cfg.get());

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << fetch_string(prilsim_csv_header, "csv header") << "\n";
    out << fetch_string(
               [&](char* buf, size_t* len) {
                   return prilsim_result_csv_row(result.get(), buf, len);
               },
               "csv row")
        << "\n";
    std::cerr << fetch_string(
        [&](char* buf, size_t* len) { return prilsim_result_summary(result.get(), buf, len); },
        "summary");
    return 0;
}

int cmd_sweep(const CommonConfigArgs& args, const std::string& axis,
              const std::vector<double>& values, const std::vector<std::string>& strategies,
              const std::vector<std::uint64_t>& seeds, int jobs, const std::string& output) {
    if (values.empty()) die("--values must list at least one grid value");
    if (strategies.empty()) die("--strategies must list at least one strategy");
    if (seeds.empty()) die("--seeds must list at least one seed");
    if (jobs < 1) die("--jobs must be >= 1");

    ConfigPtr base = build_config(args);

    // The joint axis moves eps_a proportionally to eps_f, keeping the ratio
    // of the base configuration.
    double eps_ratio = 0.0;
    if (axis == "joint") {
        const double base_f = std::stod(config_get(base.get(), "eps_f"));
        const double base_a = std::stod(config_get(base.get(), "eps_a"));
        if (base_f <= 0.0) die("joint sweep requires a positive base eps_f");
        eps_ratio = base_a / base_f;
    }

    std::string axis_key;
    if (axis == "eps_f" || axis == "eps_a" || axis == "n_tries" || axis == "t_app") {
        axis_key = axis;
    } else if (axis != "joint") {
        die("unknown sweep axis '" + axis + "' (eps_f, eps_a, joint, n_tries, t_app)");
    }

    struct Point {
        ConfigPtr cfg;
        double axis_value;
    };
    std::vector<Point> points;
    for (double value : values) {
        for (const auto& strategy : strategies) {
            for (std::uint64_t seed : seeds) {
                ConfigPtr cfg = clone_config(base.get());
                std::ostringstream num;
                num.precision(17);
                num << value;
                if (axis == "joint") {
                    check(prilsim_config_set(cfg.get(), "eps_f", num.str().c_str()),
                          "set eps_f");
                    std::ostringstream anum;
                    anum.precision(17);
                    anum << value * eps_ratio;
                    check(prilsim_config_set(cfg.get(), "eps_a", anum.str().c_str()),
                          "set eps_a");
                } else if (axis_key == "n_tries") {
                    check(prilsim_config_set(cfg.get(), "n_tries",
                                             std::to_string(static_cast<int>(value)).c_str()),
                          "set n_tries");
                } else {
                    check(prilsim_config_set(cfg.get(), axis_key.c_str(), num.str().c_str()),
                          "set " + axis_key);
                }
                check(prilsim_config_set(cfg.get(), "strategy", strategy.c_str()),
                      "set strategy");
                check(prilsim_config_set(cfg.get(), "seed", std::to_string(seed).c_str()),
                      "set seed");
                points.push_back(Point{std::move(cfg), value});
            }
        }
    }

    // Parallel execution with output buffered per point so that row order is
    // independent of thread scheduling.
    std::vector<std::string> rows(points.size());
    std::mutex next_mutex;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next == points.size()) return;
                i = next++;
            }
            ResultPtr result = run_config(points[i].cfg.get());
            std::ostringstream axis_cell;
            axis_cell.precision(17);
            axis_cell << points[i].axis_value;
            rows[i] = axis_cell.str() + "," +
                      fetch_string(
                          [&](char* buf, size_t* len) {
                              return prilsim_result_csv_row(result.get(), buf, len);
                          },
                          "csv row");
        }
    };
    const int n_threads = std::min<int>(jobs, static_cast<int>(points.size()));
    std::vector<std::thread> threads;
    for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << "grid_" << axis << "," << fetch_string(prilsim_csv_header, "csv header") << "\n";
    for (const auto& row : rows) out << row << "\n";
    return 0;
}

int cmd_estimate(double eps_f, int n_tries, int iterations, const std::string& ping_log,
                 std::optional<std::uint64_t> n_dup, std::optional<std::uint64_t> n_ping) {
    std::uint64_t dup = 0;
    std::uint64_t ping = 0;
    if (!ping_log.empty()) {
        check(prilsim_parse_ping_log(ping_log.c_str(), &dup, &ping), "parse " + ping_log);
    } else if (n_dup && n_ping) {
        dup = *n_dup;
        ping = *n_ping;
    } else {
        die("provide either --ping-log or both --n-dup and --n-ping");
    }
    std::cout << fetch_string(
        [&](char* buf, size_t* len) {
            return prilsim_estimate_report(eps_f, dup, ping, n_tries, iterations, buf, len);
        },
        "estimate");
    return 0;
}

int cmd_oracle(const std::string& strategy, double eps_f, double eps_a, int n_tries,
               int horizon, std::uint64_t trials, std::uint64_t seed) {
    int pass = 0;
    size_t len = 0;
    check(prilsim_oracle_check(strategy.c_str(), eps_f, eps_a, n_tries, horizon, trials, seed,
                               &pass, nullptr, &len),
          "oracle");
    std::string report(len, '\0');
    len = report.size() + 1;
    check(prilsim_oracle_check(strategy.c_str(), eps_f, eps_a, n_tries, horizon, trials, seed,
                               &pass, report.data(), &len),
          "oracle");
    report.resize(len);
    std::cout << report;
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-hop TSCH link simulator with receiver sleep strategies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(prilsim_version()));

    CommonConfigArgs run_args;
    std::string run_output;
    CLI::App* run = app.add_subcommand("run", "simulate one configuration, emit a CSV row");
    add_config_options(run, run_args);
    run->add_option("--output,-o", run_output, "CSV output path (default stdout)");

    CommonConfigArgs sweep_args;
    std::string sweep_axis = "eps_f";
    std::vector<double> sweep_values;
    std::vector<std::string> sweep_strategies;
    std::vector<std::uint64_t> sweep_seeds;
    int sweep_jobs = 1;
    std::string sweep_output;
    CLI::App* sweep = app.add_subcommand("sweep", "grid of runs over one parameter axis");
    add_config_options(sweep, sweep_args);
    sweep->add_option("--axis", sweep_axis, "eps_f, eps_a, joint, n_tries or t_app");
    sweep->add_option("--values", sweep_values, "grid values")->delimiter(',')->required();
    sweep->add_option("--strategies", sweep_strategies, "strategies to compare")
        ->delimiter(',')
        ->required();
    sweep->add_option("--seeds", sweep_seeds, "seeds per grid point")
        ->delimiter(',')
        ->required();
    sweep->add_option("--jobs,-j", sweep_jobs, "worker threads");
    sweep->add_option("--output,-o", sweep_output, "CSV output path (default stdout)");

    double est_eps_f = 0.126;
    int est_n_tries = 16;
    int est_iterations = 10;
    std::string est_ping_log;
    std::optional<std::uint64_t> est_n_dup;
    std::optional<std::uint64_t> est_n_ping;
    CLI::App* estimate =
        app.add_subcommand("estimate", "ACK loss probability from ping duplicate statistics");
    estimate->add_option("--eps-f", est_eps_f, "frame loss probability");
    estimate->add_option("--n-tries", est_n_tries, "attempt limit");
    estimate->add_option("--iterations", est_iterations, "fixed-point iterations");
    estimate->add_option("--ping-log", est_ping_log, "ping output to parse");
    estimate->add_option_function<std::uint64_t>(
        "--n-dup", [&](std::uint64_t v) { est_n_dup = v; }, "duplicate reply count");
    estimate->add_option_function<std::uint64_t>(
        "--n-ping", [&](std::uint64_t v) { est_n_ping = v; }, "echo request count");

    std::string orc_strategy = "closed";
    double orc_eps_f = 0.126;
    double orc_eps_a = 0.080;
    int orc_n_tries = 2;
    int orc_horizon = 4;
    std::uint64_t orc_trials = 100000;
    std::uint64_t orc_seed = 1;
    CLI::App* oracle =
        app.add_subcommand("oracle", "check the engine against exhaustive enumeration");
    oracle->add_option("--strategy", orc_strategy, "strategy under test");
    oracle->add_option("--eps-f", orc_eps_f, "frame loss probability");
    oracle->add_option("--eps-a", orc_eps_a, "ACK loss probability");
    oracle->add_option("--n-tries", orc_n_tries, "attempt limit (<= 4)");
    oracle->add_option("--horizon", orc_horizon, "occurrences to enumerate (<= 8)");
    oracle->add_option("--trials", orc_trials, "Monte Carlo trials");
    oracle->add_option("--seed", orc_seed, "base seed");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_args, run_output);
    if (sweep->parsed())
        return cmd_sweep(sweep_args, sweep_axis, sweep_values, sweep_strategies, sweep_seeds,
                         sweep_jobs, sweep_output);
    if (estimate->parsed())
        return cmd_estimate(est_eps_f, est_n_tries, est_iterations, est_ping_log, est_n_dup,
                            est_n_ping);
    if (oracle->parsed())
        return cmd_oracle(orc_strategy, orc_eps_f, orc_eps_a, orc_n_tries, orc_horizon,
                          orc_trials, orc_seed);
    return 1;
}
