// invsim: command-line driver over the C library.
//
//   invsim estimate HISTORY.csv [--out FILE]
//   invsim simulate|optimize|surface|diagnose|fixture --config FILE [options]
//
// The summary JSON goes to --out (default stdout); CSV artifacts go to
// --out-dir when given. Exit codes: 0 success, 1 usage error, 2 data error.

#include "invsim/invsim.h"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int exit_code(invsim_status s) {
    switch (s) {
    case INVSIM_OK: return 0;
    case INVSIM_USAGE_ERROR: return kExitUsage;
    default: return kExitData;
    }
}

struct ReportDeleter {
    void operator()(invsim_report* r) const { invsim_report_free(r); }
};
struct ExperimentDeleter {
    void operator()(invsim_experiment* e) const { invsim_experiment_free(e); }
};
using ReportPtr = std::unique_ptr<invsim_report, ReportDeleter>;
using ExperimentPtr = std::unique_ptr<invsim_experiment, ExperimentDeleter>;

bool write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    return true;
}

// Writes the JSON and artifacts of a report. Returns the process exit code.
int emit(const invsim_report* rep, const std::string& out_file, const std::string& out_dir) {
    const std::string json = invsim_report_json(rep);
    if (out_file.empty()) {
        std::cout << json << std::flush;
    } else if (!write_file(out_file, json)) {
        return kExitData;
    }
    const std::size_t n = invsim_report_artifact_count(rep);
    if (n == 0) return 0;
    if (out_dir.empty()) {
        std::cerr << "note: " << n << " CSV artifact(s) not written; pass --out-dir to keep them\n";
        return 0;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create '" << out_dir << "': " << ec.message() << '\n';
        return kExitData;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto path = std::filesystem::path(out_dir) / invsim_report_artifact_name(rep, i);
        if (!write_file(path, invsim_report_artifact_data(rep, i))) return kExitData;
    }
    return 0;
}

int fail(invsim_status s) {
    std::cerr << "error: " << invsim_last_error() << '\n';
    return exit_code(s);
}

// Options collected from the command line; unset ones are not forwarded so
// the library applies config values and defaults.
struct RunArgs {
    std::string config;
    std::string out_file;
    std::string out_dir;
    std::map<std::string, std::string> values;
};

void forward(CLI::App* sub, RunArgs& args, const std::string& name, const std::string& help) {
    sub->add_option_function<std::string>(
        "--" + name, [&args, name](const std::string& v) { args.values[name] = v; }, help);
}

void add_outputs(CLI::App* sub, RunArgs& args) {
    sub->add_option("--out", args.out_file, "Write the JSON summary here instead of stdout");
    sub->add_option("--out-dir", args.out_dir, "Directory for CSV artifacts");
}

void add_run_options(CLI::App* sub, RunArgs& args) {
    sub->add_option("--config", args.config, "Experiment configuration file")->required();
    add_outputs(sub, args);
    forward(sub, args, "seed", "Base seed (falls back to INVENTORY_SEED, then the config)");
    forward(sub, args, "replications", "Replications per evaluation");
    forward(sub, args, "workers", "Worker threads, or 'auto'");
    forward(sub, args, "product", "Only run this product id");
}

int run(const std::string& command, RunArgs& args) {
    if (!args.values.contains("seed")) {
        if (const char* env = std::getenv("INVENTORY_SEED"); env && *env)
            args.values["seed"] = env;
    }

    invsim_experiment* raw_exp = nullptr;
    if (const auto s = invsim_experiment_load(args.config.c_str(), &raw_exp); s != INVSIM_OK)
        return fail(s);
    const ExperimentPtr exp(raw_exp);

    std::vector<const char*> names;
    std::vector<const char*> values;
    for (const auto& [k, v] : args.values) {
        names.push_back(k.c_str());
        values.push_back(v.c_str());
    }

    const auto start = std::chrono::steady_clock::now();
    invsim_report* raw_rep = nullptr;
    const auto s = invsim_run(exp.get(), command.c_str(), names.data(), values.data(), names.size(),
                              &raw_rep);
    if (s != INVSIM_OK) return fail(s);
    const ReportPtr rep(raw_rep);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::string mode;
    if (const auto it = args.values.find("sampling"); it != args.values.end()) mode = " sampling=" + it->second;
    std::fprintf(stderr, "%s:%s wall_time=%.3fs\n", command.c_str(), mode.c_str(), elapsed.count());
    return emit(rep.get(), args.out_file, args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo inventory policy simulation and optimization"};
    app.set_version_flag("--version", std::string(invsim_version()));
    app.require_subcommand(1);

    std::string history;
    RunArgs est_args;
    auto* estimate = app.add_subcommand("estimate", "Demand statistics from a history CSV");
    estimate->add_option("history", history, "Demand history CSV (day,<id1>,<id2>,...)")->required();
    add_outputs(estimate, est_args);

    RunArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Evaluate a policy for every product");
    add_run_options(simulate, sim_args);
    forward(simulate, sim_args, "policy", "periodic | upto | continuous (default continuous)");
    forward(simulate, sim_args, "sampling", "random | conditional (default random)");
    forward(simulate, sim_args, "trace", "1 to write a daily trace of the first replication");

    RunArgs opt_args;
    auto* optimize = app.add_subcommand("optimize", "Search (r, Q) for a continuous-review policy");
    add_run_options(optimize, opt_args);
    forward(optimize, opt_args, "method", "grid | bayes (default grid)");
    forward(optimize, opt_args, "objective", "simulation | quadratic (default simulation)");
    forward(optimize, opt_args, "bounds", "rmin:rmax,qmin:qmax");
    forward(optimize, opt_args, "step", "Lattice step (default 10)");
    forward(optimize, opt_args, "budget", "Bayesian evaluation budget (default 40)");
    forward(optimize, opt_args, "init", "Bayesian initial design size (default 10)");
    forward(optimize, opt_args, "xi", "Expected-improvement exploration margin (default 0.01)");
    forward(optimize, opt_args, "sampling", "random | conditional (default random)");

    RunArgs surf_args;
    auto* surface = app.add_subcommand("surface", "Profit over a full (r, Q) lattice");
    add_run_options(surface, surf_args);
    forward(surface, surf_args, "bounds", "rmin:rmax,qmin:qmax");
    forward(surface, surf_args, "step", "Lattice step (default 10)");
    forward(surface, surf_args, "sampling", "random | conditional (default random)");

    RunArgs diag_args;
    auto* diagnose = app.add_subcommand("diagnose", "Convergence series for the replication profits");
    add_run_options(diagnose, diag_args);
    forward(diagnose, diag_args, "policy", "periodic | upto | continuous (default continuous)");
    forward(diagnose, diag_args, "sampling", "random | conditional (default random)");

    RunArgs fix_args;
    auto* fixture = app.add_subcommand("fixture", "Synthetic demand history matching the configured stats");
    fixture->add_option("--config", fix_args.config, "Experiment configuration file")->required();
    add_outputs(fixture, fix_args);
    forward(fixture, fix_args, "seed", "Base seed (falls back to INVENTORY_SEED, then the config)");
    forward(fixture, fix_args, "days", "History length (default 365)");
    forward(fixture, fix_args, "product", "Only this product id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (estimate->parsed()) {
        invsim_report* raw = nullptr;
        if (const auto s = invsim_estimate(history.c_str(), &raw); s != INVSIM_OK) return fail(s);
        const ReportPtr rep(raw);
        return emit(rep.get(), est_args.out_file, est_args.out_dir);
    }
    if (simulate->parsed()) return run("simulate", sim_args);
    if (optimize->parsed()) return run("optimize", opt_args);
    if (surface->parsed()) return run("surface", surf_args);
    if (diagnose->parsed()) return run("diagnose", diag_args);
    return run("fixture", fix_args);
}
