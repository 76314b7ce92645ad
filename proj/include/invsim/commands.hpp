#pragma once

#include "invsim/config.hpp"
#include "invsim/montecarlo.hpp"
#include "invsim/optimize.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace invsim {

/// A named output file (CSV series, traces, histories).
struct Artifact {
    std::string name;
    std::string content;
};

/// Result of one command: a JSON document plus zero or more files. Neither
/// part carries timestamps, so equal inputs give byte-identical reports.
struct Report {
    std::string json;
    std::vector<Artifact> artifacts;
};

using Options = std::map<std::string, std::string>;

/// Per-product stats table for a history CSV.
Report cmd_estimate(const std::filesystem::path& history_csv);

/// Options: policy (periodic|upto|continuous), sampling (random|conditional),
/// seed, replications, workers, product, trace (0|1).
Report cmd_simulate(const Experiment& exp, const Options& opts);

/// Options: method (grid|bayes), objective (simulation|quadratic), bounds
/// "rmin:rmax,qmin:qmax", step, budget, init, xi, seed, replications,
/// workers, product, sampling.
Report cmd_optimize(const Experiment& exp, const Options& opts);

/// Options: bounds, step, seed, replications, workers, product.
Report cmd_surface(const Experiment& exp, const Options& opts);

/// Options: policy, sampling, seed, replications (>= 100), workers, product.
Report cmd_diagnose(const Experiment& exp, const Options& opts);

/// Synthetic history matching each product's explicit stats. Options: days,
/// seed, product.
Report cmd_fixture(const Experiment& exp, const Options& opts);

/// Dispatches by command name; throws UsageError for unknown commands.
Report run_command(const Experiment& exp, const std::string& command, const Options& opts);

/// The policy a product runs under `name` with its configured parameters and
/// documented defaults, along with the replenishment quantities it needs.
struct PolicySetup {
    Policy policy;
    ReplenishmentParams params;
};
PolicySetup policy_for(const ResolvedProduct& product, const std::string& name);

/// Default (r, Q) search box: r in [0.5 ROP, 2 ROP], Q in
/// [0.25 D/12, 2 D/12] with D the expected annual demand.
SearchSpace default_bounds(const ResolvedProduct& product, Units step = 10);

}  // namespace invsim
