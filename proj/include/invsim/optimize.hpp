#pragma once

#include "invsim/domain.hpp"
#include "invsim/montecarlo.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace invsim {

struct SearchPoint {
    Units r = 0;
    Units q = 0;

    auto operator<=>(const SearchPoint&) const = default;
};

struct SearchSpace {
    Units r_min = 0;
    Units r_max = 0;
    Units q_min = 0;
    Units q_max = 0;
    Units step = 10;  // grid search only

    bool contains(const SearchPoint& p) const {
        return p.r >= r_min && p.r <= r_max && p.q >= q_min && p.q <= q_max;
    }
};

void validate(const SearchSpace& space);

struct EvaluationRecord {
    SearchPoint point;
    ReplicationSummary summary;
};

enum class SearchMethod { grid, bayesian };

struct OptimizationResult {
    SearchPoint best_point;
    ReplicationSummary best_summary;
    std::vector<EvaluationRecord> history;
    SearchMethod method = SearchMethod::grid;
};

const char* method_name(SearchMethod m);

using Objective = std::function<ReplicationSummary(const SearchPoint&)>;

/// True when `a` beats `b`: higher mean profit, then smaller Q, then smaller r.
bool better(const EvaluationRecord& a, const EvaluationRecord& b);

/// Index of the best record in `history` under `better`.
std::size_t best_index(const std::vector<EvaluationRecord>& history);

/// Lattice r_min, r_min + step, ... <= r_max (likewise for Q), scanned in
/// full.
OptimizationResult grid_search(const SearchSpace& space, const Objective& objective);

struct BayesOptions {
    int budget = 40;
    int init_count = 10;
    std::uint64_t seed = 1;
    double xi = 0.01;                       // standardized units
    std::size_t max_candidates = 100'000;
};

/// Latin-hypercube start, then one GP-EI round per remaining evaluation. The
/// acquisition is maximized over the integer lattice (strided down to
/// `max_candidates`, then refined at unit step around the winner). The last
/// quarter of the rounds runs with xi = 0. Points are never evaluated twice.
OptimizationResult bayesian_optimize(const SearchSpace& space, const Objective& objective,
                                     const BayesOptions& options = {});

/// Observation noise for the surrogate: mean of (std_profit / sqrt(n))^2.
double replication_noise_variance(const std::vector<EvaluationRecord>& history);

}  // namespace invsim
