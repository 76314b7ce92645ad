#pragma once

#include "invsim/demand.hpp"
#include "invsim/domain.hpp"
#include "invsim/engine.hpp"
#include "invsim/policy.hpp"

#include <cstdint>
#include <vector>

namespace invsim {

struct ReplicationPlan {
    std::int64_t n_replications = 1000;
    std::uint64_t base_seed = 42;
    // Replication i consumes the same demand stream for every policy.
    bool crn = true;
    // 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
};

struct ReplicationSummary {
    std::int64_t n = 0;
    double mean_profit = 0.0;
    double std_profit = 0.0;  // sample std, 0 when n == 1
    double mean_lost_fraction = 0.0;
    double mean_end_inventory = 0.0;
    double mean_orders = 0.0;
    std::vector<double> profits;

    double standard_error() const;
    bool operator==(const ReplicationSummary&) const = default;
};

struct PairedDifference {
    std::int64_t n = 0;
    double mean_difference = 0.0;
    double std_difference = 0.0;

    double standard_error() const;
};

/// splitmix64 finalizer; bijective mix of a 64-bit word.
std::uint64_t mix64(std::uint64_t x);

/// Seed of replication `index` under `base_seed`.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index);

/// Stable hash of a policy's parameters, used to decorrelate streams when
/// common random numbers are off.
std::uint64_t policy_fingerprint(const Policy& policy);

unsigned resolve_workers(unsigned requested);

/// Pre-generated demand streams for a CRN plan, reusable across policies.
class ScenarioSet {
public:
    ScenarioSet(const DemandModel& model, const ReplicationPlan& plan);

    const std::vector<DemandStream>& streams() const { return streams_; }
    std::size_t size() const { return streams_.size(); }

private:
    std::vector<DemandStream> streams_;
};

/// Summary over `plan.n_replications` simulated years. Replication i is
/// seeded with replication_seed(base, i) (mixed with the policy fingerprint
/// when crn is off); aggregation runs in index order, so the result does not
/// depend on the worker count.
ReplicationSummary evaluate_policy(const ProductSpec& spec, const Policy& policy,
                                   const DemandModel& model, const ReplenishmentParams& params,
                                   const ReplicationPlan& plan);

/// Same as evaluate_policy on pre-generated streams (random sampling only).
ReplicationSummary evaluate_policy(const ProductSpec& spec, const Policy& policy,
                                   const ScenarioSet& scenarios, const ReplenishmentParams& params,
                                   unsigned workers = 0);

/// Mean and std of per-replication profit(a) - profit(b) under shared streams.
PairedDifference compare_policies(const ProductSpec& spec, const Policy& a, const Policy& b,
                                  const DemandModel& model, const ReplenishmentParams& params,
                                  const ReplicationPlan& plan);

}  // namespace invsim
