#include "invsim/montecarlo.hpp"

#include "invsim/error.hpp"

#include <cmath>
#include <thread>

namespace invsim {

namespace {

struct Outcome {
    double profit = 0.0;
    double lost_fraction = 0.0;
    double mean_end_inventory = 0.0;
    double orders = 0.0;
};

Outcome outcome_of(const SimulationResult& r) {
    return {r.costs.profit(), r.lost_fraction(), r.mean_end_inventory,
            static_cast<double>(r.orders_placed)};
}

// Runs fn(i) for i in [0, n) over contiguous index blocks, one per worker.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    const std::size_t w = std::min<std::size_t>(resolve_workers(workers), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(w);
    {
        std::vector<std::jthread> pool;
        pool.reserve(w);
        for (std::size_t k = 0; k < w; ++k) {
            pool.emplace_back([&, k] {
                try {
                    for (std::size_t i = k * n / w; i < (k + 1) * n / w; ++i) fn(i);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ReplicationSummary summarize(const std::vector<Outcome>& outcomes) {
    ReplicationSummary s;
    s.n = static_cast<std::int64_t>(outcomes.size());
    const double n = static_cast<double>(s.n);
    s.profits.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        s.profits.push_back(o.profit);
        s.mean_profit += o.profit;
        s.mean_lost_fraction += o.lost_fraction;
        s.mean_end_inventory += o.mean_end_inventory;
        s.mean_orders += o.orders;
    }
    s.mean_profit /= n;
    s.mean_lost_fraction /= n;
    s.mean_end_inventory /= n;
    s.mean_orders /= n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double p : s.profits) ss += (p - s.mean_profit) * (p - s.mean_profit);
        s.std_profit = std::sqrt(ss / (n - 1));
    }
    return s;
}

void check_plan(const ReplicationPlan& plan) {
    if (plan.n_replications < 1) throw DataError("n_replications must be >= 1");
}

std::uint64_t stream_seed(const ReplicationPlan& plan, const Policy& policy, std::size_t i) {
    const std::uint64_t base =
        plan.crn ? plan.base_seed : mix64(plan.base_seed ^ policy_fingerprint(policy));
    return replication_seed(base, i);
}

}  // namespace

double ReplicationSummary::standard_error() const {
    return n > 0 ? std_profit / std::sqrt(static_cast<double>(n)) : 0.0;
}

double PairedDifference::standard_error() const {
    return n > 0 ? std_difference / std::sqrt(static_cast<double>(n)) : 0.0;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(mix64(base_seed) ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

std::uint64_t policy_fingerprint(const Policy& policy) {
    std::uint64_t h = mix64(policy.index() + 1);
    auto fold = [&h](std::uint64_t v) { h = mix64(h ^ v); };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PeriodicFixedQ>) {
                fold(static_cast<std::uint64_t>(p.review_period));
                fold(static_cast<std::uint64_t>(p.order_quantity));
            } else if constexpr (std::is_same_v<T, PeriodicUpTo>) {
                fold(static_cast<std::uint64_t>(p.review_period));
                fold(static_cast<std::uint64_t>(std::llround(p.safety_factor * 1e6)));
            } else {
                fold(static_cast<std::uint64_t>(p.reorder_point));
                fold(static_cast<std::uint64_t>(p.order_quantity));
                fold(p.dynamic_quantity ? 1 : 0);
            }
        },
        policy);
    return h;
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

ScenarioSet::ScenarioSet(const DemandModel& model, const ReplicationPlan& plan) {
    check_plan(plan);
    validate(model);
    streams_.resize(static_cast<std::size_t>(plan.n_replications));
    parallel_for(streams_.size(), plan.workers, [&](std::size_t i) {
        streams_[i] = generate_stream(model, replication_seed(plan.base_seed, i));
    });
}

ReplicationSummary evaluate_policy(const ProductSpec& spec, const Policy& policy,
                                   const DemandModel& model, const ReplenishmentParams& params,
                                   const ReplicationPlan& plan) {
    check_plan(plan);
    validate(model);
    validate(spec);
    validate(policy);
    std::vector<Outcome> outcomes(static_cast<std::size_t>(plan.n_replications));
    const SimulateOptions quiet{.record_trace = false};
    parallel_for(outcomes.size(), plan.workers, [&](std::size_t i) {
        const std::uint64_t seed = stream_seed(plan, policy, i);
        if (model.conditional) {
            outcomes[i] = outcome_of(simulate_year_conditional(spec, policy, model, seed, params, quiet));
        } else {
            outcomes[i] = outcome_of(simulate_year(spec, policy, generate_stream(model, seed), params, quiet));
        }
    });
    return summarize(outcomes);
}

ReplicationSummary evaluate_policy(const ProductSpec& spec, const Policy& policy,
                                   const ScenarioSet& scenarios, const ReplenishmentParams& params,
                                   unsigned workers) {
    if (scenarios.size() == 0) throw DataError("n_replications must be >= 1");
    validate(spec);
    validate(policy);
    std::vector<Outcome> outcomes(scenarios.size());
    parallel_for(outcomes.size(), workers, [&](std::size_t i) {
        outcomes[i] = outcome_of(
            simulate_year(spec, policy, scenarios.streams()[i], params, {.record_trace = false}));
    });
    return summarize(outcomes);
}

PairedDifference compare_policies(const ProductSpec& spec, const Policy& a, const Policy& b,
                                  const DemandModel& model, const ReplenishmentParams& params,
                                  const ReplicationPlan& plan) {
    if (!plan.crn) throw UsageError("paired comparison requires common random numbers");
    const auto sa = evaluate_policy(spec, a, model, params, plan);
    const auto sb = evaluate_policy(spec, b, model, params, plan);

    PairedDifference d;
    d.n = sa.n;
    const double n = static_cast<double>(d.n);
    for (std::size_t i = 0; i < sa.profits.size(); ++i)
        d.mean_difference += sa.profits[i] - sb.profits[i];
    d.mean_difference /= n;
    if (d.n > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < sa.profits.size(); ++i) {
            const double e = sa.profits[i] - sb.profits[i] - d.mean_difference;
            ss += e * e;
        }
        d.std_difference = std::sqrt(ss / (n - 1));
    }
    return d;
}

}  // namespace invsim
