#include "invsim/error.hpp"
#include "invsim/montecarlo.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace invsim;

namespace {

ProductSpec pr2_spec() {
    ProductSpec s;
    s.id = "Pr2";
    s.purchase_cost = 7;
    s.selling_price = 8.60;
    s.ordering_cost = 1200;
    s.holding_rate = 0.2;
    s.size = 0.05;
    s.lead_time = 6;
    s.starting_stock = 22500;
    return s;
}

const DemandModel kPr2Model{DemandStats{648.55, 26.45, 1.0, 365}, GatedLognormal{}, false};

ReplenishmentParams pr2_params() { return replenishment_params(kPr2Model.stats, 1.645, 6, 52); }

ReplicationPlan plan(std::int64_t n, unsigned workers = 1) {
    ReplicationPlan p;
    p.n_replications = n;
    p.base_seed = 42;
    p.workers = workers;
    return p;
}

}  // namespace

TEST_CASE("seed derivation") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(replication_seed(42, i));
    CHECK(seen.size() == 10000);
    CHECK(replication_seed(42, 3) == replication_seed(42, 3));
    CHECK(replication_seed(42, 3) != replication_seed(43, 3));
    CHECK(policy_fingerprint(ContinuousFixedQ{10, 20}) != policy_fingerprint(ContinuousFixedQ{20, 10}));
    CHECK(policy_fingerprint(PeriodicFixedQ{10, 20}) != policy_fingerprint(ContinuousFixedQ{10, 20}));
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("single replication equals one simulated year") {
    const Policy pol = ContinuousFixedQ{3998, 33730};
    const auto s = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(1));
    const auto year = simulate_year(pr2_spec(), pol, generate_stream(kPr2Model, replication_seed(42, 0)),
                                    pr2_params(), SimulateOptions{false});
    CHECK(s.n == 1);
    CHECK(s.mean_profit == year.costs.profit());
    CHECK(s.std_profit == 0.0);
    CHECK(s.mean_lost_fraction == year.lost_fraction());
    CHECK(s.mean_end_inventory == year.mean_end_inventory);
}

TEST_CASE("summary statistics match an independent recomputation") {
    const Policy pol = PeriodicFixedQ{52, 33730};
    const auto s = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(200));
    REQUIRE(s.profits.size() == 200);
    double sum = 0;
    for (std::size_t i = 0; i < s.profits.size(); ++i) {
        const auto year = simulate_year(pr2_spec(), pol, generate_stream(kPr2Model, replication_seed(42, i)),
                                        pr2_params(), SimulateOptions{false});
        CHECK(s.profits[i] == year.costs.profit());
        sum += year.costs.profit();
    }
    const double mean = sum / 200;
    double ss = 0;
    for (double p : s.profits) ss += (p - mean) * (p - mean);
    CHECK(s.mean_profit == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.std_profit == doctest::Approx(std::sqrt(ss / 199)).epsilon(1e-10));
    CHECK(s.standard_error() == doctest::Approx(s.std_profit / std::sqrt(200.0)));
}

TEST_CASE("worker count does not change results") {
    const Policy pol = ContinuousFixedQ{3998, 33730};
    const auto one = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(300, 1));
    const auto eight = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(300, 8));
    const auto again = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(300, 3));
    CHECK(one == eight);
    CHECK(one == again);

    const ScenarioSet scenarios(kPr2Model, plan(300));
    CHECK(evaluate_policy(pr2_spec(), pol, scenarios, pr2_params(), 1) == one);
    CHECK(evaluate_policy(pr2_spec(), pol, scenarios, pr2_params(), 5) == one);
}

TEST_CASE("without common random numbers each policy gets its own streams") {
    auto p = plan(50);
    p.crn = false;
    const Policy a = ContinuousFixedQ{3998, 33730};
    const auto with = evaluate_policy(pr2_spec(), a, kPr2Model, pr2_params(), plan(50));
    const auto without = evaluate_policy(pr2_spec(), a, kPr2Model, pr2_params(), p);
    CHECK(with.profits != without.profits);
    CHECK(evaluate_policy(pr2_spec(), a, kPr2Model, pr2_params(), p) == without);
}

TEST_CASE("Pr2 at a large reorder point is finite with small relative error") {
    const auto s = evaluate_policy(pr2_spec(), ContinuousFixedQ{33940, 33730}, kPr2Model, pr2_params(),
                                   plan(1000, 0));
    CHECK(std::isfinite(s.mean_profit));
    CHECK(s.standard_error() < 0.05 * std::abs(s.mean_profit));
}

TEST_CASE("standard error halves when replications quadruple") {
    const Policy pol = PeriodicFixedQ{52, 33730};
    const auto n = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(500, 0));
    const auto n4 = evaluate_policy(pr2_spec(), pol, kPr2Model, pr2_params(), plan(2000, 0));
    CHECK(n4.standard_error() == doctest::Approx(n.standard_error() / 2).epsilon(0.25));
}

TEST_CASE("no lost sales when stock never runs out") {
    ProductSpec s = pr2_spec();
    s.starting_stock = 1'000'000;
    const auto sum = evaluate_policy(s, ContinuousFixedQ{0, 10}, kPr2Model, pr2_params(), plan(50));
    CHECK(sum.mean_lost_fraction == 0.0);
}

TEST_CASE("paired comparison") {
    const Policy a = ContinuousFixedQ{3998, 33730};
    const auto same = compare_policies(pr2_spec(), a, a, kPr2Model, pr2_params(), plan(100));
    CHECK(same.mean_difference == 0.0);
    CHECK(same.std_difference == 0.0);

    auto no_crn = plan(10);
    no_crn.crn = false;
    CHECK_THROWS_AS(compare_policies(pr2_spec(), a, a, kPr2Model, pr2_params(), no_crn), UsageError);

    // Paired variance under CRN against the variance of two independent runs.
    const Policy b = PeriodicFixedQ{52, 33730};
    const auto paired = compare_policies(pr2_spec(), a, b, kPr2Model, pr2_params(), plan(1000, 0));
    auto indep = plan(1000, 0);
    indep.crn = false;
    const auto sa = evaluate_policy(pr2_spec(), a, kPr2Model, pr2_params(), indep);
    const auto sb = evaluate_policy(pr2_spec(), b, kPr2Model, pr2_params(), indep);
    const double unpaired_var = sa.std_profit * sa.std_profit + sb.std_profit * sb.std_profit;
    CHECK(paired.std_difference * paired.std_difference <= unpaired_var);
    CHECK(paired.mean_difference > 0);
}

TEST_CASE("conditional sampling path") {
    DemandModel cond = kPr2Model;
    cond.conditional = true;
    const Policy pol = PeriodicFixedQ{52, 33730};
    const auto s = evaluate_policy(pr2_spec(), pol, cond, pr2_params(), plan(20));
    const auto year = simulate_year_conditional(pr2_spec(), pol, cond, replication_seed(42, 0),
                                                pr2_params(), SimulateOptions{false});
    CHECK(s.profits.front() == year.costs.profit());
    CHECK(evaluate_policy(pr2_spec(), pol, cond, pr2_params(), plan(20, 4)) == s);
}

TEST_CASE("invalid plans") {
    CHECK_THROWS_AS(evaluate_policy(pr2_spec(), ContinuousFixedQ{1, 1}, kPr2Model, pr2_params(), plan(0)),
                    DataError);
}
