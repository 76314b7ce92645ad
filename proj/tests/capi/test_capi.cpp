// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invsim/invsim.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

const char* kConfig = R"(seed = 5
replications = 30
[product A]
purchase_cost = 7
selling_price = 8.60
ordering_cost = 1200
size = 0.05
lead_time = 6
starting_stock = 22500
mean_daily = 648.55
std_daily = 26.45
demand_probability = 1.0
)";

invsim_product trace_product() {
    invsim_product p{};
    p.purchase_cost = 4;
    p.selling_price = 10;
    p.ordering_cost = 50;
    p.holding_rate = 1.0;
    p.size = 9.125;
    p.lead_time = 2;
    p.starting_stock = 10;
    return p;
}

}  // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::string(invsim_version()) == "1.0.0");
    invsim_experiment* exp = nullptr;
    CHECK(invsim_experiment_parse("bogus = 1\n", nullptr, &exp) == INVSIM_DATA_ERROR);
    CHECK(exp == nullptr);
    CHECK(std::string(invsim_last_error()) == "config:1: unknown global key 'bogus'");
    CHECK(invsim_experiment_parse(nullptr, nullptr, &exp) == INVSIM_USAGE_ERROR);
    CHECK(invsim_experiment_load("/nonexistent/x.ini", &exp) == INVSIM_DATA_ERROR);
    CHECK(invsim_estimate("/nonexistent/x.csv", nullptr) == INVSIM_USAGE_ERROR);
}

TEST_CASE("experiment handles and commands") {
    invsim_experiment* exp = nullptr;
    REQUIRE(invsim_experiment_parse(kConfig, nullptr, &exp) == INVSIM_OK);
    CHECK(invsim_experiment_product_count(exp) == 1);
    CHECK(std::string(invsim_experiment_product_id(exp, 0)) == "A");
    CHECK(invsim_experiment_product_id(exp, 1) == nullptr);

    const char* names[] = {"policy", "trace"};
    const char* values[] = {"periodic", "1"};
    invsim_report* rep = nullptr;
    REQUIRE(invsim_run(exp, "simulate", names, values, 2, &rep) == INVSIM_OK);
    CHECK(std::string(invsim_report_json(rep)).find("\"total_mean_profit\"") != std::string::npos);
    REQUIRE(invsim_report_artifact_count(rep) == 1);
    CHECK(std::string(invsim_report_artifact_name(rep, 0)) == "trace_A.csv");
    CHECK(std::strncmp(invsim_report_artifact_data(rep, 0), "day,demand", 10) == 0);
    CHECK(invsim_report_artifact_name(rep, 1) == nullptr);

    invsim_report* again = nullptr;
    REQUIRE(invsim_run(exp, "simulate", names, values, 2, &again) == INVSIM_OK);
    CHECK(std::string(invsim_report_json(rep)) == invsim_report_json(again));
    invsim_report_free(again);
    invsim_report_free(rep);

    const char* bad_names[] = {"policy"};
    const char* bad_values[] = {"sometimes"};
    rep = nullptr;
    CHECK(invsim_run(exp, "simulate", bad_names, bad_values, 1, &rep) == INVSIM_USAGE_ERROR);
    CHECK(rep == nullptr);
    CHECK(std::string(invsim_last_error()).find("unknown policy") != std::string::npos);
    CHECK(invsim_run(exp, "teleport", nullptr, nullptr, 0, &rep) == INVSIM_USAGE_ERROR);

    const char* dup_names[] = {"seed", "seed"};
    const char* dup_values[] = {"1", "2"};
    CHECK(invsim_run(exp, "simulate", dup_names, dup_values, 2, &rep) == INVSIM_USAGE_ERROR);

    const char* diag_names[] = {"replications"};
    const char* diag_values[] = {"50"};
    CHECK(invsim_run(exp, "diagnose", diag_names, diag_values, 1, &rep) == INVSIM_DATA_ERROR);

    invsim_experiment_free(exp);
    invsim_experiment_free(nullptr);
    invsim_report_free(nullptr);
}

TEST_CASE("five-day trace through the C interface") {
    const invsim_product product = trace_product();
    invsim_policy policy{};
    policy.kind = INVSIM_CONTINUOUS_FIXED_Q;
    policy.reorder_point = 3;
    policy.order_quantity = 10;
    const int64_t demand[] = {4, 4, 4, 0, 0};
    invsim_day trace[5];
    invsim_costs costs{};
    REQUIRE(invsim_simulate_days(&product, &policy, demand, 5, trace, &costs) == INVSIM_OK);
    const int64_t sold[] = {4, 4, 2, 0, 0};
    const int64_t inv[] = {6, 2, 0, 10, 10};
    for (int i = 0; i < 5; ++i) {
        CHECK(trace[i].day == i + 1);
        CHECK(trace[i].sold == sold[i]);
        CHECK(trace[i].end_inventory == inv[i]);
    }
    CHECK(trace[1].order_placed == 10);
    CHECK(trace[0].order_placed == -1);
    CHECK(trace[3].arrival == 10);
    CHECK(costs.profit == doctest::Approx(7.2));
    CHECK(costs.holding == doctest::Approx(2.8));

    CHECK(invsim_simulate_days(&product, &policy, demand, 5, nullptr, &costs) == INVSIM_OK);
    CHECK(costs.profit == doctest::Approx(7.2));

    invsim_policy bad = policy;
    bad.kind = static_cast<invsim_policy_kind>(9);
    CHECK(invsim_simulate_days(&product, &bad, demand, 5, nullptr, &costs) == INVSIM_USAGE_ERROR);
    CHECK(invsim_simulate_days(&product, &policy, demand, 0, nullptr, &costs) == INVSIM_DATA_ERROR);
    invsim_product broken = product;
    broken.selling_price = -1;
    CHECK(invsim_simulate_days(&broken, &policy, demand, 5, nullptr, &costs) == INVSIM_DATA_ERROR);
}

TEST_CASE("statistics helpers") {
    const int64_t h[] = {0, 10, 20, 0};
    double p = 0, m = 0, s = 0;
    REQUIRE(invsim_estimate_stats(h, 4, &p, &m, &s) == INVSIM_OK);
    CHECK(p == 0.5);
    CHECK(m == 15.0);
    CHECK(s == doctest::Approx(std::sqrt(50.0)));
    CHECK(invsim_estimate_stats(h, 0, &p, &m, &s) == INVSIM_DATA_ERROR);
    CHECK(std::string(invsim_last_error()) == "no observations");

    double e = 0, sd = 0;
    REQUIRE(invsim_lead_time_demand(1.0, 648.55, 26.45, 6, &e, &sd) == INVSIM_OK);
    CHECK(e == doctest::Approx(3891.3));
    CHECK(sd == doctest::Approx(64.79).epsilon(1e-3));
    CHECK(invsim_lead_time_demand(1.5, 1, 1, 6, &e, &sd) == INVSIM_DATA_ERROR);
}
