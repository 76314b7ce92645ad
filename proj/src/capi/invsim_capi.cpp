#include "invsim/invsim.h"

#include "invsim/commands.hpp"
#include "invsim/engine.hpp"
#include "invsim/error.hpp"

#include <exception>
#include <new>
#include <sstream>
#include <string>

struct invsim_experiment {
    invsim::Experiment exp;
};

struct invsim_report {
    invsim::Report rep;
};

namespace {

thread_local std::string g_last_error;

// Runs `fn`, mapping exceptions to status codes and recording the message.
template <class Fn>
invsim_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return INVSIM_OK;
    } catch (const invsim::UsageError& e) {
        g_last_error = e.what();
        return INVSIM_USAGE_ERROR;
    } catch (const invsim::DataError& e) {
        g_last_error = e.what();
        return INVSIM_DATA_ERROR;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return INVSIM_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return INVSIM_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return INVSIM_INTERNAL_ERROR;
    }
}

void require(const void* ptr, const char* name) {
    if (ptr == nullptr) throw invsim::UsageError(std::string(name) + " must not be null");
}

invsim::ProductSpec to_spec(const invsim_product& p) {
    invsim::ProductSpec s;
    s.id = "product";
    s.purchase_cost = p.purchase_cost;
    s.selling_price = p.selling_price;
    s.ordering_cost = p.ordering_cost;
    s.holding_rate = p.holding_rate;
    s.size = p.size;
    s.lead_time = p.lead_time;
    s.starting_stock = p.starting_stock;
    return s;
}

invsim::Policy to_policy(const invsim_policy& p) {
    switch (p.kind) {
    case INVSIM_PERIODIC_FIXED_Q:
        return invsim::PeriodicFixedQ{p.review_period, p.order_quantity};
    case INVSIM_PERIODIC_UP_TO:
        return invsim::PeriodicUpTo{p.review_period, p.safety_factor};
    case INVSIM_CONTINUOUS_FIXED_Q:
        return invsim::ContinuousFixedQ{p.reorder_point, p.order_quantity, p.dynamic_quantity != 0};
    }
    throw invsim::UsageError("unknown policy kind");
}

}  // namespace

extern "C" {

const char* invsim_version(void) { return "1.0.0"; }

const char* invsim_last_error(void) { return g_last_error.c_str(); }

invsim_status invsim_experiment_load(const char* config_path, invsim_experiment** out) {
    return guarded([&] {
        require(config_path, "config_path");
        require(out, "out");
        *out = nullptr;
        auto exp = invsim::resolve(invsim::load_config(config_path));
        *out = new invsim_experiment{std::move(exp)};
    });
}

invsim_status invsim_experiment_parse(const char* config_text, const char* base_dir,
                                      invsim_experiment** out) {
    return guarded([&] {
        require(config_text, "config_text");
        require(out, "out");
        *out = nullptr;
        std::istringstream in(config_text);
        auto cfg = invsim::parse_config(in, base_dir ? base_dir : "", "config");
        *out = new invsim_experiment{invsim::resolve(std::move(cfg))};
    });
}

void invsim_experiment_free(invsim_experiment* exp) { delete exp; }

size_t invsim_experiment_product_count(const invsim_experiment* exp) {
    return exp ? exp->exp.products.size() : 0;
}

const char* invsim_experiment_product_id(const invsim_experiment* exp, size_t index) {
    if (!exp || index >= exp->exp.products.size()) return nullptr;
    return exp->exp.products[index].config.spec.id.c_str();
}

invsim_status invsim_run(const invsim_experiment* exp, const char* command,
                         const char* const* names, const char* const* values, size_t count,
                         invsim_report** out) {
    return guarded([&] {
        require(exp, "experiment");
        require(command, "command");
        require(out, "out");
        *out = nullptr;
        if (count > 0) {
            require(names, "names");
            require(values, "values");
        }
        invsim::Options opts;
        for (size_t i = 0; i < count; ++i) {
            require(names[i], "option name");
            require(values[i], "option value");
            if (!opts.emplace(names[i], values[i]).second)
                throw invsim::UsageError(std::string("option '") + names[i] + "' given twice");
        }
        *out = new invsim_report{invsim::run_command(exp->exp, command, opts)};
    });
}

invsim_status invsim_estimate(const char* history_path, invsim_report** out) {
    return guarded([&] {
        require(history_path, "history_path");
        require(out, "out");
        *out = nullptr;
        *out = new invsim_report{invsim::cmd_estimate(history_path)};
    });
}

const char* invsim_report_json(const invsim_report* rep) {
    return rep ? rep->rep.json.c_str() : nullptr;
}

size_t invsim_report_artifact_count(const invsim_report* rep) {
    return rep ? rep->rep.artifacts.size() : 0;
}

const char* invsim_report_artifact_name(const invsim_report* rep, size_t index) {
    if (!rep || index >= rep->rep.artifacts.size()) return nullptr;
    return rep->rep.artifacts[index].name.c_str();
}

const char* invsim_report_artifact_data(const invsim_report* rep, size_t index) {
    if (!rep || index >= rep->rep.artifacts.size()) return nullptr;
    return rep->rep.artifacts[index].content.c_str();
}

void invsim_report_free(invsim_report* rep) { delete rep; }

invsim_status invsim_simulate_days(const invsim_product* product, const invsim_policy* policy,
                                   const int64_t* demand, size_t days, invsim_day* trace,
                                   invsim_costs* costs) {
    return guarded([&] {
        require(product, "product");
        require(policy, "policy");
        require(costs, "costs");
        if (days == 0) throw invsim::DataError("demand stream is empty");
        require(demand, "demand");

        invsim::ReplenishmentParams params;
        params.order_up_to = policy->order_up_to;
        params.safety_factor = policy->safety_factor;
        params.reorder_point = policy->reorder_point;

        const auto res = invsim::simulate_horizon(
            to_spec(*product), to_policy(*policy), std::span<const int64_t>(demand, days), params,
            invsim::SimulateOptions{trace != nullptr});

        costs->revenue = res.costs.revenue();
        costs->holding = res.costs.holding_cost();
        costs->ordering = res.costs.ordering_cost();
        costs->purchase = res.costs.purchase_cost();
        costs->profit = res.costs.profit();
        if (trace) {
            for (size_t i = 0; i < days; ++i) {
                const auto& d = res.trace[i];
                trace[i] = invsim_day{d.day,
                                      d.demand,
                                      d.sold,
                                      d.lost,
                                      d.end_inventory,
                                      d.order_placed.value_or(-1),
                                      d.arrival.value_or(-1)};
            }
        }
    });
}

invsim_status invsim_estimate_stats(const int64_t* demand, size_t days, double* demand_probability,
                                    double* mean_daily, double* std_daily) {
    return guarded([&] {
        require(demand_probability, "demand_probability");
        require(mean_daily, "mean_daily");
        require(std_daily, "std_daily");
        if (days > 0) require(demand, "demand");
        const auto s = invsim::estimate_stats(std::span<const int64_t>(demand, days));
        *demand_probability = s.demand_probability;
        *mean_daily = s.mean_daily;
        *std_daily = s.std_daily;
    });
}

invsim_status invsim_lead_time_demand(double demand_probability, double mean_daily,
                                      double std_daily, int lead_time, double* expected,
                                      double* std_dev) {
    return guarded([&] {
        require(expected, "expected");
        require(std_dev, "std_dev");
        const invsim::DemandStats stats{mean_daily, std_daily, demand_probability, 0};
        invsim::validate(stats);
        if (lead_time < 0) throw invsim::DataError("lead_time must be >= 0");
        const auto ltd = invsim::lead_time_demand(stats, lead_time);
        *expected = ltd.expected;
        *std_dev = ltd.std;
    });
}

}  // extern "C"
