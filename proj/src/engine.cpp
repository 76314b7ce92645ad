#include "invsim/engine.hpp"

#include "invsim/error.hpp"

#include <algorithm>
#include <string>

namespace invsim {

namespace {

struct OrderBook {
    std::vector<PendingOrder> open;

    Units on_order() const {
        Units q = 0;
        for (const auto& o : open) q += o.quantity;
        return q;
    }

    // Removes and returns the quantity due on `day`.
    Units take_due(int day) {
        Units q = 0;
        std::erase_if(open, [&](const PendingOrder& o) {
            if (o.arrival_day != day) return false;
            q += o.quantity;
            return true;
        });
        return q;
    }
};

// Quantity the policy orders at the end of `day`, or 0.
Units policy_order(const Policy& policy, const ReplenishmentParams& params, int day,
                   Units position, bool order_outstanding) {
    return std::visit(
        [&](const auto& p) -> Units {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PeriodicFixedQ>) {
                return day % p.review_period == 0 ? p.order_quantity : 0;
            } else if constexpr (std::is_same_v<T, PeriodicUpTo>) {
                if (day % p.review_period != 0) return 0;
                return periodic_order_quantity(params.order_up_to, position);
            } else {
                if (order_outstanding || position > p.reorder_point) return 0;
                if (!p.dynamic_quantity) return p.order_quantity;
                return std::max(p.order_quantity, p.reorder_point - position);
            }
        },
        policy);
}

// next_demand(day, order_placed_yesterday, yesterday_demand) -> Units
template <class NextDemand>
SimulationResult run(const ProductSpec& spec, const Policy& policy, int horizon,
                     const ReplenishmentParams& params, SimulateOptions options,
                     NextDemand&& next_demand) {
    validate(spec);
    validate(policy);
    if (horizon < 1) throw DataError("demand stream is empty");

    SimulationResult res;
    if (options.record_trace) res.trace.reserve(static_cast<std::size_t>(horizon));

    OrderBook book;
    Units on_hand = spec.starting_stock;
    Units inventory_days = 0;
    bool ordered_yesterday = false;
    Units yesterday_demand = 0;

    for (int day = 1; day <= horizon; ++day) {
        DayRecord rec;
        rec.day = day;

        if (const Units due = book.take_due(day); due > 0) {
            on_hand += due;
            res.total_arrived += due;
            rec.arrival = due;
        }

        rec.demand = next_demand(day, ordered_yesterday, yesterday_demand);
        if (rec.demand < 0) throw DataError("negative demand on day " + std::to_string(day));
        rec.sold = std::min(on_hand, rec.demand);
        rec.lost = rec.demand - rec.sold;
        on_hand -= rec.sold;

        const Units position = on_hand + book.on_order();
        const Units qty = policy_order(policy, params, day, position, !book.open.empty());
        if (qty > 0) {
            ++res.orders_placed;
            res.total_ordered += qty;
            rec.order_placed = qty;
            if (spec.lead_time == 0) {
                on_hand += qty;
                res.total_arrived += qty;
                rec.arrival = rec.arrival.value_or(0) + qty;
            } else {
                // Stays on order past the horizon: paid for, never delivered.
                book.open.push_back({day, day + spec.lead_time, qty});
            }
        }

        rec.end_inventory = on_hand;
        inventory_days += on_hand;
        res.total_demand += rec.demand;
        res.total_sold += rec.sold;
        res.total_lost += rec.lost;
        ordered_yesterday = qty > 0;
        yesterday_demand = rec.demand;
        if (options.record_trace) res.trace.push_back(rec);
    }

    res.final_inventory = on_hand;
    res.mean_end_inventory = static_cast<double>(inventory_days) / horizon;
    res.costs = CostBreakdown(spec.selling_price * static_cast<double>(res.total_sold),
                              daily_holding_cost_per_unit(spec) * static_cast<double>(inventory_days),
                              spec.ordering_cost * static_cast<double>(res.orders_placed),
                              spec.purchase_cost * static_cast<double>(res.total_ordered));
    return res;
}

}  // namespace

SimulationResult simulate_horizon(const ProductSpec& spec, const Policy& policy,
                                  std::span<const Units> demand, const ReplenishmentParams& params,
                                  SimulateOptions options) {
    return run(spec, policy, static_cast<int>(demand.size()), params, options,
               [&](int day, bool, Units) { return demand[static_cast<std::size_t>(day - 1)]; });
}

SimulationResult simulate_year(const ProductSpec& spec, const Policy& policy,
                               const DemandStream& demand, const ReplenishmentParams& params,
                               SimulateOptions options) {
    if (demand.days.size() != static_cast<std::size_t>(kDaysPerYear))
        throw DataError("demand stream must have 365 days, got " +
                        std::to_string(demand.days.size()));
    return simulate_horizon(spec, policy, demand.days, params, options);
}

SimulationResult simulate_year_conditional(const ProductSpec& spec, const Policy& policy,
                                           const DemandModel& model, std::uint64_t seed,
                                           const ReplenishmentParams& params,
                                           SimulateOptions options, int horizon) {
    validate(model);
    Rng rng(seed);
    return run(spec, policy, horizon, params, options,
               [&](int, bool ordered_yesterday, Units yesterday_demand) {
                   return sample_day_conditional(model, rng, ordered_yesterday, yesterday_demand);
               });
}

}  // namespace invsim
