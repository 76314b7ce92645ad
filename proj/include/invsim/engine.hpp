#pragma once

#include "invsim/demand.hpp"
#include "invsim/domain.hpp"
#include "invsim/policy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace invsim {

struct PendingOrder {
    int placed_day = 0;
    int arrival_day = 0;
    Units quantity = 0;
};

struct DayRecord {
    int day = 0;
    Units demand = 0;
    Units sold = 0;
    Units lost = 0;
    Units end_inventory = 0;
    std::optional<Units> order_placed;
    std::optional<Units> arrival;

    bool operator==(const DayRecord&) const = default;
};

struct SimulationResult {
    std::vector<DayRecord> trace;  // empty when tracing is off
    CostBreakdown costs;
    std::int64_t orders_placed = 0;
    Units total_demand = 0;
    Units total_sold = 0;
    Units total_lost = 0;
    Units total_ordered = 0;
    Units total_arrived = 0;
    Units final_inventory = 0;
    double mean_end_inventory = 0.0;

    double lost_fraction() const {
        return total_demand > 0 ? static_cast<double>(total_lost) / total_demand : 0.0;
    }

    bool operator==(const SimulationResult&) const = default;
};

struct SimulateOptions {
    bool record_trace = true;
};

/// Simulates one day per demand entry. Each day: credit arrivals due today,
/// sell min(on-hand, demand) and lose the rest, then run the policy check on
/// inventory position (on-hand + on-order). Orders due after the last day
/// are paid for but never arrive. With zero lead time an order is credited
/// the day it is placed.
SimulationResult simulate_horizon(const ProductSpec& spec, const Policy& policy,
                                  std::span<const Units> demand, const ReplenishmentParams& params,
                                  SimulateOptions options = {});

/// simulate_horizon restricted to a 365-day stream.
SimulationResult simulate_year(const ProductSpec& spec, const Policy& policy,
                               const DemandStream& demand, const ReplenishmentParams& params,
                               SimulateOptions options = {});

/// Same loop with demand drawn on the fly from `model` seeded by `seed`: the
/// day after an order is placed repeats the demand observed on the trigger
/// day, every other day is sampled as in generate_stream.
SimulationResult simulate_year_conditional(const ProductSpec& spec, const Policy& policy,
                                           const DemandModel& model, std::uint64_t seed,
                                           const ReplenishmentParams& params,
                                           SimulateOptions options = {},
                                           int horizon = kDaysPerYear);

}  // namespace invsim
