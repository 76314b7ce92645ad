#pragma once

#include "invsim/domain.hpp"

namespace invsim {

inline constexpr double kDefaultSafetyFactor = 1.645;

struct LeadTimeDemand {
    double expected = 0.0;
    double std = 0.0;
};

struct ReplenishmentParams {
    double safety_stock = 0.0;
    double order_up_to = 0.0;
    Units reorder_point = 0;
    double safety_factor = kDefaultSafetyFactor;
};

// Demand over `lead_time` days of gated demand. The per-day variance is the
// compound form p*sigma^2 + p*(1-p)*mu^2, which reduces to sigma^2 when p = 1.
LeadTimeDemand lead_time_demand(const DemandStats& stats, int lead_time);

double safety_stock(double z, const DemandStats& stats, int lead_time);

// Expected review-period demand plus safety stock.
double order_up_to(int review_period, const DemandStats& stats, double z, int lead_time);

// max(0, ceil(oup) - current_inventory)
Units periodic_order_quantity(double oup, Units current_inventory);

// ceil(SS + E[D_LT])
Units reorder_point(const DemandStats& stats, double z, int lead_time);

// Bundles the quantities above for the engine. `review_period` only affects
// order_up_to.
ReplenishmentParams replenishment_params(const DemandStats& stats, double z, int lead_time,
                                         int review_period = 1);

}  // namespace invsim
