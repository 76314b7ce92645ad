#include "invsim/policy.hpp"

#include "invsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace invsim {

namespace {

// Guards ceil() against representation noise such as 3998.0000000000005.
Units ceil_units(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-9 * std::max(1.0, std::abs(x))) return static_cast<Units>(r);
    return static_cast<Units>(std::ceil(x));
}

}  // namespace

LeadTimeDemand lead_time_demand(const DemandStats& stats, int lead_time) {
    if (lead_time < 0) throw DataError("lead_time must be >= 0");
    const double p = stats.demand_probability;
    const double mu = stats.mean_daily;
    const double sigma = stats.std_daily;
    const double daily_var = p * sigma * sigma + p * (1.0 - p) * mu * mu;
    return {lead_time * p * mu, std::sqrt(lead_time * daily_var)};
}

double safety_stock(double z, const DemandStats& stats, int lead_time) {
    if (z < 0) throw DataError("safety factor must be >= 0");
    return z * lead_time_demand(stats, lead_time).std;
}

double order_up_to(int review_period, const DemandStats& stats, double z, int lead_time) {
    if (review_period < 1) throw DataError("review_period must be >= 1");
    return review_period * stats.demand_probability * stats.mean_daily +
           safety_stock(z, stats, lead_time);
}

Units periodic_order_quantity(double oup, Units current_inventory) {
    return std::max<Units>(0, ceil_units(oup) - current_inventory);
}

Units reorder_point(const DemandStats& stats, double z, int lead_time) {
    return ceil_units(safety_stock(z, stats, lead_time) + lead_time_demand(stats, lead_time).expected);
}

ReplenishmentParams replenishment_params(const DemandStats& stats, double z, int lead_time,
                                         int review_period) {
    ReplenishmentParams params;
    params.safety_factor = z;
    params.safety_stock = safety_stock(z, stats, lead_time);
    params.order_up_to = order_up_to(review_period, stats, z, lead_time);
    params.reorder_point = reorder_point(stats, z, lead_time);
    return params;
}

}  // namespace invsim
