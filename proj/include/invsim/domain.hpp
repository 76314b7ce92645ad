#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace invsim {

/// Whole units of stock or demand.
using Units = std::int64_t;
/// Euros, accumulated at full precision.
using Money = double;

inline constexpr int kDaysPerYear = 365;

/// Economic and physical parameters of one product.
struct ProductSpec {
    std::string id;
    Money purchase_cost = 0.0;   // per unit
    Money selling_price = 0.0;   // per unit
    Money ordering_cost = 0.0;   // per order
    double holding_rate = 0.20;  // fraction of unit cost per year
    double size = 1.0;           // volume factor per unit
    int lead_time = 0;           // days
    Units starting_stock = 0;
};

/// Throws DataError naming the first violated field.
void validate(const ProductSpec& spec);

/// Holding charge for one unit kept on hand for one day:
/// holding_rate * purchase_cost * size / 365.
Money daily_holding_cost_per_unit(const ProductSpec& spec);

/// Demand statistics estimated over days with nonzero demand; the Bernoulli
/// gate carries intermittency.
struct DemandStats {
    double mean_daily = 0.0;
    double std_daily = 0.0;
    double demand_probability = 0.0;
    std::int64_t n_observations = 0;

    /// Expected demand over a full year, 365 * p * mean.
    double expected_annual_demand() const {
        return kDaysPerYear * demand_probability * mean_daily;
    }
};

void validate(const DemandStats& stats);

// Replenishment rules.
struct PeriodicFixedQ {
    int review_period = 1;
    Units order_quantity = 0;
};

struct PeriodicUpTo {
    int review_period = 1;
    double safety_factor = 1.645;
};

struct ContinuousFixedQ {
    Units reorder_point = 0;
    Units order_quantity = 0;
    // Order max(order_quantity, reorder_point - position) instead of the
    // fixed quantity.
    bool dynamic_quantity = false;
};

using Policy = std::variant<PeriodicFixedQ, PeriodicUpTo, ContinuousFixedQ>;

void validate(const Policy& policy);
std::string policy_name(const Policy& policy);

/// Annual cost and profit breakdown. The profit field is derived, so the
/// accounting identity holds for every instance.
class CostBreakdown {
public:
    CostBreakdown() = default;
    CostBreakdown(Money revenue, Money holding_cost, Money ordering_cost, Money purchase_cost);

    Money revenue() const { return revenue_; }
    Money holding_cost() const { return holding_cost_; }
    Money ordering_cost() const { return ordering_cost_; }
    Money purchase_cost() const { return purchase_cost_; }
    Money total_cost() const { return holding_cost_ + ordering_cost_ + purchase_cost_; }
    Money profit() const { return profit_; }

    bool operator==(const CostBreakdown&) const = default;

private:
    Money revenue_ = 0.0;
    Money holding_cost_ = 0.0;
    Money ordering_cost_ = 0.0;
    Money purchase_cost_ = 0.0;
    Money profit_ = 0.0;
};

}  // namespace invsim
