#include "invsim/domain.hpp"

#include "invsim/error.hpp"

#include <cmath>

namespace invsim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DataError(what);
}

}  // namespace

void validate(const ProductSpec& s) {
    const std::string p = "product '" + s.id + "': ";
    require(std::isfinite(s.selling_price) && s.selling_price > 0, p + "selling_price must be > 0");
    require(std::isfinite(s.purchase_cost) && s.purchase_cost > 0, p + "purchase_cost must be > 0");
    require(std::isfinite(s.ordering_cost) && s.ordering_cost >= 0, p + "ordering_cost must be >= 0");
    require(s.holding_rate > 0 && s.holding_rate <= 1, p + "holding_rate must be in (0, 1]");
    require(std::isfinite(s.size) && s.size > 0, p + "size must be > 0");
    require(s.lead_time >= 0, p + "lead_time must be >= 0");
    require(s.starting_stock >= 0, p + "starting_stock must be >= 0");
}

Money daily_holding_cost_per_unit(const ProductSpec& spec) {
    return spec.holding_rate * spec.purchase_cost * spec.size / kDaysPerYear;
}

void validate(const DemandStats& st) {
    require(std::isfinite(st.mean_daily) && st.mean_daily >= 0, "mean_daily must be >= 0");
    require(std::isfinite(st.std_daily) && st.std_daily >= 0, "std_daily must be >= 0");
    require(st.demand_probability >= 0 && st.demand_probability <= 1,
            "demand_probability must be in [0, 1]");
    require(st.demand_probability > 0 || st.mean_daily == 0,
            "mean_daily must be 0 when demand_probability is 0");
}

void validate(const Policy& policy) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PeriodicFixedQ>) {
                require(p.review_period >= 1, "review_period must be >= 1");
                require(p.order_quantity >= 0, "order_quantity must be >= 0");
            } else if constexpr (std::is_same_v<T, PeriodicUpTo>) {
                require(p.review_period >= 1, "review_period must be >= 1");
                require(p.safety_factor >= 0, "safety_factor must be >= 0");
            } else {
                require(p.reorder_point >= 0, "reorder_point must be >= 0");
                require(p.order_quantity >= 0, "order_quantity must be >= 0");
            }
        },
        policy);
}

std::string policy_name(const Policy& policy) {
    switch (policy.index()) {
        case 0: return "periodic";
        case 1: return "upto";
        default: return "continuous";
    }
}

CostBreakdown::CostBreakdown(Money revenue, Money holding_cost, Money ordering_cost,
                             Money purchase_cost)
    : revenue_(revenue),
      holding_cost_(holding_cost),
      ordering_cost_(ordering_cost),
      purchase_cost_(purchase_cost),
      profit_(revenue - (holding_cost + ordering_cost + purchase_cost)) {
    require(revenue >= 0 && holding_cost >= 0 && ordering_cost >= 0 && purchase_cost >= 0,
            "cost components must be non-negative");
}

}  // namespace invsim
