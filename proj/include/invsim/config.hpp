#pragma once

#include "invsim/demand.hpp"
#include "invsim/domain.hpp"
#include "invsim/history.hpp"
#include "invsim/policy.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace invsim {

/// One `[product <id>]` section of the configuration file.
struct ProductConfig {
    ProductSpec spec;
    std::optional<DemandStats> stats;  // explicit override of the history estimate
    DemandShape shape = GatedLognormal{};
    double safety_factor = kDefaultSafetyFactor;
    std::optional<int> review_period;
    std::optional<Units> order_quantity;
    std::optional<Units> reorder_point;
    bool dynamic_quantity = false;
};

struct ExperimentConfig {
    std::optional<std::uint64_t> seed;
    std::int64_t replications = 1000;
    unsigned workers = 0;  // auto
    std::optional<std::filesystem::path> history;  // resolved against the config directory
    std::vector<ProductConfig> products;
};

/// Parses the flat key-value format:
///
///     # global keys
///     seed = 42
///     replications = 1000
///     workers = auto
///     history = demand.csv
///
///     [product Pr1]
///     purchase_cost = 12
///     ...
///
/// Errors carry "<source>:<line>:".
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// A product ready to simulate: spec plus the demand model built from either
/// the explicit stats or the history column.
struct ResolvedProduct {
    ProductConfig config;
    DemandModel model;
};

struct Experiment {
    ExperimentConfig config;
    std::vector<ResolvedProduct> products;
};

/// Loads the history if any product needs it. Throws DataError when a product
/// has neither explicit stats nor a history column.
Experiment resolve(ExperimentConfig config);

/// Default review period when a product does not set one.
inline constexpr int kDefaultReviewPeriod = 30;

}  // namespace invsim
