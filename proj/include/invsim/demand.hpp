#pragma once

#include "invsim/domain.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace invsim {

/// Random engine owned by one worker / one replication.
using Rng = std::mt19937_64;

struct GatedLognormal {};
struct GatedNormal {};
/// Two-normal mixture: N(mean, std) with probability 1 - tail_weight,
/// N(mean + tail_shift * std, std) with probability tail_weight.
struct MixtureTail {
    double tail_weight = 0.1;
    double tail_shift = 3.0;
};

using DemandShape = std::variant<GatedLognormal, GatedNormal, MixtureTail>;

/// Estimated statistics plus the generator built from them.
///
/// With `conditional` set, the engine repeats the demand observed on an order
/// trigger day for the following day instead of sampling (see
/// sample_day_conditional); otherwise days are drawn independently.
struct DemandModel {
    DemandStats stats;
    DemandShape shape = GatedLognormal{};
    bool conditional = false;
};

void validate(const DemandModel& model);
const char* shape_name(const DemandShape& shape);

struct DemandStream {
    std::vector<Units> days;
    std::uint64_t seed = 0;
};

/// Probability from all days, mean and sample std (n - 1) from nonzero days.
/// Throws DataError on empty history or negative entries.
DemandStats estimate_stats(std::span<const Units> history);

struct LognormalParams {
    double mu_ln = 0.0;
    double sigma_ln = 0.0;
};

/// Moment-matched lognormal with the given mean and standard deviation.
LognormalParams lognormal_params(double mean, double std);

/// One day's demand: Bernoulli gate, then the shape's positive-demand draw
/// rounded to the nearest unit and clamped at zero.
Units sample_day(const DemandModel& model, Rng& rng);

/// With `order_triggered_previously` set, returns `previous_demand` without
/// touching the engine; otherwise identical to sample_day.
Units sample_day_conditional(const DemandModel& model, Rng& rng, bool order_triggered_previously,
                             Units previous_demand);

DemandStream generate_stream(const DemandModel& model, std::uint64_t seed,
                             int horizon = kDaysPerYear);

/// Integer history of `days` entries whose nonzero-day statistics match
/// `stats` up to integer rounding: round(p * days) nonzero days carrying
/// lognormal draws standardized onto the target mean and std.
std::vector<Units> synthesize_history(const DemandStats& stats, int days, std::uint64_t seed);

}  // namespace invsim
