#include "invsim/demand.hpp"

#include "invsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace invsim {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double normal(Rng& rng, double mean, double std) {
    if (std <= 0) return mean;
    return std::normal_distribution<double>(mean, std)(rng);
}

Units to_units(double x) {
    if (!(x > 0)) return 0;
    return static_cast<Units>(std::llround(x));
}

double positive_draw(const DemandModel& model, Rng& rng) {
    const auto& st = model.stats;
    return std::visit(
        [&](const auto& shape) -> double {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, GatedLognormal>) {
                if (st.mean_daily <= 0) return 0.0;
                const auto ln = lognormal_params(st.mean_daily, st.std_daily);
                if (ln.sigma_ln <= 0) return st.mean_daily;
                return std::lognormal_distribution<double>(ln.mu_ln, ln.sigma_ln)(rng);
            } else if constexpr (std::is_same_v<T, GatedNormal>) {
                return normal(rng, st.mean_daily, st.std_daily);
            } else {
                const bool tail = uniform01(rng) < shape.tail_weight;
                const double centre =
                    tail ? st.mean_daily + shape.tail_shift * st.std_daily : st.mean_daily;
                return normal(rng, centre, st.std_daily);
            }
        },
        model.shape);
}

}  // namespace

void validate(const DemandModel& model) {
    validate(model.stats);
    if (const auto* mix = std::get_if<MixtureTail>(&model.shape)) {
        if (!(mix->tail_weight > 0 && mix->tail_weight < 1))
            throw DataError("mixture tail_weight must be in (0, 1)");
        if (!(mix->tail_shift > 0)) throw DataError("mixture tail_shift must be > 0");
    }
}

const char* shape_name(const DemandShape& shape) {
    switch (shape.index()) {
        case 0: return "lognormal";
        case 1: return "normal";
        default: return "mixture";
    }
}

DemandStats estimate_stats(std::span<const Units> history) {
    if (history.empty()) throw DataError("no observations");
    std::vector<double> nonzero;
    for (Units d : history) {
        if (d < 0) throw DataError("negative demand in history");
        if (d > 0) nonzero.push_back(static_cast<double>(d));
    }

    DemandStats st;
    st.n_observations = static_cast<std::int64_t>(history.size());
    st.demand_probability =
        static_cast<double>(nonzero.size()) / static_cast<double>(history.size());
    if (nonzero.empty()) return st;

    const double n = static_cast<double>(nonzero.size());
    st.mean_daily = std::accumulate(nonzero.begin(), nonzero.end(), 0.0) / n;
    if (nonzero.size() > 1) {
        double ss = 0.0;
        for (double x : nonzero) ss += (x - st.mean_daily) * (x - st.mean_daily);
        st.std_daily = std::sqrt(ss / (n - 1));
    }
    return st;
}

LognormalParams lognormal_params(double mean, double std) {
    if (!(mean > 0)) throw DataError("lognormal requires positive mean");
    if (!(std >= 0)) throw DataError("lognormal requires non-negative std");
    const double cv = std / mean;
    const double var_ln = std::log1p(cv * cv);
    return {std::log(mean) - 0.5 * var_ln, std::sqrt(var_ln)};
}

Units sample_day(const DemandModel& model, Rng& rng) {
    const double u = uniform01(rng);
    if (u > model.stats.demand_probability || model.stats.demand_probability <= 0) return 0;
    return to_units(positive_draw(model, rng));
}

Units sample_day_conditional(const DemandModel& model, Rng& rng, bool order_triggered_previously,
                             Units previous_demand) {
    if (order_triggered_previously) return std::max<Units>(previous_demand, 0);
    return sample_day(model, rng);
}

DemandStream generate_stream(const DemandModel& model, std::uint64_t seed, int horizon) {
    if (horizon < 1) throw DataError("horizon must be >= 1");
    Rng rng(seed);
    DemandStream out;
    out.seed = seed;
    out.days.resize(static_cast<std::size_t>(horizon));
    for (auto& d : out.days) d = sample_day(model, rng);
    return out;
}

std::vector<Units> synthesize_history(const DemandStats& stats, int days, std::uint64_t seed) {
    validate(stats);
    if (days < 1) throw DataError("days must be >= 1");
    std::vector<Units> history(static_cast<std::size_t>(days), 0);
    if (stats.demand_probability <= 0 || stats.mean_daily <= 0) return history;

    Rng rng(seed);
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(stats.demand_probability * days)), 1,
        static_cast<std::size_t>(days));

    std::vector<std::size_t> order(history.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(k);
    std::sort(order.begin(), order.end());

    // Skewed raw draws, then an affine map onto the exact target moments.
    DemandModel shape_source{stats, GatedLognormal{}, false};
    shape_source.stats.demand_probability = 1.0;
    std::vector<double> raw(k);
    for (auto& x : raw) x = positive_draw(shape_source, rng);

    const double n = static_cast<double>(k);
    const double m = std::accumulate(raw.begin(), raw.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : raw) ss += (x - m) * (x - m);
    const double s = k > 1 ? std::sqrt(ss / (n - 1)) : 0.0;

    for (std::size_t i = 0; i < k; ++i) {
        const double z = s > 0 ? (raw[i] - m) / s : 0.0;
        history[order[i]] = std::max<Units>(1, to_units(stats.mean_daily + stats.std_daily * z));
    }
    return history;
}

}  // namespace invsim
