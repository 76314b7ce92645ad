#include "invsim/optimize.hpp"

#include "invsim/error.hpp"
#include "invsim/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <optional>
#include <set>
#include <tuple>

namespace invsim {

namespace {

std::vector<Units> axis(Units lo, Units hi, Units step) {
    std::vector<Units> v;
    for (Units x = lo; x <= hi; x += step) v.push_back(x);
    return v;
}

// Strided lattice axis that always includes both ends.
std::vector<Units> strided_axis(Units lo, Units hi, Units stride) {
    auto v = axis(lo, hi, stride);
    if (v.back() != hi) v.push_back(hi);
    return v;
}

class Lattice {
public:
    explicit Lattice(const SearchSpace& s) : s_(s) {}

    Eigen::VectorXd unit(const SearchPoint& p) const {
        Eigen::VectorXd x(2);
        x << scale(p.r, s_.r_min, s_.r_max), scale(p.q, s_.q_min, s_.q_max);
        return x;
    }

    Units r_width() const { return s_.r_max - s_.r_min; }
    Units q_width() const { return s_.q_max - s_.q_min; }
    double size() const { return static_cast<double>(r_width() + 1) * static_cast<double>(q_width() + 1); }

    SearchPoint clamp(SearchPoint p) const {
        return {std::clamp(p.r, s_.r_min, s_.r_max), std::clamp(p.q, s_.q_min, s_.q_max)};
    }

    // Closest point (Chebyshev rings, then smaller Q, smaller r) not in `taken`.
    std::optional<SearchPoint> nearest_free(SearchPoint p, const std::set<SearchPoint>& taken) const {
        if (static_cast<double>(taken.size()) >= size()) return std::nullopt;
        p = clamp(p);
        const Units max_ring = std::max(r_width(), q_width());
        for (Units ring = 0; ring <= max_ring; ++ring) {
            std::optional<SearchPoint> found;
            for (Units dq = -ring; dq <= ring; ++dq) {
                for (Units dr = -ring; dr <= ring; ++dr) {
                    if (std::max(std::abs(dq), std::abs(dr)) != ring) continue;
                    const SearchPoint c{p.r + dr, p.q + dq};
                    if (!s_.contains(c) || taken.contains(c)) continue;
                    if (!found || std::tie(c.q, c.r) < std::tie(found->q, found->r)) found = c;
                }
            }
            if (found) return found;
        }
        return std::nullopt;
    }

private:
    static double scale(Units v, Units lo, Units hi) {
        return hi > lo ? static_cast<double>(v - lo) / static_cast<double>(hi - lo) : 0.0;
    }

    SearchSpace s_;
};

std::vector<SearchPoint> latin_hypercube(const SearchSpace& space, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto column = [&](Units lo, Units hi) {
        std::vector<int> strata(static_cast<std::size_t>(count));
        std::iota(strata.begin(), strata.end(), 0);
        std::shuffle(strata.begin(), strata.end(), rng);
        std::vector<Units> out;
        for (int s : strata) {
            const double u = (s + u01(rng)) / count;
            out.push_back(lo + static_cast<Units>(std::llround(u * static_cast<double>(hi - lo))));
        }
        return out;
    };
    const auto rs = column(space.r_min, space.r_max);
    const auto qs = column(space.q_min, space.q_max);
    std::vector<SearchPoint> pts;
    for (int i = 0; i < count; ++i) pts.push_back({rs[i], qs[i]});
    return pts;
}

}  // namespace

void validate(const SearchSpace& s) {
    if (s.r_min > s.r_max) throw DataError("inverted r bounds");
    if (s.q_min > s.q_max) throw DataError("inverted q bounds");
    if (s.r_min < 0 || s.q_min < 0) throw DataError("search bounds must be >= 0");
    if (s.step < 1) throw DataError("grid step must be >= 1");
}

const char* method_name(SearchMethod m) { return m == SearchMethod::grid ? "grid" : "bayesian"; }

bool better(const EvaluationRecord& a, const EvaluationRecord& b) {
    if (a.summary.mean_profit != b.summary.mean_profit)
        return a.summary.mean_profit > b.summary.mean_profit;
    if (a.point.q != b.point.q) return a.point.q < b.point.q;
    return a.point.r < b.point.r;
}

std::size_t best_index(const std::vector<EvaluationRecord>& history) {
    if (history.empty()) throw DataError("no evaluations");
    std::size_t best = 0;
    for (std::size_t i = 1; i < history.size(); ++i)
        if (better(history[i], history[best])) best = i;
    return best;
}

double replication_noise_variance(const std::vector<EvaluationRecord>& history) {
    if (history.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& rec : history) {
        const double se = rec.summary.standard_error();
        acc += se * se;
    }
    return acc / static_cast<double>(history.size());
}

OptimizationResult grid_search(const SearchSpace& space, const Objective& objective) {
    validate(space);
    OptimizationResult res;
    res.method = SearchMethod::grid;
    for (Units q : axis(space.q_min, space.q_max, space.step))
        for (Units r : axis(space.r_min, space.r_max, space.step))
            res.history.push_back({{r, q}, objective({r, q})});
    if (res.history.empty()) throw DataError("empty grid");
    const auto& best = res.history[best_index(res.history)];
    res.best_point = best.point;
    res.best_summary = best.summary;
    return res;
}

OptimizationResult bayesian_optimize(const SearchSpace& space, const Objective& objective,
                                     const BayesOptions& opt) {
    validate(space);
    if (opt.init_count < 2) throw DataError("init_count must be >= 2");
    if (opt.budget < opt.init_count) throw DataError("budget must be >= init_count");

    const Lattice lattice(space);
    OptimizationResult res;
    res.method = SearchMethod::bayesian;
    std::set<SearchPoint> taken;

    auto evaluate = [&](SearchPoint p) {
        taken.insert(p);
        res.history.push_back({p, objective(p)});
    };

    for (const auto& p : latin_hypercube(space, opt.init_count, opt.seed)) {
        if (const auto free = lattice.nearest_free(p, taken)) evaluate(*free);
    }

    // Acquisition lattice, strided so it holds at most max_candidates points.
    Units stride = 1;
    auto count_for = [&](Units s) {
        return static_cast<double>(lattice.r_width() / s + 2) *
               static_cast<double>(lattice.q_width() / s + 2);
    };
    while (lattice.size() > static_cast<double>(opt.max_candidates) &&
           count_for(stride) > static_cast<double>(opt.max_candidates))
        ++stride;
    const auto r_axis = strided_axis(space.r_min, space.r_max, stride);
    const auto q_axis = strided_axis(space.q_min, space.q_max, stride);

    // The final quarter of the GP rounds drops the exploration margin so the
    // search settles on the incumbent's basin instead of probing around it.
    const auto gp_rounds = static_cast<std::size_t>(opt.budget) - res.history.size();
    const std::size_t exploit_from = res.history.size() + gp_rounds - gp_rounds / 4;

    while (static_cast<int>(res.history.size()) < opt.budget &&
           static_cast<double>(taken.size()) < lattice.size()) {
        Eigen::MatrixXd x(static_cast<Eigen::Index>(res.history.size()), 2);
        Eigen::VectorXd y(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const auto& rec = res.history[static_cast<std::size_t>(i)];
            x.row(i) = lattice.unit(rec.point).transpose();
            y[i] = rec.summary.mean_profit;
        }
        const auto gp = GpSurrogate::fit(x, y, replication_noise_variance(res.history));
        const double incumbent = res.history[best_index(res.history)].summary.mean_profit;
        const double scale = gp.value_scale();
        const double best_std = (incumbent - gp.value_mean()) / scale;
        const double xi = res.history.size() >= exploit_from ? 0.0 : opt.xi;

        std::optional<SearchPoint> pick;
        double pick_ei = -1.0;
        auto scan = [&](const std::vector<SearchPoint>& cands) {
            constexpr std::size_t kChunk = 4096;
            for (std::size_t start = 0; start < cands.size(); start += kChunk) {
                const std::size_t end = std::min(cands.size(), start + kChunk);
                Eigen::MatrixXd xs(static_cast<Eigen::Index>(end - start), 2);
                for (std::size_t k = start; k < end; ++k)
                    xs.row(static_cast<Eigen::Index>(k - start)) = lattice.unit(cands[k]).transpose();
                const auto preds = gp.predict(xs);
                for (std::size_t k = start; k < end; ++k) {
                    const auto& pr = preds[k - start];
                    const double ei = expected_improvement((pr.mean - gp.value_mean()) / scale,
                                                           std::sqrt(pr.variance) / scale,
                                                           best_std, xi);
                    if (ei > pick_ei) {
                        pick_ei = ei;
                        pick = cands[k];
                    }
                }
            }
        };

        std::vector<SearchPoint> coarse;
        coarse.reserve(r_axis.size() * q_axis.size());
        for (Units q : q_axis)
            for (Units r : r_axis)
                if (!taken.contains({r, q})) coarse.push_back({r, q});
        scan(coarse);

        if (pick && stride > 1) {
            const SearchPoint centre = *pick;
            std::vector<SearchPoint> local;
            for (Units q = centre.q - stride; q <= centre.q + stride; ++q)
                for (Units r = centre.r - stride; r <= centre.r + stride; ++r) {
                    const SearchPoint c{r, q};
                    if (space.contains(c) && !taken.contains(c)) local.push_back(c);
                }
            scan(local);
        }

        const SearchPoint fallback = res.history[best_index(res.history)].point;
        const auto next = lattice.nearest_free(pick.value_or(fallback), taken);
        if (!next) break;
        evaluate(*next);
    }

    const auto& best = res.history[best_index(res.history)];
    res.best_point = best.point;
    res.best_summary = best.summary;
    return res;
}

}  // namespace invsim
