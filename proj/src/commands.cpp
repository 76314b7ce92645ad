#include "invsim/commands.hpp"

#include "invsim/diagnostics.hpp"
#include "invsim/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace invsim {

namespace {

using json = nlohmann::ordered_json;

// Option access with per-command whitelisting.
class OptionReader {
public:
    OptionReader(const Options& opts, std::set<std::string> allowed) : opts_(opts) {
        for (const auto& [k, v] : opts_)
            if (!allowed.contains(k)) throw UsageError("unknown option '" + k + "'");
    }

    std::optional<std::string> get(const std::string& key) const {
        const auto it = opts_.find(key);
        if (it == opts_.end()) return std::nullopt;
        return it->second;
    }

    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<const char*> allowed) const {
        const std::string v = get(key).value_or(fallback);
        std::string expected;
        for (const char* a : allowed) {
            if (v == a) return v;
            expected += (expected.empty() ? "" : ", ") + std::string(a);
        }
        throw UsageError("unknown " + key + " '" + v + "' (expected one of " + expected + ")");
    }

    template <class Int>
    std::optional<Int> integer(const std::string& key) const {
        const auto v = get(key);
        if (!v) return std::nullopt;
        Int out{};
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc() || ptr != v->data() + v->size() || v->empty())
            throw UsageError(key + ": '" + *v + "' is not a whole number");
        return out;
    }

    std::optional<double> real(const std::string& key) const {
        const auto v = get(key);
        if (!v) return std::nullopt;
        double out{};
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc() || ptr != v->data() + v->size() || v->empty())
            throw UsageError(key + ": '" + *v + "' is not a number");
        return out;
    }

    bool flag(const std::string& key) const {
        const auto v = get(key);
        if (!v) return false;
        if (*v == "1" || *v == "true") return true;
        if (*v == "0" || *v == "false") return false;
        throw UsageError(key + ": expected 0 or 1");
    }

private:
    const Options& opts_;
};

const std::set<std::string> kRunKeys{"seed", "replications", "workers", "product", "sampling"};

std::set<std::string> with_run_keys(std::initializer_list<const char*> extra) {
    std::set<std::string> keys = kRunKeys;
    keys.insert(extra.begin(), extra.end());
    return keys;
}

ReplicationPlan plan_from(const Experiment& exp, const OptionReader& r) {
    ReplicationPlan plan;
    plan.crn = true;
    plan.base_seed = r.integer<std::uint64_t>("seed").value_or(exp.config.seed.value_or(42));
    plan.n_replications = r.integer<std::int64_t>("replications").value_or(exp.config.replications);
    if (plan.n_replications < 1) throw DataError("replications must be >= 1");
    if (const auto w = r.get("workers"); w && *w == "auto") {
        plan.workers = 0;
    } else {
        plan.workers = r.integer<unsigned>("workers").value_or(exp.config.workers);
    }
    return plan;
}

std::vector<const ResolvedProduct*> selected(const Experiment& exp, const OptionReader& r) {
    std::vector<const ResolvedProduct*> out;
    const auto only = r.get("product");
    for (const auto& p : exp.products)
        if (!only || p.config.spec.id == *only) out.push_back(&p);
    if (out.empty()) throw UsageError("unknown product '" + only.value_or("") + "'");
    return out;
}

DemandModel model_for(const ResolvedProduct& p, const OptionReader& r) {
    DemandModel m = p.model;
    m.conditional = r.choice("sampling", "random", {"random", "conditional"}) == "conditional";
    return m;
}

json summary_json(const ReplicationSummary& s) {
    return {{"n", s.n},
            {"mean_profit", s.mean_profit},
            {"std_profit", s.std_profit},
            {"mean_lost_fraction", s.mean_lost_fraction},
            {"mean_end_inventory", s.mean_end_inventory}};
}

json stats_json(const DemandStats& s) {
    return {{"demand_probability", s.demand_probability},
            {"mean_daily", s.mean_daily},
            {"std_daily", s.std_daily},
            {"n_observations", s.n_observations},
            {"annual_demand", s.expected_annual_demand()}};
}

json policy_json(const PolicySetup& setup) {
    json j{{"name", policy_name(setup.policy)}};
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PeriodicFixedQ>) {
                j["review_period"] = p.review_period;
                j["order_quantity"] = p.order_quantity;
            } else if constexpr (std::is_same_v<T, PeriodicUpTo>) {
                j["review_period"] = p.review_period;
                j["safety_factor"] = p.safety_factor;
                j["order_up_to"] = setup.params.order_up_to;
            } else {
                j["reorder_point"] = p.reorder_point;
                j["order_quantity"] = p.order_quantity;
                j["order_rule"] = p.dynamic_quantity ? "dynamic" : "fixed";
            }
        },
        setup.policy);
    j["safety_stock"] = setup.params.safety_stock;
    return j;
}

json space_json(const SearchSpace& s) {
    return {{"r_min", s.r_min}, {"r_max", s.r_max}, {"q_min", s.q_min}, {"q_max", s.q_max}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string trace_csv(const SimulationResult& res) {
    std::ostringstream out;
    out << "day,demand,sold,lost,end_inventory,order_placed,arrival\n";
    for (const auto& d : res.trace) {
        out << d.day << ',' << d.demand << ',' << d.sold << ',' << d.lost << ',' << d.end_inventory
            << ',';
        if (d.order_placed) out << *d.order_placed;
        out << ',';
        if (d.arrival) out << *d.arrival;
        out << '\n';
    }
    return out.str();
}

std::string series_csv(const std::string& index_name, const std::string& value_name,
                       const std::vector<double>& values, std::size_t first_index) {
    std::ostringstream out;
    out << index_name << ',' << value_name << '\n';
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i + first_index << ',' << format_number(values[i]) << '\n';
    return out.str();
}

SearchSpace bounds_for(const ResolvedProduct& p, const OptionReader& r) {
    const Units step = r.integer<Units>("step").value_or(10);
    if (step < 1) throw DataError("step must be >= 1");
    SearchSpace s = default_bounds(p, step);
    if (const auto b = r.get("bounds")) {
        long long r0, r1, q0, q1;
        char c1, c2, c3;
        std::istringstream in(*b);
        if (!(in >> r0 >> c1 >> r1 >> c2 >> q0 >> c3 >> q1) || c1 != ':' || c2 != ',' || c3 != ':' ||
            !(in >> std::ws).eof())
            throw UsageError("bounds must look like rmin:rmax,qmin:qmax");
        s = {r0, r1, q0, q1, step};
    }
    validate(s);
    return s;
}

Objective make_objective(const ResolvedProduct& p, const OptionReader& r,
                         const ReplicationPlan& plan, const SearchSpace& space,
                         std::shared_ptr<const ScenarioSet>& keep_alive) {
    const std::string kind = r.choice("objective", "simulation", {"simulation", "quadratic"});
    if (kind == "quadratic") {
        const double r_opt = space.r_min + 0.3 * static_cast<double>(space.r_max - space.r_min);
        const double q_opt = space.q_min + 0.7 * static_cast<double>(space.q_max - space.q_min);
        return [r_opt, q_opt](const SearchPoint& pt) {
            const double dr = static_cast<double>(pt.r) - r_opt;
            const double dq = static_cast<double>(pt.q) - q_opt;
            ReplicationSummary s;
            s.n = 1;
            s.mean_profit = -(dr * dr) - dq * dq;
            s.profits = {s.mean_profit};
            return s;
        };
    }

    const auto setup = policy_for(p, "continuous");
    const ProductSpec spec = p.config.spec;
    const bool dynamic = p.config.dynamic_quantity;
    const DemandModel model = model_for(p, r);
    if (model.conditional) {
        return [spec, model, setup, plan, dynamic](const SearchPoint& pt) {
            return evaluate_policy(spec, ContinuousFixedQ{pt.r, pt.q, dynamic}, model, setup.params, plan);
        };
    }
    keep_alive = std::make_shared<const ScenarioSet>(model, plan);
    const std::shared_ptr<const ScenarioSet> scenarios = keep_alive;
    const unsigned workers = plan.workers;
    return [spec, scenarios, setup, workers, dynamic](const SearchPoint& pt) {
        return evaluate_policy(spec, ContinuousFixedQ{pt.r, pt.q, dynamic}, *scenarios, setup.params,
                               workers);
    };
}

std::string history_csv(const std::vector<EvaluationRecord>& history, bool with_lost) {
    std::ostringstream out;
    out << "r,q,mean_profit,std_profit" << (with_lost ? ",mean_lost_fraction" : "") << '\n';
    for (const auto& rec : history) {
        out << rec.point.r << ',' << rec.point.q << ',' << format_number(rec.summary.mean_profit)
            << ',' << format_number(rec.summary.std_profit);
        if (with_lost) out << ',' << format_number(rec.summary.mean_lost_fraction);
        out << '\n';
    }
    return out.str();
}

Units ceil_units(double x) { return static_cast<Units>(std::ceil(x - 1e-9)); }

}  // namespace

PolicySetup policy_for(const ResolvedProduct& product, const std::string& name) {
    const auto& cfg = product.config;
    const auto& stats = product.model.stats;
    const int review = cfg.review_period.value_or(kDefaultReviewPeriod);
    const Units default_q =
        ceil_units(review * stats.demand_probability * stats.mean_daily);
    const auto params = replenishment_params(stats, cfg.safety_factor, cfg.spec.lead_time, review);

    if (name == "periodic")
        return {PeriodicFixedQ{review, cfg.order_quantity.value_or(default_q)}, params};
    if (name == "upto") return {PeriodicUpTo{review, cfg.safety_factor}, params};
    if (name == "continuous")
        return {ContinuousFixedQ{cfg.reorder_point.value_or(params.reorder_point),
                                 cfg.order_quantity.value_or(default_q), cfg.dynamic_quantity},
                params};
    throw UsageError("unknown policy '" + name + "' (expected periodic, upto or continuous)");
}

SearchSpace default_bounds(const ResolvedProduct& product, Units step) {
    const auto& stats = product.model.stats;
    const double rop = static_cast<double>(
        reorder_point(stats, product.config.safety_factor, product.config.spec.lead_time));
    const double monthly = stats.expected_annual_demand() / 12.0;
    SearchSpace s;
    s.r_min = static_cast<Units>(std::floor(0.5 * rop));
    s.r_max = static_cast<Units>(std::ceil(2.0 * rop));
    s.q_min = static_cast<Units>(std::floor(0.25 * monthly));
    s.q_max = static_cast<Units>(std::ceil(2.0 * monthly));
    s.step = step;
    return s;
}

Report cmd_estimate(const std::filesystem::path& history_csv) {
    const auto history = read_history_csv(history_csv);
    json products = json::array();
    for (std::size_t k = 0; k < history.ids.size(); ++k) {
        json entry{{"id", history.ids[k]}};
        entry.update(stats_json(estimate_stats(history.columns[k])));
        products.push_back(std::move(entry));
    }
    json doc{{"command", "estimate"}, {"days", history.days()}, {"products", std::move(products)}};
    return {dump(doc), {}};
}

Report cmd_simulate(const Experiment& exp, const Options& opts) {
    const OptionReader r(opts, with_run_keys({"policy", "trace"}));
    const std::string policy = r.choice("policy", "continuous", {"periodic", "upto", "continuous"});
    const auto plan = plan_from(exp, r);
    const bool want_trace = r.flag("trace");

    Report rep;
    json products = json::array();
    double total = 0.0;
    for (const auto* p : selected(exp, r)) {
        const auto setup = policy_for(*p, policy);
        const auto model = model_for(*p, r);
        const auto summary = evaluate_policy(p->config.spec, setup.policy, model, setup.params, plan);
        total += summary.mean_profit;

        json demand{{"model", shape_name(model.shape)}};
        demand.update(stats_json(model.stats));
        products.push_back({{"id", p->config.spec.id},
                            {"policy", policy_json(setup)},
                            {"demand", std::move(demand)},
                            {"summary", summary_json(summary)}});

        if (want_trace) {
            const std::uint64_t seed = replication_seed(plan.base_seed, 0);
            const auto res = model.conditional
                                 ? simulate_year_conditional(p->config.spec, setup.policy, model, seed,
                                                             setup.params)
                                 : simulate_year(p->config.spec, setup.policy,
                                                 generate_stream(model, seed), setup.params);
            rep.artifacts.push_back({"trace_" + p->config.spec.id + ".csv", trace_csv(res)});
        }
    }
    json doc{{"command", "simulate"},
             {"policy", policy},
             {"sampling", model_for(exp.products.front(), r).conditional ? "conditional" : "random"},
             {"seed", plan.base_seed},
             {"replications", plan.n_replications},
             {"products", std::move(products)},
             {"total_mean_profit", total}};
    rep.json = dump(doc);
    return rep;
}

Report cmd_optimize(const Experiment& exp, const Options& opts) {
    const OptionReader r(opts, with_run_keys({"method", "objective", "bounds", "step", "budget",
                                              "init", "xi"}));
    const std::string method = r.choice("method", "grid", {"grid", "bayes"});
    const auto plan = plan_from(exp, r);

    BayesOptions bo;
    bo.budget = r.integer<int>("budget").value_or(bo.budget);
    bo.init_count = r.integer<int>("init").value_or(bo.init_count);
    bo.xi = r.real("xi").value_or(bo.xi);
    bo.seed = plan.base_seed;

    Report rep;
    json products = json::array();
    double total = 0.0;
    for (const auto* p : selected(exp, r)) {
        const auto space = bounds_for(*p, r);
        std::shared_ptr<const ScenarioSet> scenarios;
        const auto objective = make_objective(*p, r, plan, space, scenarios);
        const auto result = method == "grid" ? grid_search(space, objective)
                                             : bayesian_optimize(space, objective, bo);
        total += result.best_summary.mean_profit;

        json bounds = space_json(space);
        if (method == "grid") bounds["step"] = space.step;
        json best{{"r", result.best_point.r}, {"q", result.best_point.q}};
        best.update(summary_json(result.best_summary));
        products.push_back({{"id", p->config.spec.id},
                            {"bounds", std::move(bounds)},
                            {"evaluations", result.history.size()},
                            {"best", std::move(best)}});
        rep.artifacts.push_back(
            {"optimize_history_" + p->config.spec.id + ".csv", history_csv(result.history, true)});
    }
    json doc{{"command", "optimize"},
             {"method", method == "grid" ? "grid" : "bayesian"},
             {"objective", r.choice("objective", "simulation", {"simulation", "quadratic"})},
             {"seed", plan.base_seed},
             {"replications", plan.n_replications}};
    if (method == "bayes") {
        doc["budget"] = bo.budget;
        doc["init"] = bo.init_count;
    }
    doc["products"] = std::move(products);
    doc["total_mean_profit"] = total;
    rep.json = dump(doc);
    return rep;
}

Report cmd_surface(const Experiment& exp, const Options& opts) {
    const OptionReader r(opts, with_run_keys({"bounds", "step"}));
    const auto plan = plan_from(exp, r);

    Report rep;
    json products = json::array();
    for (const auto* p : selected(exp, r)) {
        const auto space = bounds_for(*p, r);
        std::shared_ptr<const ScenarioSet> scenarios;
        const auto result = grid_search(space, make_objective(*p, r, plan, space, scenarios));
        json bounds = space_json(space);
        bounds["step"] = space.step;
        products.push_back({{"id", p->config.spec.id},
                            {"bounds", std::move(bounds)},
                            {"points", result.history.size()},
                            {"best", {{"r", result.best_point.r},
                                      {"q", result.best_point.q},
                                      {"mean_profit", result.best_summary.mean_profit}}}});
        rep.artifacts.push_back(
            {"surface_" + p->config.spec.id + ".csv", history_csv(result.history, false)});
    }
    json doc{{"command", "surface"},
             {"seed", plan.base_seed},
             {"replications", plan.n_replications},
             {"products", std::move(products)}};
    rep.json = dump(doc);
    return rep;
}

Report cmd_diagnose(const Experiment& exp, const Options& opts) {
    const OptionReader r(opts, with_run_keys({"policy"}));
    const std::string policy = r.choice("policy", "continuous", {"periodic", "upto", "continuous"});
    const auto plan = plan_from(exp, r);
    if (plan.n_replications < 100)
        throw DataError("diagnose needs at least 100 replications, got " +
                        std::to_string(plan.n_replications));

    Report rep;
    json products = json::array();
    for (const auto* p : selected(exp, r)) {
        const auto setup = policy_for(*p, policy);
        const auto summary =
            evaluate_policy(p->config.spec, setup.policy, model_for(*p, r), setup.params, plan);
        const auto report = assess_convergence(summary.profits);
        const std::string& id = p->config.spec.id;
        products.push_back({{"id", id},
                            {"n", summary.n},
                            {"mean_profit", summary.mean_profit},
                            {"final_standard_error", report.standard_error.back()},
                            {"relative_error", report.relative_error},
                            {"batch_size", report.batch_size},
                            {"acf_band", report.acf_band},
                            {"fraction_within_band", report.fraction_within_band},
                            {"converged", report.converged}});
        rep.artifacts.push_back({"diag_" + id + "_running_mean.csv",
                                 series_csv("replication", "running_mean", report.running_mean, 1)});
        rep.artifacts.push_back({"diag_" + id + "_batch_means.csv",
                                 series_csv("batch", "mean_profit", report.batch_means, 1)});
        rep.artifacts.push_back({"diag_" + id + "_standard_error.csv",
                                 series_csv("replication", "standard_error", report.standard_error, 1)});
        rep.artifacts.push_back({"diag_" + id + "_autocorrelation.csv",
                                 series_csv("lag", "autocorrelation", report.autocorrelation, 1)});
    }
    json doc{{"command", "diagnose"},
             {"policy", policy},
             {"seed", plan.base_seed},
             {"replications", plan.n_replications},
             {"products", std::move(products)}};
    rep.json = dump(doc);
    return rep;
}

Report cmd_fixture(const Experiment& exp, const Options& opts) {
    const OptionReader r(opts, {"days", "seed", "product"});
    const int days = r.integer<int>("days").value_or(kDaysPerYear);
    if (days < 1) throw DataError("days must be >= 1");
    const std::uint64_t seed = r.integer<std::uint64_t>("seed").value_or(exp.config.seed.value_or(42));

    DemandHistory history;
    json products = json::array();
    std::uint64_t k = 0;
    for (const auto* p : selected(exp, r)) {
        history.ids.push_back(p->config.spec.id);
        history.columns.push_back(synthesize_history(p->model.stats, days, replication_seed(seed, k++)));
        json entry{{"id", p->config.spec.id}, {"target", stats_json(p->model.stats)}};
        entry["estimated"] = stats_json(estimate_stats(history.columns.back()));
        products.push_back(std::move(entry));
    }
    json doc{{"command", "fixture"}, {"days", days}, {"seed", seed}, {"products", std::move(products)}};
    return {dump(doc), {{"history.csv", history_to_csv(history)}}};
}

Report run_command(const Experiment& exp, const std::string& command, const Options& opts) {
    if (command == "simulate") return cmd_simulate(exp, opts);
    if (command == "optimize") return cmd_optimize(exp, opts);
    if (command == "surface") return cmd_surface(exp, opts);
    if (command == "diagnose") return cmd_diagnose(exp, opts);
    if (command == "fixture") return cmd_fixture(exp, opts);
    throw UsageError("unknown command '" + command + "'");
}

}  // namespace invsim
