#include "invsim/commands.hpp"
#include "invsim/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace invsim;
using nlohmann::json;

namespace {

const char* kTwoProducts = R"(# comment line
seed = 9
replications = 40
workers = 2

[product A]
purchase_cost = 12
selling_price = 16.10
ordering_cost = 1000
size = 0.57
lead_time = 9
starting_stock = 2750
mean_daily = 103.5
std_daily = 37.32
demand_probability = 0.76
review_period = 52
order_quantity = 4120

[product B]   # trailing comment
purchase_cost = 37
selling_price = 68
ordering_cost = 1200
holding_rate = 0.25
size = 1.05
lead_time = 12
starting_stock = 1400
mean_daily = 150.06
std_daily = 3.21
demand_probability = 0.23
demand_model = mixture
tail_weight = 0.2
order_rule = dynamic
)";

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, ".", "test.ini");
}

Experiment experiment(const std::string& text) { return resolve(parse(text)); }

std::string error_of(const std::string& text) {
    try {
        (void)experiment(text);
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "invsim_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse(kTwoProducts);
    CHECK(cfg.seed == std::uint64_t{9});
    CHECK(cfg.replications == 40);
    CHECK(cfg.workers == 2);
    REQUIRE(cfg.products.size() == 2);
    const auto& a = cfg.products[0];
    CHECK(a.spec.id == "A");
    CHECK(a.spec.selling_price == 16.10);
    CHECK(a.spec.holding_rate == 0.2);
    CHECK(a.review_period == 52);
    CHECK(a.order_quantity == Units{4120});
    CHECK_FALSE(a.reorder_point.has_value());
    CHECK(a.stats->demand_probability == 0.76);
    const auto& b = cfg.products[1];
    CHECK(b.spec.holding_rate == 0.25);
    CHECK(b.dynamic_quantity);
    REQUIRE(std::holds_alternative<MixtureTail>(b.shape));
    CHECK(std::get<MixtureTail>(b.shape).tail_weight == 0.2);
    CHECK(std::get<MixtureTail>(b.shape).tail_shift == 3.0);
}

TEST_CASE("config errors carry the line number") {
    CHECK(error_of("seed = x\n") == "test.ini:1: seed: 'x' is not a whole number");
    CHECK(error_of("bogus = 1\n") == "test.ini:1: unknown global key 'bogus'");
    CHECK(error_of("[product A]\nlead_time = 2\ncolour = red\n") ==
          "test.ini:3: unknown product key 'colour'");
    CHECK(error_of("[product A]\n[product A]\n") == "test.ini:2: duplicate product 'A'");
    CHECK(error_of("[widget A]\n") == "test.ini:1: expected [product <id>]");
    CHECK(error_of("[product A]\nmean_daily = 3\n").find("must be given together") != std::string::npos);
    CHECK(error_of("").find("no products") != std::string::npos);
    CHECK(error_of("[product A]\npurchase_cost = 1\nselling_price = 2\n").find("no demand statistics") !=
          std::string::npos);
    CHECK(error_of("[product A]\ntail_weight = 0.3\npurchase_cost = 1\nselling_price = 2\n")
              .find("require demand_model = mixture") != std::string::npos);
}

TEST_CASE("history csv parsing") {
    std::istringstream ok("day,P,Q\n1,3,0\n2,0,5\n\n3,4,6\n");
    const auto h = parse_history_csv(ok, "h.csv");
    CHECK(h.ids == std::vector<std::string>{"P", "Q"});
    CHECK(h.days() == 3);
    CHECK(*h.find("Q") == std::vector<Units>{0, 5, 6});
    CHECK(h.find("Z") == nullptr);

    auto fails = [](const std::string& text) {
        std::istringstream in(text);
        try {
            (void)parse_history_csv(in, "h.csv");
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(fails("") == "h.csv: no observations");
    CHECK(fails("day,P\n") == "h.csv: no observations");
    CHECK(fails("day,P\n1,2\n2,x\n") == "h.csv:3: demand 'x' for P is not a whole number");
    CHECK(fails("day,P\n1,-2\n") == "h.csv:2: negative demand for P");
    CHECK(fails("day,P\n1,2,3\n") == "h.csv:2: expected 2 fields, got 3");
    CHECK(fails("date,P\n1,2\n") == "h.csv:1: header must be 'day,<id1>,<id2>,...'");

    std::istringstream round(history_to_csv(h));
    const auto again = parse_history_csv(round);
    CHECK(again.columns == h.columns);
    CHECK(again.ids == h.ids);
}

TEST_CASE("estimate report") {
    const auto dir = temp_dir();
    const auto path = dir / "est.csv";
    std::ofstream(path) << "day,P\n1,0\n2,10\n3,20\n4,0\n";
    const auto j = json::parse(cmd_estimate(path).json);
    const auto& p = j["products"][0];
    CHECK(p["id"] == "P");
    CHECK(p["demand_probability"] == 0.5);
    CHECK(p["mean_daily"] == 15.0);
    CHECK(p["annual_demand"].get<double>() == doctest::Approx(365 * 0.5 * 15));
    CHECK(p["n_observations"] == 4);
    CHECK_THROWS_AS(cmd_estimate(dir / "missing.csv"), DataError);
}

TEST_CASE("policy defaults") {
    const auto exp = experiment(kTwoProducts);
    const auto& a = exp.products[0];
    const auto periodic = policy_for(a, "periodic");
    CHECK(std::get<PeriodicFixedQ>(periodic.policy).review_period == 52);
    CHECK(std::get<PeriodicFixedQ>(periodic.policy).order_quantity == 4120);
    const auto cont = policy_for(a, "continuous");
    const auto& c = std::get<ContinuousFixedQ>(cont.policy);
    CHECK(c.reorder_point == reorder_point(a.model.stats, 1.645, 9));
    CHECK(c.order_quantity == 4120);

    const auto& b = exp.products[1];
    const auto bq = std::get<ContinuousFixedQ>(policy_for(b, "continuous").policy);
    CHECK(bq.order_quantity == static_cast<Units>(std::ceil(30 * 0.23 * 150.06)));
    CHECK(bq.dynamic_quantity);
    CHECK(std::get<PeriodicUpTo>(policy_for(b, "upto").policy).review_period == 30);
    CHECK_THROWS_AS(policy_for(a, "sometimes"), UsageError);

    const auto box = default_bounds(a);
    const double rop = static_cast<double>(reorder_point(a.model.stats, 1.645, 9));
    const double monthly = 365 * 0.76 * 103.5 / 12;
    CHECK(box.r_min == static_cast<Units>(std::floor(0.5 * rop)));
    CHECK(box.r_max == static_cast<Units>(std::ceil(2 * rop)));
    CHECK(box.q_min == static_cast<Units>(std::floor(0.25 * monthly)));
    CHECK(box.q_max == static_cast<Units>(std::ceil(2 * monthly)));
    CHECK(box.step == 10);
}

TEST_CASE("simulate command") {
    const auto exp = experiment(kTwoProducts);
    const Options opts{{"policy", "periodic"}, {"trace", "1"}, {"product", "A"}};
    const auto rep = cmd_simulate(exp, opts);
    const auto j = json::parse(rep.json);
    CHECK(j["seed"] == 9);
    CHECK(j["replications"] == 40);
    REQUIRE(j["products"].size() == 1);
    const auto& s = j["products"][0]["summary"];
    CHECK(s["n"] == 40);
    CHECK(j["total_mean_profit"] == s["mean_profit"]);
    REQUIRE(rep.artifacts.size() == 1);
    CHECK(rep.artifacts[0].name == "trace_A.csv");
    CHECK(rep.artifacts[0].content.rfind("day,demand,sold,lost,end_inventory,order_placed,arrival\n", 0) == 0);
    CHECK(std::count(rep.artifacts[0].content.begin(), rep.artifacts[0].content.end(), '\n') == 366);

    // Summary fields match the library call.
    const auto& a = exp.products[0];
    const auto setup = policy_for(a, "periodic");
    ReplicationPlan plan;
    plan.n_replications = 40;
    plan.base_seed = 9;
    const auto direct = evaluate_policy(a.config.spec, setup.policy, a.model, setup.params, plan);
    CHECK(s["mean_profit"].get<double>() == direct.mean_profit);
    CHECK(s["std_profit"].get<double>() == direct.std_profit);

    CHECK(cmd_simulate(exp, {{"seed", "3"}}).json == cmd_simulate(exp, {{"seed", "3"}, {"workers", "5"}}).json);
    CHECK_THROWS_AS(cmd_simulate(exp, {{"policy", "never"}}), UsageError);
    CHECK_THROWS_AS(cmd_simulate(exp, {{"colour", "red"}}), UsageError);
    CHECK_THROWS_AS(cmd_simulate(exp, {{"product", "Z"}}), UsageError);
    CHECK_THROWS_AS(cmd_simulate(exp, {{"seed", "-x"}}), UsageError);
    CHECK_THROWS_AS(cmd_simulate(exp, {{"replications", "0"}}), DataError);
    CHECK_THROWS_AS(run_command(exp, "dance", {}), UsageError);
}

TEST_CASE("estimated stats round-trip through the config bit for bit") {
    const auto dir = temp_dir();
    const std::string product = R"(
purchase_cost = 12
selling_price = 16.10
ordering_cost = 1000
size = 0.57
lead_time = 9
starting_stock = 2750
)";
    const auto stats = synthesize_history(DemandStats{103.5, 37.32, 0.76, 0}, 365, 5);
    DemandHistory h;
    h.ids = {"A"};
    h.columns = {stats};
    std::ofstream(dir / "rt.csv") << history_to_csv(h);

    const auto est = json::parse(cmd_estimate(dir / "rt.csv").json)["products"][0];
    std::ostringstream explicit_cfg;
    explicit_cfg << "replications = 30\n[product A]" << product
                 << "mean_daily = " << est["mean_daily"].dump() << "\n"
                 << "std_daily = " << est["std_daily"].dump() << "\n"
                 << "demand_probability = " << est["demand_probability"].dump() << "\n";
    std::istringstream in_explicit(explicit_cfg.str());
    const auto from_stats = resolve(parse_config(in_explicit, dir));

    std::istringstream in_history("replications = 30\nhistory = rt.csv\n[product A]" + product);
    const auto from_history = resolve(parse_config(in_history, dir));

    for (const char* policy : {"periodic", "continuous", "upto"}) {
        const auto a = json::parse(cmd_simulate(from_stats, {{"policy", policy}}).json);
        const auto b = json::parse(cmd_simulate(from_history, {{"policy", policy}}).json);
        CHECK(a["products"][0]["summary"] == b["products"][0]["summary"]);
        CHECK(a["total_mean_profit"] == b["total_mean_profit"]);
    }
}

TEST_CASE("optimize and surface commands") {
    const auto exp = experiment(kTwoProducts);
    const auto single = json::parse(
        cmd_optimize(exp, {{"product", "A"}, {"bounds", "700:700,3000:3000"}}).json);
    CHECK(single["products"][0]["best"]["r"] == 700);
    CHECK(single["products"][0]["best"]["q"] == 3000);
    CHECK(single["products"][0]["evaluations"] == 1);

    const auto quad = json::parse(cmd_optimize(exp, {{"product", "A"}, {"objective", "quadratic"},
                                                     {"bounds", "0:100,0:100"}, {"step", "1"}})
                                      .json);
    CHECK(quad["products"][0]["best"]["r"] == 30);
    CHECK(quad["products"][0]["best"]["q"] == 70);

    CHECK_THROWS_AS(cmd_optimize(exp, {{"bounds", "9:1,0:5"}}), DataError);
    CHECK_THROWS_AS(cmd_optimize(exp, {{"bounds", "nonsense"}}), UsageError);
    CHECK_THROWS_AS(cmd_optimize(exp, {{"method", "anneal"}}), UsageError);

    const auto surf = cmd_surface(exp, {{"product", "A"}, {"bounds", "600:620,3000:3020"}});
    REQUIRE(surf.artifacts.size() == 1);
    CHECK(surf.artifacts[0].name == "surface_A.csv");
    const auto& csv = surf.artifacts[0].content;
    CHECK(csv.rfind("r,q,mean_profit,std_profit\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

    // Each lattice value equals a simulate run at that point with the same seed.
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    std::getline(rows, line);
    long long r = 0, q = 0;
    double profit = 0;
    char c1, c2;
    std::istringstream(line) >> r >> c1 >> q >> c2 >> profit;
    auto cfg = parse(kTwoProducts);
    cfg.products[0].reorder_point = r;
    cfg.products[0].order_quantity = q;
    const auto pinned_exp = resolve(cfg);
    const auto sim = json::parse(cmd_simulate(pinned_exp, {{"product", "A"}}).json);
    CHECK(sim["products"][0]["summary"]["mean_profit"].get<double>() == profit);
}

TEST_CASE("diagnose command") {
    const auto exp = experiment(kTwoProducts);
    CHECK_THROWS_AS(cmd_diagnose(exp, {{"replications", "50"}}), DataError);
    const auto rep = cmd_diagnose(exp, {{"replications", "1000"}, {"product", "A"}});
    REQUIRE(rep.artifacts.size() == 4);
    auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n') - 1; };
    CHECK(rep.artifacts[0].name == "diag_A_running_mean.csv");
    CHECK(lines(rep.artifacts[0].content) == 1000);
    CHECK(lines(rep.artifacts[1].content) == 20);
    CHECK(lines(rep.artifacts[2].content) == 1000);
    CHECK(lines(rep.artifacts[3].content) == 50);
    CHECK(json::parse(rep.json)["products"][0].contains("converged"));
}

TEST_CASE("fixture command") {
    const auto exp = experiment(kTwoProducts);
    const auto rep = cmd_fixture(exp, {{"days", "365"}});
    REQUIRE(rep.artifacts.size() == 1);
    std::istringstream in(rep.artifacts[0].content);
    const auto h = parse_history_csv(in);
    CHECK(h.ids == std::vector<std::string>{"A", "B"});
    CHECK(h.days() == 365);
    const auto est = estimate_stats(*h.find("B"));
    CHECK(std::abs(est.demand_probability - 0.23) <= 0.01);
    CHECK(cmd_fixture(exp, {}).artifacts[0].content == rep.artifacts[0].content);
}
