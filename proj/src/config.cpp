#include "invsim/config.hpp"

#include "invsim/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace invsim {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class Parser {
public:
    Parser(std::string source, int line) : source_(std::move(source)), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError(source_ + ":" + std::to_string(line_) + ": " + what);
    }

    double real(const std::string& key, const std::string& v) const {
        double out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
            fail(key + ": '" + v + "' is not a number");
        return out;
    }

    template <class Int>
    Int integer(const std::string& key, const std::string& v) const {
        Int out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
            fail(key + ": '" + v + "' is not a whole number");
        return out;
    }

private:
    std::string source_;
    int line_;
};

// Per-product partial stats; all three fields must be given together.
struct PendingStats {
    std::optional<double> mean, std, probability;
    int line = 0;
};

void apply_product_key(ProductConfig& pc, PendingStats& ps, MixtureTail& mix, bool& mix_seen,
                       const Parser& p, const std::string& key, const std::string& v, int line) {
    using Setter = std::function<void()>;
    const std::map<std::string, Setter> setters{
        {"purchase_cost", [&] { pc.spec.purchase_cost = p.real(key, v); }},
        {"selling_price", [&] { pc.spec.selling_price = p.real(key, v); }},
        {"ordering_cost", [&] { pc.spec.ordering_cost = p.real(key, v); }},
        {"holding_rate", [&] { pc.spec.holding_rate = p.real(key, v); }},
        {"size", [&] { pc.spec.size = p.real(key, v); }},
        {"lead_time", [&] { pc.spec.lead_time = p.integer<int>(key, v); }},
        {"starting_stock", [&] { pc.spec.starting_stock = p.integer<Units>(key, v); }},
        {"safety_factor", [&] { pc.safety_factor = p.real(key, v); }},
        {"review_period", [&] { pc.review_period = p.integer<int>(key, v); }},
        {"order_quantity", [&] { pc.order_quantity = p.integer<Units>(key, v); }},
        {"reorder_point", [&] { pc.reorder_point = p.integer<Units>(key, v); }},
        {"mean_daily", [&] { ps.mean = p.real(key, v); ps.line = line; }},
        {"std_daily", [&] { ps.std = p.real(key, v); ps.line = line; }},
        {"demand_probability", [&] { ps.probability = p.real(key, v); ps.line = line; }},
        {"tail_weight", [&] { mix.tail_weight = p.real(key, v); mix_seen = true; }},
        {"tail_shift", [&] { mix.tail_shift = p.real(key, v); mix_seen = true; }},
        {"order_rule",
         [&] {
             if (v == "fixed") pc.dynamic_quantity = false;
             else if (v == "dynamic") pc.dynamic_quantity = true;
             else p.fail("order_rule must be 'fixed' or 'dynamic'");
         }},
        {"demand_model",
         [&] {
             if (v == "lognormal") pc.shape = GatedLognormal{};
             else if (v == "normal") pc.shape = GatedNormal{};
             else if (v == "mixture") pc.shape = MixtureTail{};
             else p.fail("demand_model must be lognormal, normal or mixture");
         }},
    };
    const auto it = setters.find(key);
    if (it == setters.end()) p.fail("unknown product key '" + key + "'");
    it->second();
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const std::string& source) {
    ExperimentConfig cfg;
    std::string raw;
    int line = 0;

    ProductConfig* current = nullptr;
    std::vector<PendingStats> pending;
    std::vector<MixtureTail> mixes;
    std::vector<bool> mix_seen;

    while (std::getline(in, raw)) {
        ++line;
        const Parser p(source, line);
        std::string text = raw;
        if (const auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
        text = trim(text);
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text.back() != ']') p.fail("unterminated section header");
            const std::string inner = trim(std::string_view(text).substr(1, text.size() - 2));
            if (inner.rfind("product ", 0) != 0) p.fail("expected [product <id>]");
            const std::string id = trim(std::string_view(inner).substr(8));
            if (id.empty() || id.find_first_of(" ,\t") != std::string::npos)
                p.fail("invalid product id '" + id + "'");
            for (const auto& existing : cfg.products)
                if (existing.spec.id == id) p.fail("duplicate product '" + id + "'");
            cfg.products.emplace_back();
            cfg.products.back().spec.id = id;
            current = &cfg.products.back();
            pending.emplace_back();
            mixes.emplace_back();
            mix_seen.push_back(false);
            continue;
        }

        const auto eq = text.find('=');
        if (eq == std::string::npos) p.fail("expected 'key = value'");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) p.fail("missing key");

        if (current == nullptr) {
            if (key == "seed") cfg.seed = p.integer<std::uint64_t>(key, value);
            else if (key == "replications") cfg.replications = p.integer<std::int64_t>(key, value);
            else if (key == "workers") cfg.workers = value == "auto" ? 0u : p.integer<unsigned>(key, value);
            else if (key == "history") cfg.history = base_dir / value;
            else p.fail("unknown global key '" + key + "'");
            continue;
        }
        const std::size_t k = cfg.products.size() - 1;
        bool seen = mix_seen[k];
        apply_product_key(*current, pending[k], mixes[k], seen, p, key, value, line);
        mix_seen[k] = seen;
    }

    if (cfg.replications < 1) throw DataError(source + ": replications must be >= 1");
    for (std::size_t k = 0; k < cfg.products.size(); ++k) {
        auto& pc = cfg.products[k];
        const auto& ps = pending[k];
        const int given = ps.mean.has_value() + ps.std.has_value() + ps.probability.has_value();
        if (given != 0 && given != 3)
            Parser(source, ps.line)
                .fail("mean_daily, std_daily and demand_probability must be given together");
        if (given == 3) {
            pc.stats = DemandStats{*ps.mean, *ps.std, *ps.probability, 0};
            validate(*pc.stats);
        }
        if (std::holds_alternative<MixtureTail>(pc.shape)) pc.shape = mixes[k];
        else if (mix_seen[k])
            throw DataError(source + ": product '" + pc.spec.id +
                            "': tail_weight/tail_shift require demand_model = mixture");
        if (pc.safety_factor < 0)
            throw DataError(source + ": product '" + pc.spec.id + "': safety_factor must be >= 0");
        if (pc.review_period && *pc.review_period < 1)
            throw DataError(source + ": product '" + pc.spec.id + "': review_period must be >= 1");
        validate(pc.spec);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path.string() + "'");
    return parse_config(in, path.parent_path(), path.filename().string());
}

Experiment resolve(ExperimentConfig config) {
    if (config.products.empty()) throw DataError("config defines no products");
    std::optional<DemandHistory> history;
    Experiment exp;
    for (const auto& pc : config.products) {
        ResolvedProduct rp{pc, DemandModel{}};
        rp.model.shape = pc.shape;
        if (pc.stats) {
            rp.model.stats = *pc.stats;
        } else {
            if (!config.history)
                throw DataError("product '" + pc.spec.id +
                                "' has no demand statistics and no history file is configured");
            if (!history) history = read_history_csv(*config.history);
            const auto* column = history->find(pc.spec.id);
            if (!column)
                throw DataError("product '" + pc.spec.id + "' not found in demand history");
            rp.model.stats = estimate_stats(*column);
        }
        validate(rp.model);
        exp.products.push_back(std::move(rp));
    }
    exp.config = std::move(config);
    return exp;
}

}  // namespace invsim
