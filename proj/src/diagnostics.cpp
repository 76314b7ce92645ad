#include "invsim/diagnostics.hpp"

#include "invsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace invsim {

std::vector<double> running_mean(std::span<const double> x) {
    if (x.empty()) throw DataError("running mean of an empty series");
    std::vector<double> out(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i];
        out[i] = sum / static_cast<double>(i + 1);
    }
    return out;
}

std::vector<double> batch_means(std::span<const double> x, std::size_t batch_size) {
    if (batch_size < 1) throw DataError("batch size must be >= 1");
    if (batch_size > x.size()) throw DataError("batch larger than sample");
    std::vector<double> out;
    out.reserve(x.size() / batch_size);
    for (std::size_t start = 0; start + batch_size <= x.size(); start += batch_size) {
        const auto b = x.subspan(start, batch_size);
        out.push_back(std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(batch_size));
    }
    return out;
}

std::vector<double> standard_error_series(std::span<const double> x) {
    if (x.size() < 2) throw DataError("standard error needs at least 2 samples");
    std::vector<double> out(x.size(), 0.0);
    // Welford update keeps the prefix variance stable for large offsets.
    double mean = x[0];
    double m2 = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double delta = x[i] - mean;
        mean += delta / k;
        m2 += delta * (x[i] - mean);
        out[i] = std::sqrt(std::max(0.0, m2 / (k - 1))) / std::sqrt(k);
    }
    return out;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
    if (x.size() < max_lag + 2) throw DataError("series too short for requested lag");
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    if (!(denom > 0)) throw DataError("degenerate series");

    std::vector<double> out(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t) num += (x[t] - m) * (x[t + k] - m);
        out[k - 1] = num / denom;
    }
    return out;
}

ConvergenceReport assess_convergence(std::span<const double> x, const ConvergenceCriteria& criteria) {
    if (x.size() < criteria.min_length)
        throw DataError("convergence assessment needs at least " +
                        std::to_string(criteria.min_length) + " samples");
    const std::size_t n = x.size();

    ConvergenceReport rep;
    rep.running_mean = running_mean(x);
    rep.batch_size = std::max<std::size_t>(1, n / 20);
    rep.batch_means = batch_means(x, rep.batch_size);
    rep.standard_error = standard_error_series(x);
    rep.autocorrelation = autocorrelation(x, std::min<std::size_t>(50, n / 4));

    const double final_mean = rep.running_mean.back();
    const double final_se = rep.standard_error.back();
    rep.relative_error = final_mean != 0 ? final_se / std::abs(final_mean)
                                         : std::numeric_limits<double>::infinity();
    rep.acf_band = 1.96 / std::sqrt(static_cast<double>(n));
    const auto inside = std::count_if(rep.autocorrelation.begin(), rep.autocorrelation.end(),
                                      [&](double r) { return std::abs(r) <= rep.acf_band; });
    rep.fraction_within_band =
        static_cast<double>(inside) / static_cast<double>(rep.autocorrelation.size());
    rep.converged = rep.relative_error < criteria.relative_error &&
                    rep.fraction_within_band >= criteria.min_fraction_within_band;
    return rep;
}

}  // namespace invsim
