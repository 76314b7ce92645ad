#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace invsim {

struct ConvergenceReport {
    std::vector<double> running_mean;
    std::vector<double> batch_means;
    std::vector<double> standard_error;
    std::vector<double> autocorrelation;  // lags 1..K
    std::size_t batch_size = 0;
    double relative_error = 0.0;          // final SE / |final mean|
    double acf_band = 0.0;                // 1.96 / sqrt(n)
    double fraction_within_band = 0.0;
    bool converged = false;
};

struct ConvergenceCriteria {
    double relative_error = 0.01;
    double min_fraction_within_band = 0.90;
    std::size_t min_length = 100;
};

std::vector<double> running_mean(std::span<const double> x);

/// Means of consecutive disjoint batches; a trailing partial batch is dropped.
std::vector<double> batch_means(std::span<const double> x, std::size_t batch_size);

/// Element i is the sample std of x[0..i] over sqrt(i + 1); element 0 is 0.
std::vector<double> standard_error_series(std::span<const double> x);

/// Biased correlogram r_k = sum (x_t - m)(x_{t+k} - m) / sum (x_t - m)^2.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

/// Batch size n/20, lags up to min(50, n/4).
ConvergenceReport assess_convergence(std::span<const double> x,
                                     const ConvergenceCriteria& criteria = {});

}  // namespace invsim
