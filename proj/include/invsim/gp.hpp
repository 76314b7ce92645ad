#pragma once

#include <Eigen/Dense>

#include <vector>

namespace invsim {

struct GpHyperparameters {
    Eigen::VectorXd length_scales;  // one per input dimension, unit-cube scale
    double signal_variance = 1.0;   // standardized units
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;  // latent posterior variance, >= 0
};

/// Exact GP regression with a squared-exponential ARD kernel.
///
/// Inputs are expected on the unit cube. Targets are standardized internally
/// and predictions are returned in the original units. Hyperparameters are
/// chosen by maximizing the log marginal likelihood over a fixed log-spaced
/// grid followed by a short multiplicative coordinate search.
class GpSurrogate {
public:
    /// `points` is n x d; `noise_variance` is in the units of `values`.
    /// Throws DataError with fewer than 2 points or when the kernel matrix
    /// stays singular after jitter escalation to 1e-4.
    static GpSurrogate fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                           double noise_variance);

    /// Fit with fixed hyperparameters, skipping the likelihood search.
    static GpSurrogate fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                           double noise_variance, const GpHyperparameters& hyper);

    GpPrediction predict(const Eigen::VectorXd& x) const;

    /// Predictions for the rows of `xs`, batched through one triangular solve.
    std::vector<GpPrediction> predict(const Eigen::MatrixXd& xs) const;

    const GpHyperparameters& hyperparameters() const { return hyper_; }
    double log_marginal_likelihood() const { return lml_; }
    double jitter() const { return jitter_; }
    double value_mean() const { return y_mean_; }
    double value_scale() const { return y_scale_; }

private:
    GpSurrogate() = default;

    double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

    Eigen::MatrixXd x_;
    Eigen::VectorXd y_std_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    double noise_std_units_ = 0.0;  // noise variance after standardization
    GpHyperparameters hyper_;
    Eigen::LLT<Eigen::MatrixXd> chol_;
    Eigen::VectorXd alpha_;
    double jitter_ = 0.0;
    double lml_ = 0.0;
};

double normal_pdf(double u);
double normal_cdf(double u);

/// Expected improvement for maximization:
/// (mu - best - xi) Phi(u) + s phi(u), u = (mu - best - xi) / s, and
/// max(0, mu - best - xi) when s == 0.
double expected_improvement(double mean, double stddev, double best, double xi);

/// EI at `x` with mean, std, incumbent and xi all in standardized units of
/// the surrogate. `best` is given in original units.
double expected_improvement(const GpSurrogate& gp, const Eigen::VectorXd& x, double best,
                            double xi);

}  // namespace invsim
