#include "invsim/gp.hpp"

#include "invsim/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace invsim {

namespace {

constexpr double kBaseJitter = 1e-6;
constexpr double kMaxJitter = 1e-4;

constexpr std::array kLengthGrid{0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
constexpr std::array kSignalGrid{0.5, 1.0, 2.0};

double sq_exp(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const GpHyperparameters& h) {
    const double r2 = ((a - b).array() / h.length_scales.array()).square().sum();
    return h.signal_variance * std::exp(-0.5 * r2);
}

}  // namespace

double GpSurrogate::kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return sq_exp(a, b, hyper_);
}

GpSurrogate GpSurrogate::fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                             double noise_variance, const GpHyperparameters& hyper) {
    const auto n = points.rows();
    if (n < 2) throw DataError("gp fit needs at least 2 points");
    if (values.size() != n) throw DataError("gp fit: points and values differ in length");
    if (hyper.length_scales.size() != points.cols())
        throw DataError("gp fit: one length scale per input dimension required");

    GpSurrogate gp;
    gp.x_ = points;
    gp.hyper_ = hyper;
    gp.y_mean_ = values.mean();
    const double var = (values.array() - gp.y_mean_).square().sum() / static_cast<double>(n - 1);
    gp.y_scale_ = var > 0 ? std::sqrt(var) : 1.0;
    gp.y_std_ = (values.array() - gp.y_mean_) / gp.y_scale_;
    gp.noise_std_units_ = std::max(0.0, noise_variance) / (gp.y_scale_ * gp.y_scale_);

    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = k(j, i) = sq_exp(points.row(i).transpose(), points.row(j).transpose(), hyper);
        }
    }

    for (double jitter = kBaseJitter; jitter <= kMaxJitter * 1.0001; jitter *= 10) {
        Eigen::MatrixXd kn = k;
        kn.diagonal().array() += gp.noise_std_units_ + jitter;
        gp.chol_.compute(kn);
        if (gp.chol_.info() != Eigen::Success) continue;
        const Eigen::VectorXd diag = gp.chol_.matrixL().toDenseMatrix().diagonal();
        if (!(diag.minCoeff() > 0) || !diag.allFinite()) continue;

        gp.jitter_ = jitter;
        gp.alpha_ = gp.chol_.solve(gp.y_std_);
        gp.lml_ = -0.5 * gp.y_std_.dot(gp.alpha_) - diag.array().log().sum() -
                  0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
        return gp;
    }
    throw DataError("gp kernel matrix singular beyond maximum jitter");
}

GpSurrogate GpSurrogate::fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                             double noise_variance) {
    const auto d = points.cols();
    GpHyperparameters h;
    h.length_scales = Eigen::VectorXd::Constant(d, kLengthGrid[0]);

    std::optional<GpSurrogate> best;
    auto consider = [&](const GpHyperparameters& cand) {
        try {
            auto gp = fit(points, values, noise_variance, cand);
            if (!best || gp.lml_ > best->lml_) best = std::move(gp);
        } catch (const DataError&) {
            // Skip hyperparameters whose kernel cannot be factorized.
        }
    };

    // Odometer over the length-scale grid in every dimension.
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
        for (Eigen::Index j = 0; j < d; ++j) h.length_scales[j] = kLengthGrid[idx[j]];
        for (double sv : kSignalGrid) {
            h.signal_variance = sv;
            consider(h);
        }
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] == kLengthGrid.size()) idx[j++] = 0;
        if (j == idx.size()) break;
    }
    if (!best) throw DataError("gp kernel matrix singular beyond maximum jitter");

    // Multiplicative coordinate ascent from the best grid point.
    double factor = 1.5;
    for (int pass = 0; pass < 24 && factor > 1.02; ++pass) {
        bool improved = false;
        for (Eigen::Index j = 0; j <= d; ++j) {
            for (double f : {factor, 1.0 / factor}) {
                GpHyperparameters cand = best->hyper_;
                if (j < d) {
                    cand.length_scales[j] = std::clamp(cand.length_scales[j] * f, 0.01, 10.0);
                } else {
                    cand.signal_variance = std::clamp(cand.signal_variance * f, 0.05, 20.0);
                }
                const double before = best->lml_;
                consider(cand);
                improved = improved || best->lml_ > before;
            }
        }
        if (!improved) factor = std::sqrt(factor);
    }
    return std::move(*best);
}

GpPrediction GpSurrogate::predict(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd xs(1, x.size());
    xs.row(0) = x.transpose();
    return predict(xs).front();
}

std::vector<GpPrediction> GpSurrogate::predict(const Eigen::MatrixXd& xs) const {
    const auto n = x_.rows();
    const auto m = xs.rows();
    Eigen::MatrixXd ks(n, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index i = 0; i < n; ++i)
            ks(i, c) = kernel(x_.row(i).transpose(), xs.row(c).transpose());

    const Eigen::VectorXd mean = ks.transpose() * alpha_;
    const Eigen::MatrixXd v = chol_.matrixL().solve(ks);
    const Eigen::VectorXd explained = v.colwise().squaredNorm().transpose();

    std::vector<GpPrediction> out(static_cast<std::size_t>(m));
    for (Eigen::Index c = 0; c < m; ++c) {
        const double var_std = std::max(0.0, hyper_.signal_variance - explained[c]);
        out[static_cast<std::size_t>(c)] = {y_mean_ + y_scale_ * mean[c],
                                            var_std * y_scale_ * y_scale_};
    }
    return out;
}

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double expected_improvement(double mean, double stddev, double best, double xi) {
    const double gain = mean - best - xi;
    if (!(stddev > 0)) return std::max(0.0, gain);
    const double u = gain / stddev;
    return std::max(0.0, gain * normal_cdf(u) + stddev * normal_pdf(u));
}

double expected_improvement(const GpSurrogate& gp, const Eigen::VectorXd& x, double best,
                            double xi) {
    const auto p = gp.predict(x);
    const double s = gp.value_scale();
    return expected_improvement((p.mean - gp.value_mean()) / s, std::sqrt(p.variance) / s,
                                (best - gp.value_mean()) / s, xi);
}

}  // namespace invsim
