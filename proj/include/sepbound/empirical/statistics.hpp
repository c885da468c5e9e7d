#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sepbound/bounds/loss_model.hpp"
#include "sepbound/empirical/dataset.hpp"
#include "sepbound/errors.hpp"

namespace sepbound {

namespace detail {

inline const std::vector<double>& require_yhat(const FeatureDataset& ds, const char* op) {
    if (!ds.yhat_true) throw ValidationError(std::string(op) + ": dataset has no yhat or probability columns");
    return *ds.yhat_true;
}

}  // namespace detail

/// L = -(1/m) Σ ln ŷ_true.
inline double mean_cross_entropy(std::span<const double> yhat_true) {
    if (yhat_true.empty()) throw ValidationError("mean_cross_entropy: no samples");
    double sum = 0.0;
    for (double y : yhat_true) {
        if (!(y > 0.0 && y <= 1.0)) throw ValidationError("mean_cross_entropy: yhat must lie in (0, 1]");
        sum -= std::log(y);
    }
    return sum / static_cast<double>(yhat_true.size());
}

inline double mean_cross_entropy(const FeatureDataset& ds) {
    return mean_cross_entropy(detail::require_yhat(ds, "mean_cross_entropy"));
}

/// {1.0, 1.1, ..., 6.0}.
inline std::vector<double> default_beta_grid() {
    std::vector<double> grid;
    for (int k = 10; k <= 60; ++k) grid.push_back(k / 10.0);
    return grid;
}

/// Exponential fit of the transformed scores t = (-ln ŷ)^{1/β}.
struct BetaFit {
    double beta_hat = 0.0;
    /// Sample mean of t at beta_hat.
    double mu_hat = 0.0;
    /// Kolmogorov-Smirnov distance at beta_hat.
    double ks_stat = 0.0;
    std::vector<double> beta_grid;
    std::vector<double> ks_values;
    /// Mean cross-entropy of the scores.
    double loss = 0.0;
    /// (L / Γ(β̂+1))^{1/β̂}, reported next to mu_hat as a consistency check.
    double mu_from_loss = 0.0;
};

/// sup |F_m(t) - (1 - e^{-t/mean})| over the sample.
inline double ks_exponential(std::vector<double> sample, double mean) {
    std::sort(sample.begin(), sample.end());
    const double m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = -std::expm1(-sample[i] / mean);
        d = std::max({d, (static_cast<double>(i) + 1.0) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

/// Picks β from `beta_grid` whose transformed scores are closest, in KS
/// distance, to the moment-matched exponential. Ties go to the smaller β.
inline BetaFit fit_beta(std::span<const double> yhat_true, const std::vector<double>& beta_grid = default_beta_grid()) {
    detail::require(!beta_grid.empty(), "fit_beta: beta grid must be nonempty");
    for (std::size_t i = 0; i < beta_grid.size(); ++i) {
        detail::require(beta_grid[i] > 0.0, "fit_beta: beta grid must be positive");
        detail::require(i == 0 || beta_grid[i] > beta_grid[i - 1], "fit_beta: beta grid must be increasing");
    }
    BetaFit fit;
    fit.loss = mean_cross_entropy(yhat_true);
    if (fit.loss == 0.0) throw ValidationError("fit_beta: every yhat is 1, scores are degenerate");
    fit.beta_grid = beta_grid;
    std::vector<double> neg_log(yhat_true.size());
    for (std::size_t i = 0; i < neg_log.size(); ++i) neg_log[i] = -std::log(yhat_true[i]);
    std::vector<double> t(neg_log.size());
    bool first = true;
    for (double beta : beta_grid) {
        double sum = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] = std::pow(neg_log[i], 1.0 / beta);
            sum += t[i];
        }
        const double mean = sum / static_cast<double>(t.size());
        const double ks = ks_exponential(t, mean);
        fit.ks_values.push_back(ks);
        if (first || ks < fit.ks_stat) {
            fit.beta_hat = beta;
            fit.mu_hat = mean;
            fit.ks_stat = ks;
            first = false;
        }
    }
    fit.mu_from_loss = sepbound::mu_from_loss(fit.loss, fit.beta_hat);
    return fit;
}

inline BetaFit fit_beta(const FeatureDataset& ds, const std::vector<double>& beta_grid = default_beta_grid()) {
    return fit_beta(detail::require_yhat(ds, "fit_beta"), beta_grid);
}

struct HistogramRow {
    double bin_lo;
    double bin_hi;
    std::size_t count;
    double empirical_density;
    /// (1/μ̂) e^{-t/μ̂} at the bin center.
    double fitted_density;
};

/// Equal-width histogram of t = (-ln ŷ)^{1/β} over [0, max t], with the
/// moment-matched exponential density alongside.
inline std::vector<HistogramRow> histogram_export(std::span<const double> yhat_true, double beta, int n_bins) {
    detail::require(n_bins >= 2, "histogram_export: need at least two bins");
    detail::require(beta > 0.0, "histogram_export: beta must be positive");
    if (yhat_true.empty()) throw ValidationError("histogram_export: no samples");
    std::vector<double> t(yhat_true.size());
    double sum = 0.0;
    double top = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(yhat_true[i] > 0.0 && yhat_true[i] <= 1.0))
            throw ValidationError("histogram_export: yhat must lie in (0, 1]");
        t[i] = std::pow(-std::log(yhat_true[i]), 1.0 / beta);
        sum += t[i];
        top = std::max(top, t[i]);
    }
    const double m = static_cast<double>(t.size());
    const double mu = sum / m;
    const double width = top > 0.0 ? top / n_bins : 1.0 / n_bins;
    std::vector<HistogramRow> rows(static_cast<std::size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) {
        auto& row = rows[static_cast<std::size_t>(b)];
        row.bin_lo = b * width;
        row.bin_hi = (b + 1) * width;
        row.count = 0;
    }
    for (double x : t) {
        const auto b = std::min<std::size_t>(static_cast<std::size_t>(x / width), rows.size() - 1);
        ++rows[b].count;
    }
    for (auto& row : rows) {
        row.empirical_density = static_cast<double>(row.count) / (m * width);
        const double center = 0.5 * (row.bin_lo + row.bin_hi);
        row.fitted_density = mu > 0.0 ? std::exp(-center / mu) / mu : 0.0;
    }
    return rows;
}

inline std::vector<HistogramRow> histogram_export(const FeatureDataset& ds, double beta, int n_bins) {
    return histogram_export(detail::require_yhat(ds, "histogram_export"), beta, n_bins);
}

}  // namespace sepbound
