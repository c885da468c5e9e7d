#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "sepbound/bounds/accuracy.hpp"
#include "sepbound/empirical/dataset.hpp"
#include "sepbound/empirical/statistics.hpp"
#include "sepbound/errors.hpp"

namespace sepbound {

/// Confusion constants estimated from predicted distributions.
///
/// kappa[c][c'] estimates κ_{c,c'}, the inverse of the mean conditional
/// probability that a class-c' point is assigned to c given it is not
/// assigned to c'. Diagonal entries are unused and set to 1.
struct KappaEstimate {
    int num_classes = 0;
    std::vector<std::vector<double>> kappa;
    /// 1/κ before clamping; the column c' sums to one over c ≠ c'.
    std::vector<std::vector<double>> inverse_raw;
    /// kappa_star[c] = min over c' ≠ c of kappa[c'][c].
    std::vector<double> kappa_star;
    /// Samples of each class skipped because their own probability was 1.
    std::vector<std::size_t> skipped;
};

namespace detail {

// With `strict` false, a class whose samples are all skipped gets κ = inf
// in its column instead of an error.
inline KappaEstimate estimate_kappa(const FeatureDataset& ds, bool strict) {
    if (!ds.prob_matrix) throw ValidationError("estimate_kappa: dataset has no probability columns");
    const auto C = static_cast<std::size_t>(ds.num_classes);
    KappaEstimate est;
    est.num_classes = ds.num_classes;
    est.inverse_raw.assign(C, std::vector<double>(C, 0.0));
    est.kappa.assign(C, std::vector<double>(C, 1.0));
    est.skipped.assign(C, 0);
    std::vector<std::size_t> used(C, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto own = static_cast<std::size_t>(ds.labels[i]);
        const auto p = ds.probs(i);
        const double rest = 1.0 - p[own];
        if (!(rest > 0.0)) {
            ++est.skipped[own];
            continue;
        }
        ++used[own];
        for (std::size_t c = 0; c < C; ++c)
            if (c != own) est.inverse_raw[c][own] += p[c] / rest;
    }
    for (std::size_t own = 0; own < C; ++own) {
        if (used[own] == 0) {
            if (strict)
                throw ValidationError("estimate_kappa: every sample of class " + std::to_string(own) +
                                      " has probability 1 on its own class");
            for (std::size_t c = 0; c < C; ++c)
                if (c != own) est.kappa[c][own] = std::numeric_limits<double>::infinity();
            continue;
        }
        for (std::size_t c = 0; c < C; ++c) {
            if (c == own) continue;
            est.inverse_raw[c][own] /= static_cast<double>(used[own]);
            const double inv = est.inverse_raw[c][own];
            est.kappa[c][own] = inv > 0.0 ? std::max(1.0, 1.0 / inv) : std::numeric_limits<double>::infinity();
        }
    }
    est.kappa_star.assign(C, std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t other = 0; other < C; ++other)
            if (other != c) est.kappa_star[c] = std::min(est.kappa_star[c], est.kappa[other][c]);
    return est;
}

}  // namespace detail

inline KappaEstimate estimate_kappa(const FeatureDataset& ds) { return detail::estimate_kappa(ds, true); }

struct AccuracyRow {
    int cls = 0;
    std::size_t n_samples = 0;
    /// Fraction whose predicted distribution peaks at the true class.
    double actual = 0.0;
    double kappa_star = 1.0;
    /// Expected accuracy at (L, β̂, κ*).
    double predicted = 0.0;
    /// Expected accuracy at κ* = 1, which holds for any confusion pattern.
    double lower_bound = 0.0;
};

struct AccuracyReport {
    double loss = 0.0;
    double beta = 0.0;
    std::vector<AccuracyRow> rows;
};

inline AccuracyReport accuracy_report(const FeatureDataset& ds, const BetaFit& fit) {
    const KappaEstimate kappa = detail::estimate_kappa(ds, false);
    AccuracyReport report;
    report.loss = mean_cross_entropy(ds);
    report.beta = fit.beta_hat;
    const auto C = static_cast<std::size_t>(ds.num_classes);
    std::vector<std::size_t> total(C, 0);
    std::vector<std::size_t> correct(C, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto p = ds.probs(i);
        const auto top = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
        const auto own = static_cast<std::size_t>(ds.labels[i]);
        ++total[own];
        if (top == own) ++correct[own];
    }
    for (std::size_t c = 0; c < C; ++c) {
        AccuracyRow row;
        row.cls = static_cast<int>(c);
        row.n_samples = total[c];
        row.actual = total[c] ? static_cast<double>(correct[c]) / static_cast<double>(total[c]) : 0.0;
        row.kappa_star = kappa.kappa_star[c];
        // Zero loss is the limit where every score is 1.
        row.predicted = report.loss > 0.0 ? expected_accuracy(report.loss, fit.beta_hat, row.kappa_star) : 1.0;
        row.lower_bound = report.loss > 0.0 ? expected_accuracy(report.loss, fit.beta_hat, 1.0) : 1.0;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace sepbound
