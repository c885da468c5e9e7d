#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sepbound/errors.hpp"

namespace sepbound {

/// ln Γ(x) for x > 0.
///
/// Lanczos approximation with g = 7 and nine coefficients; the reflection
/// formula covers x < 0.5. Unlike std::lgamma this touches no global state
/// (glibc writes `signgam`), so it is safe to call from worker threads.
inline double log_gamma(double x) {
    detail::require(x > 0.0 && std::isfinite(x), "log_gamma: x must be positive and finite");

    constexpr double g = 7.0;
    constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

    if (x < 0.5) {
        // Γ(x)Γ(1-x) = π / sin(πx), and sin(πx) > 0 on (0, 0.5).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }

    const double z = x - 1.0;
    double series = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) series += c[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

/// Regularized lower incomplete gamma P(s, x) = γ(s, x) / Γ(s).
///
/// Power series below x = s + 1, Lentz continued fraction for Q above.
inline double regularized_gamma_p(double s, double x) {
    detail::require(s > 0.0, "regularized_gamma_p: s must be positive");
    detail::require(x >= 0.0, "regularized_gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;
    const double log_prefactor = s * std::log(x) - x - log_gamma(s);

    if (x < s + 1.0) {
        double term = 1.0 / s;
        double sum = term;
        for (int n = 1; n < max_iter; ++n) {
            term *= x / (s + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        return std::min(1.0, sum * std::exp(log_prefactor));
    }

    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    const double q = std::exp(log_prefactor) * h;
    return std::max(0.0, 1.0 - q);
}

/// P(χ²_{C-1} ≤ (C-1)u): the chi-squared cdf with C-1 degrees of freedom,
/// evaluated on the scale where the mean is 1.
inline double chi2_cdf_scaled(int num_classes, double u) {
    detail::require(num_classes >= 2, "chi2_cdf_scaled: need at least two classes");
    detail::require(u >= 0.0, "chi2_cdf_scaled: u must be nonnegative");
    const double dof = num_classes - 1.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * dof * u);
}

}  // namespace sepbound
