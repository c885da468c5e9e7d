#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "sepbound/errors.hpp"

namespace sepbound {

/// ln(e^x - 1) for x > 0 without overflow for large x or cancellation near 0.
inline double log_expm1_stable(double x) {
    detail::require(x > 0.0, "log_expm1_stable: x must be positive");
    if (x > 36.0) return x + std::log1p(-std::exp(-x));
    if (x < 1e-8) return std::log(x) + 0.5 * x;
    return std::log(std::expm1(x));
}

/// ln(1 + e^s), exact at both tails; -inf maps to 0.
inline double log1p_exp(double s) {
    if (s > 36.0) return s + std::log1p(std::exp(-s));
    return std::log1p(std::exp(s));
}

/// ln(e^a + e^b); either argument may be -inf.
inline double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace sepbound
