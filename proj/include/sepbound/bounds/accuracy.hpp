#pragma once

#include <cmath>

#include "sepbound/errors.hpp"
#include "sepbound/numerics/special.hpp"

namespace sepbound {

/// Expected fraction of a class classified correctly,
/// p_acc = 1 - exp(-(Γ(β+1) ln(1+κ*) / L)^{1/β}).
///
/// κ* = 1 gives the bound that holds without the constant-conditional
/// assumption. κ* = +inf is accepted and yields 1.
inline double expected_accuracy(double loss, double beta, double kappa_star) {
    detail::require(loss > 0.0 && std::isfinite(loss), "expected_accuracy: loss must be positive");
    detail::require(beta > 0.0 && std::isfinite(beta), "expected_accuracy: beta must be positive");
    detail::require(kappa_star >= 1.0, "expected_accuracy: kappa_star must be at least 1");
    if (std::isinf(kappa_star)) return 1.0;
    const double log_s = (log_gamma(beta + 1.0) + std::log(std::log1p(kappa_star)) - std::log(loss)) / beta;
    return -std::expm1(-std::exp(log_s));
}

}  // namespace sepbound
