#pragma once

#include <cmath>

#include "sepbound/errors.hpp"
#include "sepbound/numerics/special.hpp"

namespace sepbound {

/// Mean of the exponential law followed by (-ln ŷ)^{1/β} when the mean
/// cross-entropy is L: μ = (L / Γ(β+1))^{1/β}.
inline double mu_from_loss(double loss, double beta) {
    detail::require(loss > 0.0 && std::isfinite(loss), "mu_from_loss: loss must be positive");
    detail::require(beta > 0.0 && std::isfinite(beta), "mu_from_loss: beta must be positive");
    return std::exp((std::log(loss) - log_gamma(beta + 1.0)) / beta);
}

/// Exponential tail model of the true-class score: (-ln ŷ)^{1/β} ~ Exp(mean μ),
/// with μ tied to the cross-entropy loss.
struct LossModel {
    double loss;
    double beta;
    double mu;

    static LossModel from_loss(double loss, double beta) { return {loss, beta, mu_from_loss(loss, beta)}; }
};

/// κ under symmetric confusion: every off-class is equally likely, κ = C - 1.
inline double default_kappa(int num_classes) {
    detail::require(num_classes >= 2, "default_kappa: need at least two classes");
    return num_classes - 1.0;
}

/// Class count and the inter-class confusion constant κ (≥ 1).
struct ClassConfig {
    int num_classes;
    double kappa;

    static ClassConfig symmetric(int num_classes) { return {num_classes, default_kappa(num_classes)}; }

    /// κ = scale · (C - 1).
    static ClassConfig scaled(int num_classes, double scale) {
        return {num_classes, scale * default_kappa(num_classes)};
    }

    void validate() const {
        detail::require(num_classes >= 2, "ClassConfig: need at least two classes");
        detail::require(kappa >= 1.0, "ClassConfig: kappa must be at least 1");
    }
};

}  // namespace sepbound
