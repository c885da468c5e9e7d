#pragma once

#include <algorithm>
#include <cmath>

#include "sepbound/bounds/kernels.hpp"
#include "sepbound/bounds/loss_model.hpp"
#include "sepbound/numerics/quadrature.hpp"

namespace sepbound {

/// A probability clamped to [0, 1], with the value before clamping.
struct ClampedProbability {
    double value;
    double raw;

    static ClampedProbability from_raw(double raw) { return {std::clamp(raw, 0.0, 1.0), raw}; }
};

/// P(‖A_c Δφ‖² > ν(C-1)) for two points of the same class.
///
/// Exact under the constant-conditional assumption: one minus the Exp(1)
/// mass of the α-interval between h₁(α', -√ν) and h₁(α', √ν), averaged over
/// α'. Independent of C.
inline ClampedProbability intra_ccdf_detailed(double nu, const LossModel& model,
                                              const QuadratureConfig& cfg = QuadratureConfig::one_d()) {
    detail::require(nu >= 0.0, "intra_ccdf: nu must be nonnegative");
    const double root = std::sqrt(nu);
    const double mass = integrate_expweighted(
        [&](double a) {
            const double lo = detail::log_odds(a, model);
            return std::exp(-detail::h_from_log(lo - root, model)) -
                   std::exp(-detail::h_from_log(lo + root, model));
        },
        cfg);
    return ClampedProbability::from_raw(1.0 - mass);
}

inline double intra_ccdf(double nu, const LossModel& model,
                         const QuadratureConfig& cfg = QuadratureConfig::one_d()) {
    return intra_ccdf_detailed(nu, model, cfg).value;
}

/// Lower bound on P(‖A_c Δφ‖² > ν(C-1)) for points of classes c and c'.
///
/// Same construction as intra_ccdf with h₂, whose κ term accounts for the
/// other class's confusion mass.
inline ClampedProbability inter_ccdf_lower_detailed(double nu, const LossModel& model, const ClassConfig& config,
                                                    const QuadratureConfig& cfg = QuadratureConfig::one_d()) {
    detail::require(nu >= 0.0, "inter_ccdf_lower: nu must be nonnegative");
    config.validate();
    const double root = std::sqrt(nu);
    const double mass = integrate_expweighted(
        [&](double a) {
            const double lk = detail::log_confusion(a, model, config.kappa);
            return std::exp(-detail::h_from_log(lk - root, model)) -
                   std::exp(-detail::h_from_log(lk + root, model));
        },
        cfg);
    return ClampedProbability::from_raw(1.0 - mass);
}

inline double inter_ccdf_lower(double nu, const LossModel& model, const ClassConfig& config,
                               const QuadratureConfig& cfg = QuadratureConfig::one_d()) {
    return inter_ccdf_lower_detailed(nu, model, config, cfg).value;
}

}  // namespace sepbound
