#pragma once

#include <cmath>
#include <limits>

#include "sepbound/bounds/loss_model.hpp"
#include "sepbound/errors.hpp"
#include "sepbound/numerics/logexp.hpp"

namespace sepbound {

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// ln(1/ŷ - 1) = ln(e^{(wμ)^β} - 1) for the score ŷ = e^{-(wμ)^β}; -inf at w = 0.
inline double log_odds(double w, const LossModel& m) {
    if (w <= 0.0) return -inf;
    const double t = std::exp(m.beta * std::log(w * m.mu));
    if (t == 0.0) return -inf;
    return log_expm1_stable(t);
}

// ln(κ - 1 + κ / (e^{(wμ)^β} - 1)); +inf at w = 0.
inline double log_confusion(double w, const LossModel& m, double kappa) {
    const double lo = log_odds(w, m);
    const double log_km1 = kappa > 1.0 ? std::log(kappa - 1.0) : -inf;
    return log_add_exp(log_km1, std::log(kappa) - lo);
}

// {ln(1 + e^s)}^{1/β} / μ, the Exp(1) quantile that maps back to a score.
inline double h_from_log(double s, const LossModel& m) {
    if (s == inf) return inf;
    const double l = log1p_exp(s);
    if (l <= 0.0) return 0.0;
    return std::exp(std::log(l) / m.beta) / m.mu;
}

// h₃ from precomputed log terms: lx = ln(e^{(pμ)^β} - 1), lk = log_confusion(q).
inline double h3_from_logs(double lx, double lk, double r, const LossModel& m) {
    const double c_x = r / (r + 1.0);
    const double c_k = 1.0 / (r + 1.0);
    const double a = lx == -inf ? (c_x > 0 ? -inf : inf) : c_x * lx;
    const double b = std::isinf(lk) ? (c_k * (lk > 0 ? 1.0 : -1.0) > 0 ? inf : -inf) : c_k * lk;
    if (std::isinf(a) && std::isinf(b) && a != b) {
        // Opposite infinities only occur on a measure-zero boundary of the
        // integration domain; pick the side that leaves the interval empty.
        return 0.0;
    }
    return h_from_log(a + b, m);
}

}  // namespace detail

/// h₁(w, z) = {ln(1 + e^z (e^{(wμ)^β} - 1))}^{1/β} / μ.
inline double h1(double w, double z, const LossModel& model) {
    detail::require(w >= 0.0, "h1: w must be nonnegative");
    return detail::h_from_log(z + detail::log_odds(w, model), model);
}

/// h₂(w, z) = {ln(1 + e^z (κ - 1 + κ / (e^{(wμ)^β} - 1)))}^{1/β} / μ. Singular at w = 0.
inline double h2(double w, double z, const LossModel& model, double kappa) {
    detail::require(w > 0.0, "h2: w must be positive");
    detail::require(kappa >= 1.0, "h2: kappa must be at least 1");
    return detail::h_from_log(z + detail::log_confusion(w, model, kappa), model);
}

/// h₃(p, q, r) = {ln(1 + (e^{(pμ)^β} - 1)^{r/(r+1)} (κ - 1 + κ/(e^{(qμ)^β} - 1))^{1/(r+1)})}^{1/β} / μ.
///
/// Both powers are taken in log space.
inline double h3(double p, double q, double r, const LossModel& model, double kappa) {
    detail::require(p >= 0.0, "h3: p must be nonnegative");
    detail::require(q > 0.0, "h3: q must be positive");
    detail::require(r != 0.0 && r != -1.0, "h3: r must not be 0 or -1");
    detail::require(kappa >= 1.0, "h3: kappa must be at least 1");
    return detail::h3_from_logs(detail::log_odds(p, model), detail::log_confusion(q, model, kappa), r,
                                model);
}

}  // namespace sepbound
