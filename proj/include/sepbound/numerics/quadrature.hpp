#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "sepbound/errors.hpp"

namespace sepbound {

/// Tolerances for the adaptive rules below.
///
/// The loop stops once the summed local error estimate is at most
/// max(abs_tol, rel_tol * |estimate|). `max_evals` caps the integrand
/// evaluations of a single one-dimensional pass; in the iterated 2-D rule it
/// applies to the outer pass and to each inner pass separately.
///
/// `riemann_step > 0` replaces the adaptive rule by a left-endpoint sum
/// over α ∈ [0, riemann_horizon) with that step. This is a coarse, biased
/// rule kept for comparison with fixed-grid evaluations; it is never used
/// unless asked for.
struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-13;
    std::size_t max_evals = 1'000'000;
    double riemann_step = 0.0;
    double riemann_horizon = 10.0;

    static QuadratureConfig one_d() { return {}; }
    static QuadratureConfig two_d() {
        QuadratureConfig cfg;
        cfg.rel_tol = 1e-6;
        cfg.abs_tol = 1e-10;
        return cfg;
    }

    void validate() const {
        detail::require(rel_tol > 0.0, "QuadratureConfig: rel_tol must be positive");
        detail::require(abs_tol >= 0.0, "QuadratureConfig: abs_tol must be nonnegative");
        detail::require(max_evals >= 100, "QuadratureConfig: max_evals must be at least 100");
        detail::require(riemann_step >= 0.0, "QuadratureConfig: riemann_step must be nonnegative");
        detail::require(riemann_step == 0.0 || riemann_horizon > riemann_step,
                        "QuadratureConfig: riemann_horizon must exceed riemann_step");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
struct GaussKronrod15 {
    static constexpr double xk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    /// Integrates over [a, b] and returns the number of evaluations.
    ///
    /// Endpoints strictly inside (0, 1) are also sampled: a jump hidden in the
    /// gap between an endpoint and the outermost node leaves every node equal,
    /// so |K - G| alone would report no error there.
    template <class F>
    static std::size_t apply(const F& f, double a, double b, double& value, double& error) {
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        const double fc = f(center);
        double kronrod = wk[7] * fc;
        double gauss = wg[3] * fc;
        double lo_nodes[2];
        double hi_nodes[2];
        for (int j = 0; j < 7; ++j) {
            const double dx = half * xk[j];
            const double fl = f(center - dx);
            const double fr = f(center + dx);
            if (j < 2) {
                lo_nodes[j] = fl;
                hi_nodes[j] = fr;
            }
            kronrod += wk[j] * (fl + fr);
            if (j % 2 == 1) gauss += wg[j / 2] * (fl + fr);
        }
        value = kronrod * half;
        error = std::abs((kronrod - gauss) * half);

        std::size_t evals = 15;
        const double gap = half * (1.0 - xk[0]);
        const double spacing = half * (xk[0] - xk[1]);
        const auto jump = [&](double f_end, const double* nodes) {
            const double smooth = 2.0 * std::abs(nodes[0] - nodes[1]) * gap / spacing;
            return std::max(0.0, std::abs(f_end - nodes[0]) - smooth);
        };
        if (a > 0.0) {
            error += jump(f(a), lo_nodes) * gap;
            ++evals;
        }
        if (b < 1.0) {
            error += jump(f(b), hi_nodes) * gap;
            ++evals;
        }
        return evals;
    }
};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over (0, 1).
///
/// Starts from the segments cut at `breaks` (increasing, inside (0, 1)) and
/// bisects the worst segment until the error target is met. Endpoints are
/// never evaluated. Throws ConvergenceError when `max_evals` runs out.
template <class F>
QuadratureResult integrate_unit_interval(const F& f, const QuadratureConfig& cfg,
                                         std::span<const double> breaks = {}) {
    constexpr std::size_t max_evals_per_segment = 17;
    std::priority_queue<detail::Segment> heap;
    QuadratureResult out;

    double total = 0.0;
    double total_error = 0.0;
    double lo = 0.0;
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        const double hi = i < breaks.size() ? breaks[i] : 1.0;
        detail::Segment seg{lo, hi, 0.0, 0.0};
        out.evals += detail::GaussKronrod15::apply(f, seg.a, seg.b, seg.value, seg.error);
        total += seg.value;
        total_error += seg.error;
        heap.push(seg);
        lo = hi;
    }
    double frozen_value = 0.0;
    double frozen_error = 0.0;

    const auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

    while (!heap.empty() && total_error > tolerance()) {
        if (out.evals + 2 * max_evals_per_segment > cfg.max_evals) {
            throw ConvergenceError("quadrature did not converge within " +
                                       std::to_string(cfg.max_evals) + " evaluations",
                                   total, total_error);
        }
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Cannot bisect further in double precision.
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        detail::Segment left{worst.a, mid, 0.0, 0.0};
        detail::Segment right{mid, worst.b, 0.0, 0.0};
        out.evals += detail::GaussKronrod15::apply(f, left.a, left.b, left.value, left.error);
        out.evals += detail::GaussKronrod15::apply(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the incremental updates.
    out.value = frozen_value;
    out.error = frozen_error;
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    return out;
}

namespace detail {

// u = e^{-α} at α = 32, 16, ..., 1, 1/4, 1/16. Without them the outermost
// nodes sit near u = 0.004 and u = 0.996, and features beyond go unseen.
inline constexpr std::array<double, 8> expweighted_breaks = {
    1.2664165549094176e-14,
    1.1253517471925912e-07,
    0.00033546262790251185,
    0.01831563888873418,
    0.1353352832366127,
    0.36787944117144233,
    0.7788007830714049,
    0.9394130628134758,
};

}  // namespace detail

/// ∫₀^∞ f(α) e^{-α} dα, with diagnostics.
///
/// Substituting u = e^{-α} turns the weighted half-line integral into
/// ∫₀¹ f(-ln u) du, which the adaptive rule handles on a partition graded
/// toward u = 0.
template <class F>
QuadratureResult integrate_expweighted_detailed(const F& f, const QuadratureConfig& cfg) {
    cfg.validate();
    if (cfg.riemann_step > 0.0) {
        QuadratureResult out;
        const double step = cfg.riemann_step;
        const auto n = static_cast<std::size_t>(std::ceil(cfg.riemann_horizon / step));
        for (std::size_t i = 0; i < n; ++i) {
            const double alpha = static_cast<double>(i) * step;
            out.value += f(alpha) * std::exp(-alpha) * step;
        }
        out.evals = n;
        return out;
    }
    return integrate_unit_interval([&](double u) { return f(-std::log(u)); }, cfg, detail::expweighted_breaks);
}

template <class F>
double integrate_expweighted(const F& f, const QuadratureConfig& cfg = QuadratureConfig::one_d()) {
    return integrate_expweighted_detailed(f, cfg).value;
}

/// Iterated form of the 2-D rule: `inner_for(α₁)` returns the integrand in
/// α₂ for that outer node, so per-α₁ work is done once per outer node.
///
/// The inner passes run at a tenth of the outer tolerances so their noise
/// does not dominate the outer error estimate.
template <class InnerFactory>
double integrate_expweighted_iterated(const InnerFactory& inner_for, const QuadratureConfig& cfg) {
    cfg.validate();
    QuadratureConfig inner = cfg;
    inner.rel_tol = cfg.rel_tol * 0.1;
    inner.abs_tol = cfg.abs_tol * 0.1;
    const auto outer = [&](double a1) { return integrate_expweighted(inner_for(a1), inner); };
    return integrate_expweighted(outer, cfg);
}

/// ∫₀^∞∫₀^∞ f(α₁, α₂) e^{-α₂} e^{-α₁} dα₂ dα₁ by iterating the 1-D rule.
template <class F>
double integrate_expweighted_2d(const F& f, const QuadratureConfig& cfg = QuadratureConfig::two_d()) {
    return integrate_expweighted_iterated(
        [&](double a1) { return [&f, a1](double a2) { return f(a1, a2); }; }, cfg);
}

}  // namespace sepbound
