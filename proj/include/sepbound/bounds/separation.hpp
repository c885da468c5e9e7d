#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sepbound/bounds/ccdf.hpp"
#include "sepbound/bounds/kernels.hpp"
#include "sepbound/bounds/loss_model.hpp"
#include "sepbound/numerics/parallel.hpp"
#include "sepbound/numerics/quadrature.hpp"
#include "sepbound/numerics/special.hpp"

namespace sepbound {

/// Smallest γ the projected bound evaluates at; γ ∈ [1, this) is lifted here.
inline constexpr double projected_gamma_floor = 1.0 + 1e-9;

/// b_A(γ, L): lower bound on P(‖A_c Δφ^{(c,c')}‖² > γ ‖A_c Δφ^{(c)}‖²).
///
/// The double integral equals the probability of the event
/// q₂(α₁, α₃) > γ q₁(α₁, α₂) for i.i.d. Exp(1) α's: for fixed (α₂, α₃) the
/// shared α₁ must fall between h₃(α₂, α₃, ±√γ), an interval of Exp(1) mass
/// |e^{-h₃(·,·,-√γ)} - e^{-h₃(·,·,√γ)}|.
inline ClampedProbability projected_bound_detailed(double gamma, const LossModel& model, const ClassConfig& config,
                                                   const QuadratureConfig& cfg = QuadratureConfig::two_d()) {
    detail::require(gamma >= 1.0, "projected_bound: gamma must be at least 1");
    config.validate();
    gamma = std::max(gamma, projected_gamma_floor);
    const double r = std::sqrt(gamma);
    const double raw = integrate_expweighted_iterated(
        [&](double a1) {
            const double lx = detail::log_odds(a1, model);
            return [&, lx](double a2) {
                const double lk = detail::log_confusion(a2, model, config.kappa);
                return std::abs(std::exp(-detail::h3_from_logs(lx, lk, -r, model)) -
                                std::exp(-detail::h3_from_logs(lx, lk, r, model)));
            };
        },
        cfg);
    return ClampedProbability::from_raw(raw);
}

inline double projected_bound(double gamma, const LossModel& model, const ClassConfig& config,
                              const QuadratureConfig& cfg = QuadratureConfig::two_d()) {
    return projected_bound_detailed(gamma, model, config, cfg).value;
}

/// How the χ² factor of the separation bound is evaluated.
enum class BoundMethod {
    chi2_cdf,       ///< F(1+ε₁) - F(1-ε₂) with the exact χ²_{C-1} cdf
    concentration,  ///< 1 - e^{-(1+ε₁-√(1+2ε₁))(C-1)/2} - e^{-ε₂²(C-1)/4}
};

inline std::string_view to_string(BoundMethod method) {
    return method == BoundMethod::chi2_cdf ? "chi2_cdf" : "concentration";
}

inline BoundMethod parse_bound_method(std::string_view name) {
    if (name == "chi2_cdf" || name == "chi2") return BoundMethod::chi2_cdf;
    if (name == "concentration") return BoundMethod::concentration;
    throw DomainError("unknown bound method '" + std::string(name) + "'");
}

/// Probability that χ²_{C-1}/(C-1) lies in (1-ε₂, 1+ε₁), or its
/// concentration-inequality lower bound. May be negative for the latter.
inline double chi2_window_factor(int num_classes, double eps1, double eps2, BoundMethod method) {
    const double dof = num_classes - 1.0;
    if (method == BoundMethod::chi2_cdf)
        return chi2_cdf_scaled(num_classes, 1.0 + eps1) - chi2_cdf_scaled(num_classes, 1.0 - eps2);
    return 1.0 - std::exp(-(1.0 + eps1 - std::sqrt(1.0 + 2.0 * eps1)) * dof / 2.0) -
           std::exp(-eps2 * eps2 * dof / 4.0);
}

struct BoundOptions {
    double grid_step = 0.1;
    BoundMethod method = BoundMethod::chi2_cdf;
    /// Re-search a ±grid_step box around the coarse argmax at grid_step / 10.
    bool refine = false;
    QuadratureConfig quadrature = QuadratureConfig::two_d();
    unsigned threads = default_thread_count();
};

/// b(γ, L) with the maximizing (ε₁, ε₂) on the search grid.
struct BoundResult {
    double value = 0.0;
    double raw_value = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    BoundMethod method = BoundMethod::chi2_cdf;
    double gamma = 1.0;
    /// b_A at the argmax, i.e. at γ(1+ε₁)/(1-ε₂).
    double projected = 0.0;
    /// χ² window factor at the argmax.
    double window = 0.0;
};

/// {step, 2·step, ...} ∩ (0, 1).
inline std::vector<double> epsilon_grid(double step) {
    detail::require(step > 0.0 && step < 1.0, "epsilon grid step must lie in (0, 1)");
    std::vector<double> grid;
    for (int k = 1;; ++k) {
        const double e = k * step;
        if (e >= 1.0 - 1e-12) break;
        grid.push_back(e);
    }
    detail::require(grid.size() >= 2, "epsilon grid step must leave at least two interior points");
    return grid;
}

namespace detail {

struct GridCandidate {
    double eps1;
    double eps2;
    double window;
    double projected = 0.0;
};

inline void evaluate_candidates(std::vector<GridCandidate>& cands, double gamma, const LossModel& model,
                                const ClassConfig& config, const BoundOptions& options) {
    // b_A depends on (ε₁, ε₂) only through γ(1+ε₁)/(1-ε₂); share equal arguments.
    std::map<double, double> projected;
    for (const auto& c : cands) projected.emplace(gamma * (1.0 + c.eps1) / (1.0 - c.eps2), 0.0);
    std::vector<double> args;
    for (const auto& [g, _] : projected) args.push_back(g);
    std::vector<double> values(args.size());
    parallel_for(args.size(), options.threads,
                 [&](std::size_t i) { values[i] = projected_bound(args[i], model, config, options.quadrature); });
    for (std::size_t i = 0; i < args.size(); ++i) projected[args[i]] = values[i];
    for (auto& c : cands) c.projected = projected.at(gamma * (1.0 + c.eps1) / (1.0 - c.eps2));
}

inline const GridCandidate& best_candidate(const std::vector<GridCandidate>& cands) {
    const GridCandidate* best = &cands.front();
    for (const auto& c : cands)
        if (c.projected * c.window > best->projected * best->window) best = &c;
    return *best;
}

}  // namespace detail

/// b(γ, L) = max over the ε grid of b_A(γ(1+ε₁)/(1-ε₂), L) · window(ε₁, ε₂),
/// a lower bound on P(‖Δφ^{(c,c')}‖² > γ‖Δφ^{(c)}‖²) for Gaussian A_c.
inline BoundResult separation_bound(double gamma, const LossModel& model, const ClassConfig& config,
                                    const BoundOptions& options = {}) {
    detail::require(gamma >= 1.0, "separation_bound: gamma must be at least 1");
    config.validate();
    const auto grid = epsilon_grid(options.grid_step);

    std::vector<detail::GridCandidate> cands;
    for (double e1 : grid)
        for (double e2 : grid)
            cands.push_back({e1, e2, chi2_window_factor(config.num_classes, e1, e2, options.method)});
    detail::evaluate_candidates(cands, gamma, model, config, options);
    detail::GridCandidate best = detail::best_candidate(cands);

    if (options.refine) {
        const double fine = options.grid_step / 10.0;
        std::vector<detail::GridCandidate> local;
        for (int i = -10; i <= 10; ++i) {
            for (int j = -10; j <= 10; ++j) {
                const double e1 = best.eps1 + i * fine;
                const double e2 = best.eps2 + j * fine;
                if (e1 <= 0.0 || e1 >= 1.0 || e2 <= 0.0 || e2 >= 1.0) continue;
                local.push_back({e1, e2, chi2_window_factor(config.num_classes, e1, e2, options.method)});
            }
        }
        detail::evaluate_candidates(local, gamma, model, config, options);
        const auto& refined = detail::best_candidate(local);
        if (refined.projected * refined.window > best.projected * best.window) best = refined;
    }

    BoundResult result;
    result.raw_value = best.projected * best.window;
    result.value = std::clamp(result.raw_value, 0.0, 1.0);
    result.eps1 = best.eps1;
    result.eps2 = best.eps2;
    result.method = options.method;
    result.gamma = gamma;
    result.projected = best.projected;
    result.window = best.window;
    return result;
}

/// b_c(L) = b(1, L): lower bound on P(inter-class distance > intra-class distance).
inline BoundResult class_separation_bound(const LossModel& model, const ClassConfig& config,
                                          const BoundOptions& options = {}) {
    return separation_bound(1.0, model, config, options);
}

}  // namespace sepbound
