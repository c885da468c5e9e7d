#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "sepbound/bounds/kernels.hpp"
#include "sepbound/bounds/loss_model.hpp"
#include "sepbound/errors.hpp"
#include "sepbound/numerics/parallel.hpp"
#include "sepbound/numerics/random.hpp"

namespace sepbound {

/// Event-frequency estimate of a probability.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;

    static McEstimate from_count(std::size_t hits, std::size_t n, std::uint64_t seed) {
        const double nn = static_cast<double>(n);
        const double p = static_cast<double>(hits) / nn;
        // All-or-nothing counts still get a nonzero error: p is pulled half a count inward.
        const double q = std::clamp(p, 0.5 / nn, 1.0 - 0.5 / nn);
        return {p, std::sqrt(q * (1.0 - q) / nn), n, seed};
    }

    /// |value - target| in standard errors. Zero error with a mismatch is infinitely far.
    double sigma_distance(double target) const {
        const double d = std::abs(value - target);
        if (std_error > 0.0) return d / std_error;
        return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

/// Sampling layout: n draws split across Philox streams first_stream,
/// first_stream + 1, ... of one seed.
struct McOptions {
    std::size_t n = 1'000'000;
    std::uint64_t seed = 0;
    unsigned streams = 1;
    std::uint64_t first_stream = 0;
    unsigned threads = default_thread_count();
};

namespace detail {

/// Samples assigned to stream s when n is split as evenly as possible.
inline std::size_t stream_share(std::size_t n, unsigned streams, unsigned s) {
    return n / streams + (s < n % streams ? 1 : 0);
}

/// Counts hits of `event(rng)` over the stream layout; each stream is
/// independent, and the total does not depend on thread scheduling.
template <class Event>
std::size_t count_events(const McOptions& opt, const Event& event) {
    require(opt.n >= 1000, "monte carlo: need at least 1000 samples");
    require(opt.streams >= 1, "monte carlo: need at least one stream");
    std::vector<std::size_t> hits(opt.streams, 0);
    parallel_for(opt.streams, opt.threads, [&](std::size_t s) {
        Philox4x32 rng(opt.seed, opt.first_stream + s);
        const std::size_t share = stream_share(opt.n, opt.streams, static_cast<unsigned>(s));
        std::size_t h = 0;
        for (std::size_t i = 0; i < share; ++i)
            if (event(rng)) ++h;
        hits[s] = h;
    });
    std::size_t total = 0;
    for (auto h : hits) total += h;
    return total;
}

template <class Event>
McEstimate estimate_event(const McOptions& opt, const Event& event) {
    return McEstimate::from_count(count_events(opt, event), opt.n, opt.seed);
}

}  // namespace detail

/// P(ln²((e^{(α₁μ)^β}-1)/(e^{(α₂μ)^β}-1)) > ν), α₁, α₂ ~ Exp(1).
inline McEstimate mc_intra_ccdf(double nu, const LossModel& model, const McOptions& opt = {}) {
    detail::require(nu >= 0.0, "mc_intra_ccdf: nu must be nonnegative");
    return detail::estimate_event(opt, [&](Philox4x32& rng) {
        const double d = detail::log_odds(rng.exponential(), model) - detail::log_odds(rng.exponential(), model);
        return d * d > nu;
    });
}

/// P(ln²((κ-1 + κ/(e^{(α'μ)^β}-1)) / (e^{(αμ)^β}-1)) > ν).
inline McEstimate mc_inter_ccdf(double nu, const LossModel& model, const ClassConfig& config,
                                const McOptions& opt = {}) {
    detail::require(nu >= 0.0, "mc_inter_ccdf: nu must be nonnegative");
    config.validate();
    return detail::estimate_event(opt, [&](Philox4x32& rng) {
        const double lx = detail::log_odds(rng.exponential(), model);
        const double lk = detail::log_confusion(rng.exponential(), model, config.kappa);
        const double d = lk - lx;
        return d * d > nu;
    });
}

/// P(q₂ > γ q₁) with q₁ = (lx(α₁) - lx(α₂))², q₂ = (lk(α₃) - lx(α₁))².
inline McEstimate mc_b_A(double gamma, const LossModel& model, const ClassConfig& config,
                         const McOptions& opt = {}) {
    detail::require(gamma >= 1.0, "mc_b_A: gamma must be at least 1");
    config.validate();
    return detail::estimate_event(opt, [&](Philox4x32& rng) {
        const double x1 = detail::log_odds(rng.exponential(), model);
        const double x2 = detail::log_odds(rng.exponential(), model);
        const double k3 = detail::log_confusion(rng.exponential(), model, config.kappa);
        const double q1 = (x1 - x2) * (x1 - x2);
        const double q2 = (k3 - x1) * (k3 - x1);
        return q2 > gamma * q1;
    });
}

/// P(ŷ > 1/(κ*+1)) for ŷ = e^{-(αμ)^β}, i.e. P((αμ)^β < ln(1+κ*)).
inline McEstimate mc_p_acc(double loss, double beta, double kappa_star, const McOptions& opt = {}) {
    detail::require(kappa_star >= 1.0, "mc_p_acc: kappa_star must be at least 1");
    const LossModel model = LossModel::from_loss(loss, beta);
    const double threshold = std::log1p(kappa_star);
    return detail::estimate_event(opt, [&](Philox4x32& rng) {
        return std::pow(rng.exponential() * model.mu, model.beta) < threshold;
    });
}

/// Upper- and lower-tail frequencies of χ²_dof: P(χ² ≥ (1+ε)dof), P(χ² ≤ (1-ε)dof).
inline std::pair<McEstimate, McEstimate> mc_chi2_tails(int dof, double eps, const McOptions& opt = {}) {
    detail::require(dof >= 1, "mc_chi2_tails: dof must be at least 1");
    detail::require(eps > 0.0 && eps < 1.0, "mc_chi2_tails: eps must lie in (0, 1)");
    detail::require(opt.n >= 1 && opt.streams >= 1, "mc_chi2_tails: need samples and streams");
    std::vector<std::size_t> upper(opt.streams, 0);
    std::vector<std::size_t> lower(opt.streams, 0);
    parallel_for(opt.streams, opt.threads, [&](std::size_t s) {
        Philox4x32 rng(opt.seed, opt.first_stream + s);
        std::normal_distribution<double> normal;
        const std::size_t share = detail::stream_share(opt.n, opt.streams, static_cast<unsigned>(s));
        for (std::size_t i = 0; i < share; ++i) {
            double sum = 0.0;
            for (int k = 0; k < dof; ++k) {
                const double z = normal(rng);
                sum += z * z;
            }
            if (sum >= (1.0 + eps) * dof) ++upper[s];
            if (sum <= (1.0 - eps) * dof) ++lower[s];
        }
    });
    std::size_t up = 0;
    std::size_t lo = 0;
    for (unsigned s = 0; s < opt.streams; ++s) {
        up += upper[s];
        lo += lower[s];
    }
    return {McEstimate::from_count(up, opt.n, opt.seed), McEstimate::from_count(lo, opt.n, opt.seed)};
}

}  // namespace sepbound
