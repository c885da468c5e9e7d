#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sepbound/empirical/dataset.hpp"
#include "sepbound/errors.hpp"
#include "sepbound/numerics/random.hpp"

namespace sepbound {

/// Sample probabilities that an inter-class distance exceeds an intra-class one.
///
/// p1 uses anchors from c1, p2 anchors from c2. For anchor j, intra point k
/// of the anchor's class and point k' of the other class, the triple counts
/// when ‖x_j - z_k'‖ > ‖x_j - x_k‖ (strictly).
struct PairSeparability {
    int c1 = 0;
    int c2 = 0;
    double p1 = 0.0;
    double p2 = 0.0;
    std::size_t n_anchor = 0;
    std::size_t n_intra = 0;
    std::size_t n_inter = 0;
    std::uint64_t seed = 0;
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Draws `count` distinct samples of class c, seeded per (seed, c) so a class
/// is drawn the same way in every pair it takes part in.
inline std::vector<std::size_t> sample_class(const FeatureDataset& ds, int c, std::size_t count, std::uint64_t seed) {
    auto idx = ds.indices_of(c);
    if (idx.size() < count)
        throw ValidationError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                              " points, need " + std::to_string(count));
    Philox4x32 rng(seed, static_cast<std::uint64_t>(c));
    // Partial Fisher-Yates: the first `count` slots become the sample.
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    return idx;
}

namespace detail {

// Σ_j Σ_k Σ_k' 1(d(anchor_j, inter_k') > d(anchor_j, intra_k)).
inline std::size_t count_separated(const FeatureDataset& ds, std::span<const std::size_t> anchors,
                                   std::span<const std::size_t> intra, std::span<const std::size_t> inter) {
    std::size_t hits = 0;
    std::vector<double> d_intra(intra.size());
    for (std::size_t a : anchors) {
        for (std::size_t k = 0; k < intra.size(); ++k) d_intra[k] = euclidean_distance(ds.feature(a), ds.feature(intra[k]));
        std::sort(d_intra.begin(), d_intra.end());
        for (std::size_t z : inter) {
            const double d = euclidean_distance(ds.feature(a), ds.feature(z));
            hits += static_cast<std::size_t>(std::lower_bound(d_intra.begin(), d_intra.end(), d) - d_intra.begin());
        }
    }
    return hits;
}

}  // namespace detail

/// Each class contributes n_anchor + n_pool sampled points: the first n_anchor
/// are anchors, the rest its intra pool. The inter pool of one class is the
/// first n_pool sampled points of the other.
inline PairSeparability pair_separability(const FeatureDataset& ds, int c1, int c2, std::size_t n_anchor = 100,
                                          std::size_t n_pool = 100, std::uint64_t seed = 0) {
    detail::require(c1 != c2, "pair_separability: classes must differ");
    detail::require(c1 >= 0 && c1 < ds.num_classes && c2 >= 0 && c2 < ds.num_classes,
                    "pair_separability: class outside the dataset");
    detail::require(n_anchor >= 1 && n_pool >= 1, "pair_separability: counts must be positive");
    const auto s1 = sample_class(ds, c1, n_anchor + n_pool, seed);
    const auto s2 = sample_class(ds, c2, n_anchor + n_pool, seed);
    const std::span<const std::size_t> a1(s1.data(), n_anchor);
    const std::span<const std::size_t> a2(s2.data(), n_anchor);
    const std::span<const std::size_t> intra1(s1.data() + n_anchor, n_pool);
    const std::span<const std::size_t> intra2(s2.data() + n_anchor, n_pool);
    const std::span<const std::size_t> inter_for1(s2.data(), n_pool);
    const std::span<const std::size_t> inter_for2(s1.data(), n_pool);
    const double total = static_cast<double>(n_anchor) * static_cast<double>(n_pool) * static_cast<double>(n_pool);

    PairSeparability out;
    out.c1 = c1;
    out.c2 = c2;
    out.p1 = static_cast<double>(detail::count_separated(ds, a1, intra1, inter_for1)) / total;
    out.p2 = static_cast<double>(detail::count_separated(ds, a2, intra2, inter_for2)) / total;
    out.n_anchor = n_anchor;
    out.n_intra = n_pool;
    out.n_inter = n_pool;
    out.seed = seed;
    return out;
}

}  // namespace sepbound
