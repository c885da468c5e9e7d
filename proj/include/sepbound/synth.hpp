#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sepbound/empirical/dataset.hpp"
#include "sepbound/errors.hpp"
#include "sepbound/numerics/random.hpp"

namespace sepbound {

enum class SynthVariant {
    syn1,  ///< h(z) = Σ e^{z_i} / dim
    syn2,  ///< h(z) = (2 Σ_{i<k} z_i + Σ_{i≥k} z_i) / k, k = dim/2
};

inline std::string_view to_string(SynthVariant v) { return v == SynthVariant::syn1 ? "syn1" : "syn2"; }

inline SynthVariant parse_synth_variant(std::string_view name) {
    if (name == "syn1") return SynthVariant::syn1;
    if (name == "syn2") return SynthVariant::syn2;
    throw DomainError("unknown synthetic variant '" + std::string(name) + "'");
}

struct SynthSpec {
    SynthVariant variant = SynthVariant::syn1;
    int dim = 10;
    int num_classes = 20;
    std::size_t n_train = 16000;
    std::size_t n_test = 4000;
    std::uint64_t seed = 0;

    /// Standard sizes: 16000/4000 for syn1, 24000/6000 for syn2.
    static SynthSpec standard(SynthVariant variant, std::uint64_t seed = 0) {
        SynthSpec spec;
        spec.variant = variant;
        spec.seed = seed;
        if (variant == SynthVariant::syn2) {
            spec.n_train = 24000;
            spec.n_test = 6000;
        }
        return spec;
    }

    void validate() const {
        detail::require(num_classes >= 2, "SynthSpec: need at least two classes");
        detail::require(dim >= 1, "SynthSpec: dim must be at least 1");
        detail::require(n_train >= static_cast<std::size_t>(num_classes),
                        "SynthSpec: need at least one training point per class");
        detail::require(n_test >= 1, "SynthSpec: n_test must be positive");
    }
};

struct SynthData {
    FeatureDataset train;
    FeatureDataset test;
    /// r_1 < ... < r_{K-1}; class i covers [r_i, r_{i+1}).
    std::vector<double> thresholds;
    std::vector<double> train_scores;
    std::vector<double> test_scores;
    std::vector<std::size_t> train_counts;
    std::vector<std::size_t> test_counts;
};

/// The labeling statistic h(z).
inline double synth_statistic(SynthVariant variant, std::span<const double> z) {
    double h = 0.0;
    if (variant == SynthVariant::syn1) {
        for (double x : z) h += std::exp(x);
        return h / static_cast<double>(z.size());
    }
    const std::size_t k = std::max<std::size_t>(1, z.size() / 2);
    for (std::size_t i = 0; i < z.size(); ++i) h += i < k ? 2.0 * z[i] : z[i];
    return h / static_cast<double>(k);
}

/// Number of thresholds at or below h, i.e. the class of a point scoring h.
inline int synth_class(const std::vector<double>& thresholds, double h) {
    return static_cast<int>(std::upper_bound(thresholds.begin(), thresholds.end(), h) - thresholds.begin());
}

/// Standard-normal inputs labeled by thresholding h at the training quantiles
/// (order statistics at ranks ⌊k·n_train/K⌋). Test labels reuse the training
/// thresholds.
inline SynthData generate(const SynthSpec& spec) {
    spec.validate();
    const auto dim = static_cast<std::size_t>(spec.dim);
    const std::size_t n = spec.n_train + spec.n_test;
    Philox4x32 rng(spec.seed);
    std::normal_distribution<double> normal;
    std::vector<double> z(n * dim);
    for (auto& x : z) x = normal(rng);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = synth_statistic(spec.variant, {z.data() + i * dim, dim});

    SynthData out;
    out.train_scores.assign(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(spec.n_train));
    out.test_scores.assign(h.begin() + static_cast<std::ptrdiff_t>(spec.n_train), h.end());
    std::vector<double> sorted = out.train_scores;
    std::sort(sorted.begin(), sorted.end());
    const auto K = static_cast<std::size_t>(spec.num_classes);
    for (std::size_t k = 1; k < K; ++k) out.thresholds.push_back(sorted[k * spec.n_train / K]);

    const auto fill = [&](FeatureDataset& ds, std::size_t begin, std::size_t count, std::vector<std::size_t>& counts) {
        ds.dim = dim;
        ds.num_classes = spec.num_classes;
        ds.features.assign(z.begin() + static_cast<std::ptrdiff_t>(begin * dim),
                           z.begin() + static_cast<std::ptrdiff_t>((begin + count) * dim));
        counts.assign(K, 0);
        for (std::size_t i = begin; i < begin + count; ++i) {
            const int c = synth_class(out.thresholds, h[i]);
            ds.labels.push_back(c);
            ++counts[static_cast<std::size_t>(c)];
        }
    };
    fill(out.train, 0, spec.n_train, out.train_counts);
    fill(out.test, spec.n_train, spec.n_test, out.test_counts);
    return out;
}

/// Sidecar document: spec, thresholds and per-class counts.
inline nlohmann::json synth_sidecar(const SynthSpec& spec, const SynthData& data) {
    return {
        {"variant", to_string(spec.variant)},
        {"dim", spec.dim},
        {"num_classes", spec.num_classes},
        {"n_train", spec.n_train},
        {"n_test", spec.n_test},
        {"seed", spec.seed},
        {"thresholds", data.thresholds},
        {"train_counts", data.train_counts},
        {"test_counts", data.test_counts},
    };
}

struct SynthFiles {
    std::string train;
    std::string test;
    std::string sidecar;
};

/// Writes <dir>/<prefix>_train.csv, <prefix>_test.csv and <prefix>.json.
inline SynthFiles write_synth(const SynthSpec& spec, const SynthData& data, const std::string& dir,
                              const std::string& prefix) {
    const std::string base = (dir.empty() ? std::string(".") : dir) + "/" + prefix;
    SynthFiles files{base + "_train.csv", base + "_test.csv", base + ".json"};
    const auto open = [](const std::string& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path + "'");
        return out;
    };
    {
        auto out = open(files.train);
        write_dataset(out, data.train);
    }
    {
        auto out = open(files.test);
        write_dataset(out, data.test);
    }
    {
        auto out = open(files.sidecar);
        out << synth_sidecar(spec, data).dump(2) << '\n';
    }
    return files;
}

}  // namespace sepbound
