#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "sepbound/bounds/ccdf.hpp"
#include "sepbound/bounds/separation.hpp"
#include "sepbound/numerics/parallel.hpp"

namespace sepbound {

enum class CcdfKind { intra, inter_lower };

inline std::string_view to_string(CcdfKind kind) { return kind == CcdfKind::intra ? "intra" : "inter_lower"; }

struct CcdfCurve {
    CcdfKind kind = CcdfKind::intra;
    std::vector<double> nu_values;
    std::vector<double> probabilities;
    std::vector<double> raw;
};

namespace detail {

inline void require_grid(const std::vector<double>& grid, const char* what) {
    require(!grid.empty(), what);
    for (std::size_t i = 1; i < grid.size(); ++i) require(grid[i] > grid[i - 1], what);
}

}  // namespace detail

inline CcdfCurve ccdf_sweep(CcdfKind kind, const std::vector<double>& nu_grid, const LossModel& model,
                            const ClassConfig& config, const QuadratureConfig& cfg = QuadratureConfig::one_d(),
                            unsigned threads = default_thread_count()) {
    detail::require_grid(nu_grid, "ccdf_sweep: nu grid must be nonempty and increasing");
    CcdfCurve curve;
    curve.kind = kind;
    curve.nu_values = nu_grid;
    curve.probabilities.resize(nu_grid.size());
    curve.raw.resize(nu_grid.size());
    parallel_for(nu_grid.size(), threads, [&](std::size_t i) {
        const auto p = kind == CcdfKind::intra ? intra_ccdf_detailed(nu_grid[i], model, cfg)
                                               : inter_ccdf_lower_detailed(nu_grid[i], model, config, cfg);
        curve.probabilities[i] = p.value;
        curve.raw[i] = p.raw;
    });
    return curve;
}

struct ProjectedRow {
    double gamma;
    double value;
};

inline std::vector<ProjectedRow> ba_sweep(const std::vector<double>& gamma_grid, const LossModel& model,
                                          const ClassConfig& config,
                                          const QuadratureConfig& cfg = QuadratureConfig::two_d(),
                                          unsigned threads = default_thread_count()) {
    detail::require_grid(gamma_grid, "ba_sweep: gamma grid must be nonempty and increasing");
    std::vector<ProjectedRow> rows(gamma_grid.size());
    parallel_for(gamma_grid.size(), threads, [&](std::size_t i) {
        rows[i] = {gamma_grid[i], projected_bound(gamma_grid[i], model, config, cfg)};
    });
    return rows;
}

struct SeparationRow {
    double loss;
    int num_classes;
    double kappa;
    BoundResult bound;
};

/// b_c over an L grid for each class count, with κ = kappa_scale · (C-1).
/// Rows are ordered by C, then by L.
inline std::vector<SeparationRow> bc_sweep(const std::vector<double>& loss_grid, double beta,
                                           const std::vector<int>& class_counts, const BoundOptions& options = {},
                                           double kappa_scale = 1.0) {
    detail::require_grid(loss_grid, "bc_sweep: loss grid must be nonempty and increasing");
    detail::require(!class_counts.empty(), "bc_sweep: class list must be nonempty");
    std::vector<SeparationRow> rows;
    for (int c : class_counts)
        for (double loss : loss_grid) rows.push_back({loss, c, ClassConfig::scaled(c, kappa_scale).kappa, {}});
    // Parallelize across rows; each bound runs its own grid single-threaded.
    BoundOptions inner = options;
    inner.threads = 1;
    parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        auto& row = rows[i];
        row.bound = class_separation_bound(LossModel::from_loss(row.loss, beta), {row.num_classes, row.kappa}, inner);
    });
    return rows;
}

}  // namespace sepbound
