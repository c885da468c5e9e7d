#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sepbound.hpp"

namespace sepbound::cli {

namespace {

constexpr const char* version = "0.1.0";

double parse_number(std::string_view text, const std::string& what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size())
        throw DomainError(what + ": cannot parse '" + std::string(text) + "'");
    return v;
}

std::vector<int> parse_int_grid(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        if (v != std::round(v) || std::abs(v) > 1e9) throw DomainError(what + ": expected integers");
        out.push_back(static_cast<int>(std::lround(v)));
    }
    return out;
}

/// Tolerances and thread count, with environment overrides applied.
struct Settings {
    QuadratureConfig one_d = QuadratureConfig::one_d();
    QuadratureConfig two_d = QuadratureConfig::two_d();
    unsigned threads = default_thread_count();
};

Settings settings_from_env(unsigned threads_flag) {
    Settings s;
    const auto read = [](const char* name) -> std::optional<double> {
        const char* v = std::getenv(name);
        if (!v || !*v) return std::nullopt;
        return parse_number(v, name);
    };
    if (auto v = read("SEPBOUND_REL_TOL")) s.one_d.rel_tol = *v;
    if (auto v = read("SEPBOUND_REL_TOL_2D")) s.two_d.rel_tol = *v;
    if (auto v = read("SEPBOUND_MAX_EVALS")) {
        if (*v < 0 || *v != std::floor(*v)) throw DomainError("SEPBOUND_MAX_EVALS must be a nonnegative integer");
        s.one_d.max_evals = s.two_d.max_evals = static_cast<std::size_t>(*v);
    }
    if (threads_flag > 0) s.threads = threads_flag;
    s.one_d.validate();
    s.two_d.validate();
    return s;
}

struct Common {
    std::string format = "csv";
    std::string output;
    unsigned threads = 0;
};

void add_common(CLI::App* app, Common& common) {
    app->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "tsv", "json"}));
    app->add_option("--output", common.output, "Write the table to this file instead of stdout");
    app->add_option("--threads", common.threads,
                    "Worker threads (0: SEPBOUND_THREADS or hardware count)");
}

std::string provenance(const std::vector<std::string>& args, std::optional<std::uint64_t> seed = std::nullopt) {
    std::string p = std::string("sepbound ") + version + " |";
    for (std::size_t i = 1; i < args.size(); ++i) p += " " + args[i];
    if (seed) p += " | seed=" + std::to_string(*seed);
    return p;
}

void emit(const Table& table, const Common& common, const std::string& prov, std::ostream& out) {
    const TableFormat format = parse_table_format(common.format);
    if (common.output.empty()) {
        table.write(out, format, prov);
        return;
    }
    std::ofstream file(common.output);
    if (!file) throw IoError("cannot write '" + common.output + "'");
    table.write(file, format, prov);
    if (!file) throw IoError("failed writing '" + common.output + "'");
}

Table::Cell num(double v) { return v; }
Table::Cell integer(long long v) { return v; }

// ---------------------------------------------------------------- bound

struct BoundArgs {
    double loss = 0.0;
    double beta = 0.0;
    int classes = 0;
    std::optional<double> kappa;
    double gamma = 1.0;
    double grid_step = 0.1;
    std::string method = "chi2_cdf";
    bool refine = false;
    bool verify = false;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 0;
    double sigma = 4.0;
};

int run_bound(const BoundArgs& a, const Settings& s, Table& table) {
    const LossModel model = LossModel::from_loss(a.loss, a.beta);
    const ClassConfig config{a.classes, a.kappa.value_or(a.classes >= 2 ? default_kappa(a.classes) : 0.0)};
    config.validate();
    detail::require(a.gamma >= 1.0, "gamma must be at least 1");
    BoundOptions options;
    options.grid_step = a.grid_step;
    options.method = parse_bound_method(a.method);
    options.refine = a.refine;
    options.quadrature = s.two_d;
    options.threads = s.threads;
    epsilon_grid(a.grid_step);

    const BoundResult r = separation_bound(a.gamma, model, config, options);
    std::vector<std::string> cols = {"loss", "beta", "classes", "kappa", "gamma", "method", "value",
                                     "eps1", "eps2", "b_A_at_argmax", "chi2_window"};
    std::vector<Table::Cell> row = {num(a.loss),  num(a.beta),  integer(a.classes),
                                    num(config.kappa), num(a.gamma), std::string(to_string(r.method)),
                                    num(r.value), num(r.eps1),  num(r.eps2),
                                    num(r.projected), num(r.window)};
    int code = exit_ok;
    if (a.verify) {
        McOptions mc;
        mc.n = a.samples;
        mc.seed = a.seed;
        mc.threads = s.threads;
        const double g = a.gamma * (1.0 + r.eps1) / (1.0 - r.eps2);
        const McEstimate e = mc_b_A(g, model, config, mc);
        const double dist = e.sigma_distance(r.projected);
        cols.insert(cols.end(), {"mc_b_A", "mc_std_error", "mc_sigma"});
        row.insert(row.end(), {num(e.value), num(e.std_error), num(dist)});
        if (!(dist <= a.sigma)) code = exit_verify;
    }
    table = Table(cols);
    table.add_row(row);
    return code;
}

// ---------------------------------------------------------------- ccdf

struct CcdfArgs {
    std::string losses;
    double beta = 0.0;
    int classes = 0;
    std::optional<double> kappa;
    std::string nu = "0.1:50:0.1";
};

Table run_ccdf(const CcdfArgs& a, const Settings& s) {
    const auto losses = parse_grid(a.losses);
    const auto nus = parse_grid(a.nu);
    const ClassConfig config{a.classes, a.kappa.value_or(a.classes >= 2 ? default_kappa(a.classes) : 0.0)};
    config.validate();
    Table table({"loss", "nu", "intra", "inter_lower"});
    for (double loss : losses) {
        const LossModel model = LossModel::from_loss(loss, a.beta);
        const auto intra = ccdf_sweep(CcdfKind::intra, nus, model, config, s.one_d, s.threads);
        const auto inter = ccdf_sweep(CcdfKind::inter_lower, nus, model, config, s.one_d, s.threads);
        for (std::size_t i = 0; i < nus.size(); ++i)
            table.add_row({num(loss), num(nus[i]), num(intra.probabilities[i]), num(inter.probabilities[i])});
    }
    return table;
}

// ---------------------------------------------------------------- ba-sweep

struct BaArgs {
    std::string losses;
    double beta = 0.0;
    std::string classes;
    double kappa_scale = 1.0;
    std::string gamma = "1.1:10:0.1";
};

Table run_ba(const BaArgs& a, const Settings& s) {
    const auto losses = parse_grid(a.losses);
    const auto class_counts = parse_int_grid(a.classes, "--classes");
    const auto gammas = parse_grid(a.gamma);
    for (double g : gammas) detail::require(g >= 1.0, "gamma values must be at least 1");
    Table table({"loss", "classes", "kappa", "gamma", "b_A"});
    for (int c : class_counts) {
        const ClassConfig config = ClassConfig::scaled(c, a.kappa_scale);
        config.validate();
        for (double loss : losses) {
            const LossModel model = LossModel::from_loss(loss, a.beta);
            for (const auto& row : ba_sweep(gammas, model, config, s.two_d, s.threads))
                table.add_row({num(loss), integer(c), num(config.kappa), num(row.gamma), num(row.value)});
        }
    }
    return table;
}

// ---------------------------------------------------------------- bc-sweep

struct BcArgs {
    std::string losses = "0.05:1:0.05";
    double beta = 0.0;
    std::string classes = "10:60:10";
    double kappa_scale = 1.0;
    double grid_step = 0.1;
    std::string method = "chi2_cdf";
};

Table run_bc(const BcArgs& a, const Settings& s) {
    const auto losses = parse_grid(a.losses);
    const auto class_counts = parse_int_grid(a.classes, "--classes");
    for (int c : class_counts) ClassConfig::scaled(c, a.kappa_scale).validate();
    for (double loss : losses) LossModel::from_loss(loss, a.beta);
    BoundOptions options;
    options.grid_step = a.grid_step;
    options.method = parse_bound_method(a.method);
    options.quadrature = s.two_d;
    options.threads = s.threads;
    epsilon_grid(a.grid_step);
    Table table({"classes", "kappa", "loss", "b_c", "eps1", "eps2"});
    for (const auto& row : bc_sweep(losses, a.beta, class_counts, options, a.kappa_scale))
        table.add_row({integer(row.num_classes), num(row.kappa), num(row.loss), num(row.bound.value),
                       num(row.bound.eps1), num(row.bound.eps2)});
    return table;
}

// ---------------------------------------------------------------- empirical

struct InputArgs {
    std::string input;
    std::optional<int> classes;

    FeatureDataset load() const {
        LoadOptions opt;
        opt.num_classes = classes;
        return load_dataset(input, opt);
    }
};

void add_input(CLI::App* app, InputArgs& in) {
    app->add_option("--input", in.input, "Dataset file (class, yhat, p0.., f0.. columns)")->required();
    app->add_option("--classes", in.classes, "Class count, overriding 1 + the largest label");
}

struct FitArgs {
    InputArgs in;
    std::string beta_grid = "1:6:0.1";
};

Table run_fit(const FitArgs& a) {
    const auto grid = parse_grid(a.beta_grid);
    const FeatureDataset ds = a.in.load();
    const BetaFit fit = fit_beta(ds, grid);
    Table table({"beta_hat", "mu_hat", "ks_stat", "loss", "mu_from_loss", "n_samples"});
    table.add_row({num(fit.beta_hat), num(fit.mu_hat), num(fit.ks_stat), num(fit.loss), num(fit.mu_from_loss),
                   integer(static_cast<long long>(ds.size()))});
    return table;
}

struct SepArgs {
    InputArgs in;
    std::vector<std::string> pairs;
    std::size_t anchors = 100;
    std::size_t pool = 100;
    std::uint64_t seed = 0;
};

Table run_separability(const SepArgs& a) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : a.pairs) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) throw DomainError("--pair expects c1:c2, got '" + p + "'");
        const double c1 = parse_number(std::string_view(p).substr(0, colon), "--pair");
        const double c2 = parse_number(std::string_view(p).substr(colon + 1), "--pair");
        if (c1 != std::floor(c1) || c2 != std::floor(c2) || c1 < 0 || c2 < 0 || c1 == c2)
            throw DomainError("--pair expects two distinct class labels, got '" + p + "'");
        pairs.emplace_back(static_cast<int>(c1), static_cast<int>(c2));
    }
    detail::require(a.anchors >= 1 && a.pool >= 1, "--anchors and --pool must be positive");
    const FeatureDataset ds = a.in.load();
    if (pairs.empty())
        for (int c1 = 0; c1 < ds.num_classes; ++c1)
            for (int c2 = c1 + 1; c2 < ds.num_classes; ++c2) pairs.emplace_back(c1, c2);
    for (const auto& [c1, c2] : pairs)
        if (c1 >= ds.num_classes || c2 >= ds.num_classes)
            throw DomainError("--pair " + std::to_string(c1) + ":" + std::to_string(c2) + " names a class outside [0, " +
                              std::to_string(ds.num_classes) + ")");
    Table table({"c1", "c2", "p1", "p2"});
    for (const auto& [c1, c2] : pairs) {
        const auto r = pair_separability(ds, c1, c2, a.anchors, a.pool, a.seed);
        table.add_row({integer(c1), integer(c2), num(r.p1), num(r.p2)});
    }
    return table;
}

struct AccArgs {
    InputArgs in;
    std::optional<double> beta;
    std::string beta_grid = "1:6:0.1";
};

Table run_accuracy(const AccArgs& a) {
    const auto grid = parse_grid(a.beta_grid);
    if (a.beta) detail::require(*a.beta > 0.0, "--beta must be positive");
    const FeatureDataset ds = a.in.load();
    BetaFit fit;
    if (a.beta)
        fit.beta_hat = *a.beta;
    else
        fit = fit_beta(ds, grid);
    const AccuracyReport report = accuracy_report(ds, fit);
    Table table({"class", "n_samples", "actual", "kappa_star", "predicted", "lower_bound", "loss", "beta"});
    for (const auto& row : report.rows)
        table.add_row({integer(row.cls), integer(static_cast<long long>(row.n_samples)), num(row.actual),
                       num(row.kappa_star), num(row.predicted), num(row.lower_bound), num(report.loss),
                       num(report.beta)});
    return table;
}

struct HistArgs {
    InputArgs in;
    std::optional<double> beta;
    std::string beta_grid = "1:6:0.1";
    int bins = 50;
};

Table run_hist(const HistArgs& a) {
    const auto grid = parse_grid(a.beta_grid);
    detail::require(a.bins >= 2, "--bins must be at least 2");
    if (a.beta) detail::require(*a.beta > 0.0, "--beta must be positive");
    const FeatureDataset ds = a.in.load();
    const double beta = a.beta ? *a.beta : fit_beta(ds, grid).beta_hat;
    Table table({"bin_lo", "bin_hi", "count", "empirical_density", "fitted_density", "beta"});
    for (const auto& row : histogram_export(ds, beta, a.bins))
        table.add_row({num(row.bin_lo), num(row.bin_hi), integer(static_cast<long long>(row.count)),
                       num(row.empirical_density), num(row.fitted_density), num(beta)});
    return table;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string variant;
    int dim = 10;
    int classes = 20;
    std::optional<std::size_t> train;
    std::optional<std::size_t> test;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string prefix;
};

Table run_synth(const SynthArgs& a) {
    SynthSpec spec = SynthSpec::standard(parse_synth_variant(a.variant), a.seed);
    spec.dim = a.dim;
    spec.num_classes = a.classes;
    if (a.train) spec.n_train = *a.train;
    if (a.test) spec.n_test = *a.test;
    spec.validate();
    const SynthData data = generate(spec);
    const SynthFiles files =
        write_synth(spec, data, a.out_dir, a.prefix.empty() ? std::string(to_string(spec.variant)) : a.prefix);
    Table table({"split", "class", "count", "file"});
    for (std::size_t c = 0; c < data.train_counts.size(); ++c)
        table.add_row({std::string("train"), integer(static_cast<long long>(c)),
                       integer(static_cast<long long>(data.train_counts[c])), files.train});
    for (std::size_t c = 0; c < data.test_counts.size(); ++c)
        table.add_row({std::string("test"), integer(static_cast<long long>(c)),
                       integer(static_cast<long long>(data.test_counts[c])), files.test});
    return table;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    bool quick = false;
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    double sigma = 4.0;
};

struct VerifyCase {
    double loss;
    double beta;
    int classes;
};

/// The oracle matrix: L ∈ {0.03, 0.45, 1.0} for (β = 4, C = 10) and (β = 1.4, C = 20), κ = C - 1.
std::vector<VerifyCase> verify_matrix() {
    std::vector<VerifyCase> cases;
    for (const auto& [beta, classes] : {std::pair{4.0, 10}, std::pair{1.4, 20}})
        for (double loss : {0.03, 0.45, 1.0}) cases.push_back({loss, beta, classes});
    return cases;
}

int run_verify(const VerifyArgs& a, const Settings& s, Table& table) {
    detail::require(a.sigma >= 0.0, "--sigma must be nonnegative");
    McOptions mc;
    mc.n = a.samples.value_or(a.quick ? 100'000 : 1'000'000);
    mc.seed = a.seed;
    mc.threads = s.threads;
    mc.streams = std::max(1u, s.threads);
    table = Table({"check", "loss", "beta", "classes", "kappa", "param", "analytic", "monte_carlo", "std_error",
                   "sigma", "pass"});
    bool all_pass = true;
    const auto record = [&](const std::string& check, const VerifyCase& vc, double kappa, double param,
                            double analytic, const McEstimate& e, bool one_sided) {
        const double dist = one_sided ? std::max(0.0, e.value - analytic) / std::max(e.std_error, 1e-300)
                                      : e.sigma_distance(analytic);
        const bool pass = one_sided ? e.value <= analytic + a.sigma * e.std_error : dist <= a.sigma;
        all_pass = all_pass && pass;
        table.add_row({check, num(vc.loss), num(vc.beta), integer(vc.classes), num(kappa), num(param), num(analytic),
                       num(e.value), num(e.std_error), num(dist), std::string(pass ? "yes" : "no")});
    };
    for (const auto& vc : verify_matrix()) {
        const LossModel model = LossModel::from_loss(vc.loss, vc.beta);
        const ClassConfig config = ClassConfig::symmetric(vc.classes);
        const double nu = 1.0;
        const double gamma = 1.5;
        record("intra_ccdf", vc, config.kappa, nu, intra_ccdf(nu, model, s.one_d), mc_intra_ccdf(nu, model, mc),
               false);
        record("inter_ccdf_lower", vc, config.kappa, nu, inter_ccdf_lower(nu, model, config, s.one_d),
               mc_inter_ccdf(nu, model, config, mc), false);
        record("b_A", vc, config.kappa, gamma, projected_bound(gamma, model, config, s.two_d),
               mc_b_A(gamma, model, config, mc), false);
        record("expected_accuracy", vc, config.kappa, config.kappa,
               expected_accuracy(vc.loss, vc.beta, config.kappa), mc_p_acc(vc.loss, vc.beta, config.kappa, mc),
               false);
    }
    for (int classes : {10, 20}) {
        const int dof = classes - 1;
        const double eps = 0.5;
        const VerifyCase vc{0.0, 0.0, classes};
        const auto [upper, lower] = mc_chi2_tails(dof, eps, mc);
        record("chi2_upper_mass", vc, 0.0, eps, 1.0 - chi2_cdf_scaled(classes, 1.0 + eps), upper, false);
        record("chi2_lower_mass", vc, 0.0, eps, chi2_cdf_scaled(classes, 1.0 - eps), lower, false);
        record("chi2_upper_tail_bound", vc, 0.0, eps,
               std::exp(-0.5 * dof * (1.0 + eps - std::sqrt(1.0 + 2.0 * eps))), upper, true);
        record("chi2_lower_tail_bound", vc, 0.0, eps, std::exp(-0.25 * dof * eps * eps), lower, true);
    }
    return all_pass ? exit_ok : exit_verify;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const std::string_view t(text);
    if (t.find_first_not_of(' ') == std::string_view::npos) throw DomainError("grid is empty");
    std::vector<double> out;
    if (t.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = t.find(':', start);
            parts.push_back(parse_number(t.substr(start, pos == std::string_view::npos ? pos : pos - start), "grid"));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        if (parts.size() != 3) throw DomainError("grid '" + text + "' must be start:stop:step");
        const double lo = parts[0];
        const double hi = parts[1];
        const double step = parts[2];
        if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
            throw DomainError("grid '" + text + "' needs start <= stop and a positive step");
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
        if (n > 10'000'000) throw DomainError("grid '" + text + "' has too many points");
        // Multiply rather than accumulate, so 0.05:1:0.05 ends exactly at 1.
        for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto pos = t.find(',', start);
        out.push_back(parse_number(t.substr(start, pos == std::string_view::npos ? pos : pos - start), "grid"));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw DomainError("grid '" + text + "' must be strictly increasing");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Class-separability bounds for cross-entropy classifiers.\n"
                 "Environment: SEPBOUND_REL_TOL, SEPBOUND_REL_TOL_2D, SEPBOUND_MAX_EVALS, SEPBOUND_THREADS.",
                 "sepbound"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    Common common;

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand(
        "bound", "b(gamma, L): lower bound on P(inter-class distance^2 > gamma * intra-class distance^2), "
                 "maximized over the (eps1, eps2) grid; gamma = 1 gives b_c(L)");
    bound_cmd->add_option("--loss", bound.loss, "Mean cross-entropy loss L")->required();
    bound_cmd->add_option("--beta", bound.beta, "Tail exponent beta")->required();
    bound_cmd->add_option("--classes", bound.classes, "Number of classes C")->required();
    bound_cmd->add_option("--kappa", bound.kappa, "Confusion constant kappa (default C-1)");
    bound_cmd->add_option("--gamma", bound.gamma, "Distance ratio gamma >= 1");
    bound_cmd->add_option("--grid-step", bound.grid_step, "Step of the eps1, eps2 search grid");
    bound_cmd->add_option("--method", bound.method, "chi2_cdf or concentration")
        ->check(CLI::IsMember({"chi2_cdf", "concentration"}));
    bound_cmd->add_flag("--refine", bound.refine, "Refine around the grid argmax at a tenth of the step");
    bound_cmd->add_flag("--verify", bound.verify, "Cross-check b_A at the argmax by Monte Carlo");
    bound_cmd->add_option("--samples", bound.samples, "Monte Carlo samples for --verify");
    bound_cmd->add_option("--seed", bound.seed, "Monte Carlo seed for --verify");
    bound_cmd->add_option("--sigma", bound.sigma, "Allowed standard errors for --verify");
    add_common(bound_cmd, common);

    CcdfArgs ccdf;
    auto* ccdf_cmd = app.add_subcommand(
        "ccdf", "Intra-class ccdf and inter-class ccdf lower bound of the projected squared distance over nu");
    ccdf_cmd->add_option("--loss", ccdf.losses, "Loss values, list or start:stop:step")->required();
    ccdf_cmd->add_option("--beta", ccdf.beta, "Tail exponent beta")->required();
    ccdf_cmd->add_option("--classes", ccdf.classes, "Number of classes C")->required();
    ccdf_cmd->add_option("--kappa", ccdf.kappa, "Confusion constant kappa (default C-1)");
    ccdf_cmd->add_option("--nu", ccdf.nu, "nu grid, list or start:stop:step");
    add_common(ccdf_cmd, common);

    BaArgs ba;
    auto* ba_cmd = app.add_subcommand("ba-sweep", "b_A(gamma, L) over a gamma grid, per loss and class count");
    ba_cmd->add_option("--loss", ba.losses, "Loss values, list or start:stop:step")->required();
    ba_cmd->add_option("--beta", ba.beta, "Tail exponent beta")->required();
    ba_cmd->add_option("--classes", ba.classes, "Class counts, list or start:stop:step")->required();
    ba_cmd->add_option("--kappa-scale", ba.kappa_scale, "kappa = scale * (C-1)");
    ba_cmd->add_option("--gamma", ba.gamma, "gamma grid, list or start:stop:step");
    add_common(ba_cmd, common);

    BcArgs bc;
    auto* bc_cmd = app.add_subcommand("bc-sweep", "b_c(L) over a loss grid, per class count");
    bc_cmd->add_option("--loss", bc.losses, "Loss grid, list or start:stop:step");
    bc_cmd->add_option("--beta", bc.beta, "Tail exponent beta")->required();
    bc_cmd->add_option("--classes", bc.classes, "Class counts, list or start:stop:step");
    bc_cmd->add_option("--kappa-scale", bc.kappa_scale, "kappa = scale * (C-1)");
    bc_cmd->add_option("--grid-step", bc.grid_step, "Step of the eps1, eps2 search grid");
    bc_cmd->add_option("--method", bc.method, "chi2_cdf or concentration")
        ->check(CLI::IsMember({"chi2_cdf", "concentration"}));
    add_common(bc_cmd, common);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand(
        "fit-beta", "Fit beta so that (-ln yhat)^(1/beta) is closest, in KS distance, to an exponential law");
    add_input(fit_cmd, fit.in);
    fit_cmd->add_option("--beta-grid", fit.beta_grid, "Candidate beta values, list or start:stop:step");
    add_common(fit_cmd, common);

    SepArgs sep;
    auto* sep_cmd = app.add_subcommand(
        "separability", "Sample probabilities p1, p2 that inter-class distances exceed intra-class distances");
    add_input(sep_cmd, sep.in);
    sep_cmd->add_option("--pair", sep.pairs, "Class pair c1:c2, repeatable (default: every pair)");
    sep_cmd->add_option("--anchors", sep.anchors, "Anchor points per class");
    sep_cmd->add_option("--pool", sep.pool, "Comparison points per class");
    sep_cmd->add_option("--seed", sep.seed, "Sampling seed");
    add_common(sep_cmd, common);

    AccArgs acc;
    auto* acc_cmd = app.add_subcommand(
        "accuracy", "Per-class actual accuracy against the expected accuracy at (L, beta, kappa*) and at kappa* = 1");
    add_input(acc_cmd, acc.in);
    acc_cmd->add_option("--beta", acc.beta, "Tail exponent (default: fitted)");
    acc_cmd->add_option("--beta-grid", acc.beta_grid, "Candidate beta values when fitting");
    add_common(acc_cmd, common);

    HistArgs hist;
    auto* hist_cmd = app.add_subcommand(
        "hist", "Histogram of (-ln yhat)^(1/beta) with the moment-matched exponential density");
    add_input(hist_cmd, hist.in);
    hist_cmd->add_option("--beta", hist.beta, "Tail exponent (default: fitted)");
    hist_cmd->add_option("--beta-grid", hist.beta_grid, "Candidate beta values when fitting");
    hist_cmd->add_option("--bins", hist.bins, "Number of equal-width bins");
    add_common(hist_cmd, common);

    SynthArgs syn;
    auto* syn_cmd = app.add_subcommand(
        "synth", "Write the SYN-1 / SYN-2 thresholded-Gaussian datasets (train, test, JSON sidecar)");
    syn_cmd->add_option("--variant", syn.variant, "syn1 or syn2")
        ->required()
        ->check(CLI::IsMember({"syn1", "syn2"}));
    syn_cmd->add_option("--dim", syn.dim, "Input dimension");
    syn_cmd->add_option("--classes", syn.classes, "Number of classes");
    syn_cmd->add_option("--train", syn.train, "Training points (default 16000 syn1, 24000 syn2)");
    syn_cmd->add_option("--test", syn.test, "Test points (default 4000 syn1, 6000 syn2)");
    syn_cmd->add_option("--seed", syn.seed, "Generator seed");
    syn_cmd->add_option("--out-dir", syn.out_dir, "Directory for the output files");
    syn_cmd->add_option("--prefix", syn.prefix, "File name prefix (default: the variant)");
    add_common(syn_cmd, common);

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand(
        "verify", "Compare every analytic probability with its Monte Carlo oracle and report |delta|/sigma");
    ver_cmd->add_flag("--quick", ver.quick, "Use 1e5 samples instead of 1e6");
    ver_cmd->add_option("--samples", ver.samples, "Samples per check (overrides --quick)");
    ver_cmd->add_option("--seed", ver.seed, "Monte Carlo seed");
    ver_cmd->add_option("--sigma", ver.sigma, "Allowed standard errors per check");
    add_common(ver_cmd, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_flags;
    }

    try {
        const Settings settings = settings_from_env(common.threads);
        Table table({});
        int code = exit_ok;
        std::optional<std::uint64_t> seed;
        if (bound_cmd->parsed()) {
            code = run_bound(bound, settings, table);
            if (bound.verify) seed = bound.seed;
        } else if (ccdf_cmd->parsed()) {
            table = run_ccdf(ccdf, settings);
        } else if (ba_cmd->parsed()) {
            table = run_ba(ba, settings);
        } else if (bc_cmd->parsed()) {
            table = run_bc(bc, settings);
        } else if (fit_cmd->parsed()) {
            table = run_fit(fit);
        } else if (sep_cmd->parsed()) {
            table = run_separability(sep);
            seed = sep.seed;
        } else if (acc_cmd->parsed()) {
            table = run_accuracy(acc);
        } else if (hist_cmd->parsed()) {
            table = run_hist(hist);
        } else if (syn_cmd->parsed()) {
            table = run_synth(syn);
            seed = syn.seed;
        } else if (ver_cmd->parsed()) {
            code = run_verify(ver, settings, table);
            seed = ver.seed;
        }
        emit(table, common, provenance(args, seed), out);
        if (code == exit_verify) err << "verification failed: a check fell outside its band\n";
        return code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_flags;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (estimate " << e.estimate() << ", error bound " << e.error_bound()
            << ")\n";
        return exit_convergence;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

}  // namespace sepbound::cli
