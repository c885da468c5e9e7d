#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sepbound/bounds.hpp"
#include "sepbound/oracle.hpp"

using namespace sepbound;

namespace {

McOptions opts(std::size_t n, std::uint64_t seed, unsigned streams = 1) {
    McOptions o;
    o.n = n;
    o.seed = seed;
    o.streams = streams;
    return o;
}

}  // namespace

TEST(McEstimate, BernoulliStandardError) {
    const auto e = McEstimate::from_count(250, 1000, 9);
    EXPECT_DOUBLE_EQ(e.value, 0.25);
    EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(0.25 * 0.75 / 1000));
    EXPECT_EQ(e.n_samples, 1000u);
    EXPECT_EQ(e.seed, 9u);
    EXPECT_NEAR(e.sigma_distance(0.25 + 2 * e.std_error), 2.0, 1e-12);
    const auto all = McEstimate::from_count(1000, 1000, 0);
    EXPECT_EQ(all.value, 1.0);
    EXPECT_GT(all.std_error, 0.0);
    EXPECT_LT(all.sigma_distance(1.0 - 1e-6), 1.0);
}

TEST(Oracle, RejectsTooFewSamples) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    EXPECT_THROW(mc_intra_ccdf(1.0, m, opts(999, 0)), DomainError);
}

TEST(Oracle, ZeroThresholdIsCertain) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    EXPECT_EQ(mc_intra_ccdf(0.0, m, opts(100'000, 1)).value, 1.0);
    EXPECT_EQ(mc_inter_ccdf(0.0, m, {10, 9.0}, opts(100'000, 1)).value, 1.0);
}

TEST(Oracle, IntraCcdfMatchesIntegral) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    const auto e = mc_intra_ccdf(1.0, m, opts(1'000'000, 11));
    EXPECT_LE(e.sigma_distance(intra_ccdf(1.0, m)), 4.0) << e.value;
}

TEST(Oracle, InterCcdfMatchesIntegral) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    const auto e = mc_inter_ccdf(1.0, m, {10, 9.0}, opts(1'000'000, 12));
    EXPECT_LE(e.sigma_distance(inter_ccdf_lower(1.0, m, {10, 9.0})), 4.0) << e.value;
}

TEST(Oracle, InterCcdfMonotoneInKappa) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    const auto high = mc_inter_ccdf(4.0, m, {10, 9.0}, opts(1'000'000, 13));
    const auto low = mc_inter_ccdf(4.0, m, {10, 1.0}, opts(1'000'000, 13));
    EXPECT_GE(high.value, low.value - 4.0 * high.std_error);
}

TEST(Oracle, ProjectedBoundMatchesIntegral) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    const auto e = mc_b_A(1.5, m, {10, 9.0}, opts(1'000'000, 14));
    EXPECT_LE(e.sigma_distance(projected_bound(1.5, m, {10, 9.0})), 4.0) << e.value;
}

TEST(Oracle, ProjectedEventNesting) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    const ClassConfig config{10, 9.0};
    // Shared samples: the event for a larger gamma is a subset.
    const auto g2 = mc_b_A(2.0, m, config, opts(200'000, 15));
    const auto g3 = mc_b_A(3.0, m, config, opts(200'000, 15));
    EXPECT_GE(g2.value, g3.value);
    const auto extreme = mc_b_A(1e6, m, config, opts(200'000, 15));
    const auto base = mc_b_A(1.5, m, config, opts(200'000, 15));
    EXPECT_LE(extreme.value, base.value);
    EXPECT_GT(extreme.value, 0.0);
}

TEST(Oracle, AccuracyMatchesClosedForm) {
    const auto e1 = mc_p_acc(std::log(2.0), 1.0, 1.0, opts(1'000'000, 16));
    EXPECT_LE(e1.sigma_distance(1.0 - std::exp(-1.0)), 4.0);
    const auto e2 = mc_p_acc(0.4516, 4.0, 9.0, opts(1'000'000, 17));
    EXPECT_LE(e2.sigma_distance(expected_accuracy(0.4516, 4.0, 9.0)), 4.0);
    const auto e3 = mc_p_acc(0.4516, 4.0, 1e9, opts(1'000'000, 18));
    EXPECT_LE(e3.sigma_distance(expected_accuracy(0.4516, 4.0, 1e9)), 4.0);
    EXPECT_GT(e3.value, e2.value);
}

TEST(Oracle, ChiSquaredTailsRespectBounds) {
    const int dof = 9;
    const double eps = 0.5;
    const auto [upper, lower] = mc_chi2_tails(dof, eps, opts(1'000'000, 19));
    EXPECT_LE(upper.value, std::exp(-4.5 * (1.5 - std::sqrt(2.0))) + 4.0 * upper.std_error);
    EXPECT_LE(lower.value, std::exp(-9.0 / 16.0) + 4.0 * lower.std_error);
    // Exact masses from the incomplete gamma function.
    EXPECT_LE(upper.sigma_distance(1.0 - chi2_cdf_scaled(dof + 1, 1.0 + eps)), 4.0);
    EXPECT_LE(lower.sigma_distance(chi2_cdf_scaled(dof + 1, 1.0 - eps)), 4.0);
    const auto deep = mc_chi2_tails(dof, 0.99, opts(1'000'000, 20));
    EXPECT_LT(deep.second.value, 1e-3);
    EXPECT_THROW(mc_chi2_tails(0, 0.5, opts(1000, 0)), DomainError);
    EXPECT_THROW(mc_chi2_tails(9, 1.0, opts(1000, 0)), DomainError);
}

TEST(Oracle, DeterministicForFixedSeed) {
    const auto m = LossModel::from_loss(0.45, 1.4);
    const ClassConfig config{20, 19.0};
    const auto a = mc_b_A(1.5, m, config, opts(100'000, 21, 3));
    const auto b = mc_b_A(1.5, m, config, opts(100'000, 21, 3));
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    const auto c = mc_b_A(1.5, m, config, opts(100'000, 22, 3));
    EXPECT_NE(a.value, c.value);
}

TEST(Oracle, StreamDecompositionMatchesPooledEstimate) {
    const auto m = LossModel::from_loss(0.4, 4.0);
    const unsigned k = 4;
    const std::size_t n = 400'000;
    McOptions pooled = opts(n, 23, k);
    pooled.threads = 2;
    const auto whole = mc_intra_ccdf(1.0, m, pooled);
    double mean = 0.0;
    for (unsigned s = 0; s < k; ++s) {
        McOptions one = opts(n / k, 23);
        one.first_stream = s;
        mean += mc_intra_ccdf(1.0, m, one).value / k;
    }
    EXPECT_NEAR(whole.value, mean, 1e-12);
    pooled.threads = 1;
    EXPECT_EQ(mc_intra_ccdf(1.0, m, pooled).value, whole.value);
}

// The 6-tuple matrix: L in {0.03, 0.45, 1.0} at (beta 4, C 10) and (beta 1.4, C 20), kappa = C - 1.
class OracleMatrix : public ::testing::TestWithParam<std::tuple<double, double, int>> {};

TEST_P(OracleMatrix, AgreesWithinFourSigma) {
    const auto [loss, beta, classes] = GetParam();
    const auto m = LossModel::from_loss(loss, beta);
    const auto config = ClassConfig::symmetric(classes);
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(loss * 100) + classes;
    EXPECT_LE(mc_intra_ccdf(1.0, m, opts(1'000'000, seed)).sigma_distance(intra_ccdf(1.0, m)), 4.0);
    EXPECT_LE(mc_inter_ccdf(1.0, m, config, opts(1'000'000, seed)).sigma_distance(inter_ccdf_lower(1.0, m, config)),
              4.0);
    EXPECT_LE(mc_b_A(1.5, m, config, opts(1'000'000, seed)).sigma_distance(projected_bound(1.5, m, config)), 4.0);
    EXPECT_LE(mc_p_acc(loss, beta, config.kappa, opts(1'000'000, seed))
                  .sigma_distance(expected_accuracy(loss, beta, config.kappa)),
              4.0);
}

INSTANTIATE_TEST_SUITE_P(Matrix, OracleMatrix,
                         ::testing::Values(std::tuple{0.03, 4.0, 10}, std::tuple{0.45, 4.0, 10},
                                           std::tuple{1.0, 4.0, 10}, std::tuple{0.03, 1.4, 20},
                                           std::tuple{0.45, 1.4, 20}, std::tuple{1.0, 1.4, 20}));
