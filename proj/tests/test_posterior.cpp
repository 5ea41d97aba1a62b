#include "decbandit/posterior.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace decbandit;

TEST(TemperedUpdate, BetaExamples)
{
    EXPECT_EQ(tempered_update(BetaPosterior{1, 1}, 1.0, 4.0), (BetaPosterior{5, 1}));
    EXPECT_EQ(tempered_update(BetaPosterior{2, 3}, 0.0, 1.0), (BetaPosterior{2, 4}));
    EXPECT_EQ(tempered_update(BetaPosterior{2, 3}, 1.0, 0.0), (BetaPosterior{2, 3}));
}

TEST(TemperedUpdate, BetaRejectsNonBinaryReward)
{
    EXPECT_THROW(tempered_update(BetaPosterior{}, 0.5, 1.0), std::invalid_argument);
    EXPECT_THROW(tempered_update(BetaPosterior{}, 1.0, -1.0), std::invalid_argument);
}

TEST(TemperedUpdate, GaussianExamples)
{
    const auto a = tempered_update(GaussianPosterior{0, 1}, 1.0, 2.0, 1.0);
    EXPECT_NEAR(a.mean, 2.0 / 3.0, 1e-15);
    EXPECT_EQ(a.precision, 3.0);
    const auto b = tempered_update(GaussianPosterior{5, 4}, 5.0, 1.0, 1.0);
    EXPECT_EQ(b.mean, 5.0);
    EXPECT_EQ(b.precision, 5.0);
    const auto c = tempered_update(GaussianPosterior{1, 2}, 3.0, 0.0, 1.0);
    EXPECT_EQ(c, (GaussianPosterior{1, 2}));
}

TEST(TemperedUpdate, GaussianNoiseScalesGain)
{
    // sd 2 with eta 4 carries the same information as sd 1 with eta 1.
    const auto a = tempered_update(GaussianPosterior{0, 1}, 3.0, 4.0, 2.0);
    const auto b = tempered_update(GaussianPosterior{0, 1}, 3.0, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(a.mean, b.mean);
    EXPECT_DOUBLE_EQ(a.precision, b.precision);
}

TEST(Merge, BetaExamples)
{
    const BetaPosterior two[] = {{3, 1}, {5, 1}};
    const double half[] = {0.5, 0.5};
    EXPECT_EQ(merge(two, half).alpha, 4.0);

    const BetaPosterior one[] = {{2.5, 7}};
    const double unit[] = {1.0};
    EXPECT_EQ(merge(one, unit), one[0]);

    const BetaPosterior three[] = {{1, 1}, {1, 2}, {1, 6}};
    const double third[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    EXPECT_NEAR(merge(three, third).beta, 3.0, 1e-15);
}

TEST(Merge, GaussianExamples)
{
    const GaussianPosterior two[] = {{2.0 / 3.0, 3}, {0, 1}};
    const double half[] = {0.5, 0.5};
    const auto m = merge(two, half);
    EXPECT_NEAR(m.mean, 0.5, 1e-15);
    EXPECT_EQ(m.precision, 2.0);

    const GaussianPosterior same[] = {{1.5, 2}, {1.5, 2}, {1.5, 2}};
    const double w[] = {0.2, 0.3, 0.5};
    const auto s = merge(same, w);
    EXPECT_NEAR(s.mean, 1.5, 1e-15);
    EXPECT_NEAR(s.precision, 2.0, 1e-15);
}

TEST(Merge, WeightValidation)
{
    const BetaPosterior two[] = {{1, 1}, {2, 2}};
    const double bad_sum[] = {0.5, 0.6};
    const double negative[] = {1.5, -0.5};
    const double short_list[] = {1.0};
    EXPECT_THROW(merge(two, bad_sum), std::invalid_argument);
    EXPECT_THROW(merge(two, negative), std::invalid_argument);
    EXPECT_THROW(merge(two, short_list), std::invalid_argument);
    const double nearly[] = {0.5, 0.5 + 5e-13};
    EXPECT_NO_THROW(merge(two, nearly));
}

TEST(Merge, ConvexHullProperty)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> shape(0.5, 50.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 1 + rep % 7;
        std::vector<BetaPosterior> ps(n);
        std::vector<double> w(n);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ps[j] = {shape(rng), shape(rng)};
            w[j] = unit(rng);
            total += w[j];
        }
        for (double& x : w) x /= total;
        double sum = 0.0;
        for (double x : w) sum += x;
        if (std::abs(sum - 1.0) > 1e-12) continue;
        const auto m = merge(ps, w);
        double lo = ps[0].alpha;
        double hi = ps[0].alpha;
        for (const auto& p : ps) {
            lo = std::min(lo, p.alpha);
            hi = std::max(hi, p.alpha);
        }
        EXPECT_GE(m.alpha, lo * (1 - 1e-15));
        EXPECT_LE(m.alpha, hi * (1 + 1e-15));
    }
}

TEST(SampleMean, SupportAndConcentration)
{
    RewardStream s(31);
    for (int i = 0; i < 1000; ++i) {
        const double x = sample_mean(BetaPosterior{1, 1}, s);
        EXPECT_GT(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
    for (int i = 0; i < 100; ++i) {
        EXPECT_NEAR(sample_mean(GaussianPosterior{7, 1e12}, s), 7.0, 1e-5);
        EXPECT_NEAR(sample_mean(BetaPosterior{1e6, 1e6}, s), 0.5, 0.01);
    }
}

TEST(SampleMean, GaussianVarianceIsInversePrecision)
{
    RewardStream s(8);
    const int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_mean(GaussianPosterior{-1, 4}, s);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, -1.0, 6.0 * 0.5 / std::sqrt(n));
    EXPECT_NEAR(sq / n - mean * mean, 0.25, 0.005);
}

TEST(Quantile, Examples)
{
    EXPECT_NEAR(quantile(BetaPosterior{1, 1}, Probability(0.5)), 0.5, 1e-15);
    EXPECT_NEAR(quantile(BetaPosterior{2, 2}, Probability(0.5)), 0.5, 1e-12);
    EXPECT_NEAR(quantile(GaussianPosterior{0, 1}, Probability(0.975)), 1.959964, 1e-6);
    EXPECT_NEAR(quantile(GaussianPosterior{2, 0.25}, Probability(0.975)), 2.0 + 2.0 * 1.9599639845400542, 1e-12);
}

TEST(EmpiricalMean, DefinedAtPrior)
{
    EXPECT_EQ(empirical_mean(BetaPosterior{1, 1}), 0.5);
    EXPECT_EQ(empirical_mean(BetaPosterior{4, 2}), 0.75);
}

TEST(ClosedFormOracle, Examples)
{
    const CommMatrix one = CommMatrix::identity(1);
    EXPECT_EQ(closed_form_beta_oracle({}, one, 1.0, 0, 0, 1), (BetaPosterior{1, 1}));

    const PlayHistory single = {{{0, 1.0}}, {{0, 0.0}}};
    EXPECT_EQ(closed_form_beta_oracle(single, one, 1.0, 0, 0, 3), (BetaPosterior{2, 2}));

    const PlayHistory pair = {{{0, 1.0}, {0, 0.0}}};
    const auto uniform = CommMatrix::uniform(2);
    for (std::size_t agent = 0; agent < 2; ++agent)
        EXPECT_EQ(closed_form_beta_oracle(pair, uniform, 2.0, agent, 0, 2), (BetaPosterior{2, 2}));
}

TEST(ClosedFormOracle, IncompleteHistory)
{
    const PlayHistory single = {{{0, 1.0}}};
    EXPECT_THROW(closed_form_beta_oracle(single, CommMatrix::identity(1), 1.0, 0, 0, 3), std::invalid_argument);
    EXPECT_NO_THROW(closed_form_beta_oracle(single, CommMatrix::identity(1), 1.0, 0, 0, 2));
}

TEST(ClosedFormOracle, MatchesUpdateThenMergeOnRandomHistory)
{
    // 3-agent path graph, two arms, hand-rolled update + merge.
    const auto w = build_metropolis(Topology::custom(3, {{0, 1}, {1, 2}}));
    std::mt19937_64 rng(4);
    const double eta = 3.0;
    std::vector<BetaPosterior> bank(3 * 2);
    PlayHistory history;
    for (std::size_t t = 1; t <= 15; ++t) {
        std::vector<Play> plays(3);
        for (std::size_t i = 0; i < 3; ++i) {
            plays[i] = {static_cast<std::size_t>(rng() % 2), static_cast<double>(rng() % 2)};
            auto& p = bank[i * 2 + plays[i].arm];
            p = tempered_update(p, plays[i].reward, eta);
        }
        history.push_back(plays);
        std::vector<BetaPosterior> next(bank.size());
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 2; ++k) {
                const BetaPosterior col[] = {bank[0 * 2 + k], bank[1 * 2 + k], bank[2 * 2 + k]};
                const double row[] = {w(i, 0), w(i, 1), w(i, 2)};
                next[i * 2 + k] = merge(col, row);
            }
        bank = next;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 2; ++k) {
                const auto oracle = closed_form_beta_oracle(history, w, eta, i, k, t + 1);
                EXPECT_NEAR(bank[i * 2 + k].alpha, oracle.alpha, 1e-9);
                EXPECT_NEAR(bank[i * 2 + k].beta, oracle.beta, 1e-9);
            }
    }
}
