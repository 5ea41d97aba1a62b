#include "decbandit/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace decbandit;

namespace {

BanditInstance seventeen_arms()
{
    std::vector<double> m(17, 0.1);
    m[0] = 0.5;
    return BanditInstance::bernoulli(m);
}

} // namespace

TEST(RegretBound, TwoArmExample)
{
    BoundInputs in;
    in.instance = BanditInstance::bernoulli({0.5, 0.1});
    in.n_agents = 1;
    in.lambda2 = 0.0;
    in.epsilon = 1.0;
    in.horizon = std::numbers::e;
    const auto b = regret_upper_bound(in);
    EXPECT_NEAR(b.leading, 4.34706762797919, 1e-12);
    EXPECT_EQ(b.network, 0.0);
    EXPECT_NEAR(b.total(), 4.34706762797919, 1e-12);
    EXPECT_EQ(b.n_tilde, 0.0);
}

TEST(RegretBound, SingleArmIsZero)
{
    BoundInputs in;
    in.instance = BanditInstance::bernoulli({0.3});
    in.n_agents = 4;
    in.lambda2 = 0.5;
    in.horizon = 1000;
    EXPECT_EQ(regret_upper_bound(in).total(), 0.0);
}

TEST(RegretBound, InfiniteDivergenceArmsAreExcluded)
{
    // d(mu, 1) is infinite, so only the network term carries the gap.
    BoundInputs in;
    in.instance = BanditInstance::bernoulli({1.0, 0.2});
    in.n_agents = 4;
    in.lambda2 = 0.25;
    in.horizon = 100;
    const auto b = regret_upper_bound(in);
    EXPECT_EQ(b.leading, 0.0);
    EXPECT_NEAR(b.network, 3.0 * 9.0 * std::log(4.0) / 0.75 * 0.8, 1e-12);
}

TEST(RegretBound, NetworkTermAndNTilde)
{
    BoundInputs in;
    in.instance = BanditInstance::bernoulli({0.5, 0.1});
    in.n_agents = 8;
    in.lambda2 = 0.6;
    in.epsilon = 0.5;
    in.horizon = 1000;
    const auto b = regret_upper_bound(in);
    EXPECT_NEAR(b.network, 3.0 * 17.0 * std::log(8.0) / 0.4 * 0.4, 1e-12);
    EXPECT_NEAR(b.leading, 0.4 * 2.25 * std::log(8000.0) / (8.0 * 0.368064207168497), 1e-12);
    EXPECT_NEAR(b.n_tilde, 8.0 * std::log(8.0) / 0.4, 1e-12);
}

TEST(RegretBound, NonincreasingInSpectralGap)
{
    BoundInputs in;
    in.instance = seventeen_arms();
    in.n_agents = 64;
    in.horizon = 5000;
    double prev_total = 1e300;
    double leading = -1.0;
    for (double lambda2 = 0.95; lambda2 >= 0.0; lambda2 -= 0.05) {
        in.lambda2 = std::max(lambda2, 0.0);
        const auto b = regret_upper_bound(in);
        EXPECT_LE(b.total(), prev_total);
        if (leading >= 0.0) { EXPECT_EQ(b.leading, leading); }
        leading = b.leading;
        prev_total = b.total();
    }
}

TEST(RegretBound, Validation)
{
    BoundInputs in;
    in.instance = BanditInstance::gaussian({0.5, 0.1}, 1.0);
    EXPECT_THROW(regret_upper_bound(in), std::invalid_argument);
    in.instance = BanditInstance::bernoulli({0.5, 0.1});
    in.epsilon = 0.0;
    EXPECT_THROW(regret_upper_bound(in), std::invalid_argument);
    in.epsilon = 1.0;
    in.lambda2 = 1.0;
    EXPECT_THROW(regret_upper_bound(in), std::invalid_argument);
    in.lambda2 = 0.0;
    in.horizon = 0.5;
    EXPECT_THROW(regret_upper_bound(in), std::invalid_argument);
}

TEST(AsymptoticSlope, SeventeenArmValues)
{
    const auto inst = seventeen_arms();
    EXPECT_NEAR(asymptotic_slope(inst, 1), 17.3882705119168, 1e-11);
    EXPECT_NEAR(asymptotic_slope(inst, 16), 1.08676690699480, 1e-12);
    EXPECT_NEAR(asymptotic_slope(inst, 64), 0.271691726748699, 1e-13);
    EXPECT_NEAR(asymptotic_slope(inst, 100), 0.173882705119168, 1e-13);
}

TEST(AsymptoticSlope, ScalesAsOneOverN)
{
    const auto inst = BanditInstance::bernoulli({0.9, 0.8, 0.3, 0.05});
    const double one = asymptotic_slope(inst, 1);
    for (std::size_t n : {2u, 3u, 17u, 144u}) EXPECT_NEAR(asymptotic_slope(inst, n), one / static_cast<double>(n), 1e-14);
}

TEST(AsymptoticSlope, EqualMeansGiveZero)
{
    EXPECT_EQ(asymptotic_slope(BanditInstance::bernoulli({0.3, 0.3, 0.3}), 5), 0.0);
    EXPECT_EQ(asymptotic_slope(BanditInstance::bernoulli({0.3}), 5), 0.0);
    EXPECT_THROW(asymptotic_slope(BanditInstance::gaussian({0.3}, 1.0), 5), std::invalid_argument);
}

TEST(BoundCurve, EvaluatesAtEachHorizon)
{
    BoundInputs in;
    in.instance = seventeen_arms();
    in.n_agents = 16;
    in.lambda2 = 0.3;
    const std::size_t ts[] = {1, 10, 100};
    const auto curve = bound_curve(in, ts);
    ASSERT_EQ(curve.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        in.horizon = static_cast<double>(ts[i]);
        EXPECT_EQ(curve[i], regret_upper_bound(in).total());
    }
    EXPECT_LT(curve[0], curve[1]);
}

TEST(FitLogSlope, ExactLogCurve)
{
    std::vector<double> r(1000);
    for (std::size_t t = 1; t <= r.size(); ++t) r[t - 1] = 5.0 * std::log(static_cast<double>(t));
    EXPECT_NEAR(fit_log_slope(r, 2, 1000), 5.0, 1e-9);
}

TEST(FitLogSlope, ConstantCurve)
{
    const std::vector<double> r(100, 3.25);
    EXPECT_EQ(fit_log_slope(r, 10, 100), 0.0);
    std::vector<std::size_t> rounds(100);
    for (std::size_t t = 0; t < 100; ++t) rounds[t] = t + 1;
    EXPECT_EQ(fit_log_regret(rounds, r, 10, 100).r_squared, 1.0);
}

TEST(FitLogSlope, ConstantCurveWithInexactMean)
{
    // The plain mean of these values is not exactly representable.
    const std::vector<double> r(20000, 32.601875000003);
    std::vector<std::size_t> rounds(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) rounds[t] = t + 1;
    const auto fit = fit_log_regret(rounds, r, 5000, 20000);
    EXPECT_EQ(fit.slope, 0.0);
    EXPECT_EQ(fit.intercept, 32.601875000003);
    EXPECT_EQ(fit.r_squared, 1.0);
}

TEST(FitLogSlope, NoisyCurve)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<double> r(5000);
    for (std::size_t t = 1; t <= r.size(); ++t) r[t - 1] = 2.0 * std::log(static_cast<double>(t)) + noise(rng);
    EXPECT_NEAR(fit_log_slope(r, 2, 5000), 2.0, 0.05);
    std::vector<std::size_t> rounds(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) rounds[t] = t + 1;
    const auto fit = fit_log_regret(rounds, r, 1250, 5000);
    EXPECT_GT(fit.r_squared, 0.95);
}

TEST(FitLogSlope, DegenerateWindows)
{
    const std::vector<double> r(50, 1.0);
    EXPECT_THROW(fit_log_slope(r, 1, 10), std::invalid_argument);
    EXPECT_THROW(fit_log_slope(r, 10, 10), std::invalid_argument);
    EXPECT_THROW(fit_log_slope(r, 10, 60), std::invalid_argument);
    const std::size_t rounds[] = {5, 100};
    const double values[] = {1.0, 2.0};
    EXPECT_THROW(fit_log_regret(rounds, values, 10, 50), std::invalid_argument);
}
