#include "decbandit/engine.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace decbandit;

namespace {

std::vector<double> seventeen_arms()
{
    std::vector<double> m(17, 0.1);
    m[0] = 0.5;
    return m;
}

Scenario small_scenario(PolicyKind kind, Topology topology, RewardFamily family = RewardFamily::bernoulli)
{
    Scenario s;
    s.name = "test";
    s.instance = family == RewardFamily::bernoulli ? BanditInstance::bernoulli({0.7, 0.5, 0.2})
                                                   : BanditInstance::gaussian({0.7, 0.5, 0.2}, 1.0);
    s.n_agents = topology.size();
    s.schedule = {ScheduleKind::static_matrix, std::move(topology), 0.0};
    s.policy.kind = kind;
    s.policy.eta = static_cast<double>(s.n_agents);
    s.set_horizon(50);
    s.n_runs = 3;
    s.master_seed = 99;
    return s;
}

template <class P>
std::vector<std::vector<Play>> play_log(Simulation<P>& sim, std::size_t rounds)
{
    std::vector<std::vector<Play>> log;
    for (std::size_t t = 0; t < rounds; ++t) {
        sim.step();
        log.push_back(sim.last_plays());
    }
    return log;
}

} // namespace

TEST(Scenario, Validation)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(4));
    EXPECT_NO_THROW(s.validate());
    auto bad = s;
    bad.n_agents = 5;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = s;
    bad.policy.horizon = 7;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = s;
    bad.n_runs = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = s;
    bad.schedule.topology = Topology::custom(4, {{0, 1}});
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad.schedule.kind = ScheduleKind::link_failure;
    bad.schedule.fail_prob = 0.5;
    EXPECT_NO_THROW(bad.validate());
    bad = s;
    bad.priors.beta.alpha = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(RecordedRounds, ThinningKeepsLastRound)
{
    EXPECT_EQ(recorded_rounds(5, 1), (std::vector<std::size_t>{1, 2, 3, 4, 5}));
    EXPECT_EQ(recorded_rounds(10, 4), (std::vector<std::size_t>{4, 8, 10}));
    EXPECT_EQ(recorded_rounds(3, 10), (std::vector<std::size_t>{3}));
}

TEST(CountMessages, Examples)
{
    EXPECT_EQ(count_messages(CommMatrix::identity(1), 5), 0u);
    EXPECT_EQ(count_messages(build_metropolis(Topology::complete(4)), 2), 24u);
    EXPECT_EQ(count_messages(gossip_matrix(10, 3, 8), 7), 14u);
    EXPECT_EQ(count_messages(build_metropolis(Topology::cycle(10)), 3), 10u * 2u * 3u);
}

TEST(Simulation, MessageTotalsPerPolicy)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::complete(4));
    s.set_horizon(10);
    EXPECT_EQ(run_once(s, 0).messages, 10u * 4u * 3u * 3u);
    s.policy.kind = PolicyKind::isolated_thompson;
    EXPECT_EQ(run_once(s, 0).messages, 0u);
    s.policy.kind = PolicyKind::centralized_thompson;
    EXPECT_EQ(run_once(s, 0).messages, 10u * 4u * 3u);
    s = small_scenario(PolicyKind::dec_thompson, Topology::complete(6));
    s.schedule.kind = ScheduleKind::gossip;
    s.set_horizon(25);
    EXPECT_EQ(run_once(s, 0).messages, 25u * 2u * 3u);
}

TEST(Simulation, SingleAgentDecentralizedEqualsIsolated)
{
    auto dec = small_scenario(PolicyKind::dec_thompson, Topology::complete(1));
    dec.policy.eta = 1.0;
    auto iso = dec;
    iso.policy.kind = PolicyKind::isolated_thompson;
    auto cen = dec;
    cen.policy.kind = PolicyKind::centralized_thompson;
    Simulation<BetaPosterior> a(dec, 0);
    Simulation<BetaPosterior> b(iso, 0);
    Simulation<BetaPosterior> c(cen, 0);
    const auto la = play_log(a, 200);
    EXPECT_EQ(la, play_log(b, 200));
    EXPECT_EQ(la, play_log(c, 200));
    EXPECT_EQ(a.regret(), b.regret());
    EXPECT_EQ(a.banks()[0], b.banks()[0]);
}

TEST(Simulation, AllLinksDownMatchesIsolated)
{
    auto dec = small_scenario(PolicyKind::dec_thompson, Topology::complete(5));
    dec.policy.eta = 1.0;
    dec.schedule.kind = ScheduleKind::link_failure;
    dec.schedule.fail_prob = 1.0;
    auto iso = dec;
    iso.policy.kind = PolicyKind::isolated_thompson;
    Simulation<BetaPosterior> a(dec, 1);
    Simulation<BetaPosterior> b(iso, 1);
    EXPECT_EQ(play_log(a, 100), play_log(b, 100));
    EXPECT_TRUE(std::equal(a.banks().begin(), a.banks().end(), b.banks().begin()));
    EXPECT_EQ(a.messages(), 0u);
}

TEST(Simulation, UniformMergeMakesBanksIdentical)
{
    for (std::size_t n : {2u, 6u}) {
        auto s = small_scenario(PolicyKind::dec_thompson, Topology::complete(n));
        Simulation<BetaPosterior> sim(s, 0);
        sim.step();
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(sim.posterior(i, k), sim.posterior(0, k));
    }
}

TEST(Simulation, PhasesAreOrdered)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(4));
    Simulation<BetaPosterior> sim(s, 0);
    EXPECT_THROW(sim.communicate(), std::logic_error);
    sim.observe();
    EXPECT_THROW(sim.observe(), std::logic_error);
    EXPECT_EQ(sim.round(), 0u);
    // After phase 1 only each agent's played arm moved by eta.
    for (std::size_t i = 0; i < 4; ++i) {
        const Play& p = sim.last_plays()[i];
        const auto& post = sim.posterior(i, p.arm);
        EXPECT_EQ(post.alpha + post.beta, 2.0 + 4.0);
    }
    sim.communicate();
    EXPECT_EQ(sim.round(), 1u);
}

TEST(Simulation, MatchesClosedFormOracle)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::grid(2, 2));
    s.policy.eta = 2.5;
    Simulation<BetaPosterior> sim(s, 3);
    const CommMatrix& w = sim.last_matrix();
    PlayHistory history;
    for (std::size_t t = 1; t <= 20; ++t) {
        sim.step();
        history.push_back(sim.last_plays());
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t k = 0; k < 3; ++k) {
                const auto oracle = closed_form_beta_oracle(history, w, 2.5, i, k, t + 1);
                EXPECT_NEAR(sim.posterior(i, k).alpha, oracle.alpha, 1e-9);
                EXPECT_NEAR(sim.posterior(i, k).beta, oracle.beta, 1e-9);
            }
    }
}

TEST(Simulation, FixedSuboptimalArmHasLinearRegret)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(3));
    Simulation<BetaPosterior> sim(s, 0);
    sim.override_selection([](std::size_t, std::size_t) { return std::size_t{2}; });
    for (std::size_t t = 1; t <= 40; ++t) {
        sim.step();
        EXPECT_NEAR(sim.regret(), static_cast<double>(t) * 0.5, 1e-12);
    }
}

TEST(Simulation, RealizedRegretWithDeterministicRewards)
{
    auto s = small_scenario(PolicyKind::isolated_thompson, Topology::complete(2));
    s.instance = BanditInstance::bernoulli({1.0, 0.0});
    s.regret = RegretMode::realized;
    Simulation<BetaPosterior> worst(s, 0);
    worst.override_selection([](std::size_t, std::size_t) { return std::size_t{1}; });
    Simulation<BetaPosterior> best(s, 0);
    best.override_selection([](std::size_t, std::size_t) { return std::size_t{0}; });
    for (int t = 0; t < 30; ++t) {
        worst.step();
        best.step();
    }
    EXPECT_EQ(worst.regret(), 30.0);
    EXPECT_EQ(best.regret(), 0.0);
}

TEST(RunScenario, EqualMeansGiveZeroRegret)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(5));
    s.instance = BanditInstance::bernoulli({0.4, 0.4, 0.4});
    const auto r = run_scenario(s);
    for (double v : r.mean) EXPECT_EQ(v, 0.0);
}

TEST(RunScenario, RegretMonotoneAndBounded)
{
    for (PolicyKind kind : {PolicyKind::dec_thompson, PolicyKind::dec_bayes_ucb, PolicyKind::isolated_thompson,
                            PolicyKind::centralized_thompson}) {
        for (RewardFamily fam : {RewardFamily::bernoulli, RewardFamily::gaussian}) {
            auto s = small_scenario(kind, Topology::grid(2, 3), fam);
            s.keep_runs = true;
            const auto r = run_scenario(s);
            ASSERT_EQ(r.runs.size(), s.n_runs);
            for (const auto& run : r.runs) {
                for (std::size_t p = 0; p < run.regret.size(); ++p) {
                    EXPECT_LE(run.regret[p], 0.5 * static_cast<double>(r.rounds[p]) + 1e-12);
                    if (p > 0) { EXPECT_GE(run.regret[p], run.regret[p - 1]); }
                }
            }
            for (std::size_t p = 0; p < r.rounds.size(); ++p) {
                double lo = 1e300;
                double hi = -1e300;
                for (const auto& run : r.runs) {
                    lo = std::min(lo, run.regret[p]);
                    hi = std::max(hi, run.regret[p]);
                }
                EXPECT_GE(r.mean[p], lo - 1e-12);
                EXPECT_LE(r.mean[p], hi + 1e-12);
            }
        }
    }
}

TEST(RunScenario, DeterministicAndIndependentOfRunner)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(6), RewardFamily::gaussian);
    s.schedule.kind = ScheduleKind::link_failure;
    s.schedule.fail_prob = 0.4;
    s.n_runs = 4;
    s.keep_runs = true;
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    const auto c = run_scenario_serial(s);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_EQ(a.std_error, c.std_error);
    EXPECT_EQ(a.messages, c.messages);
    // Distinct runs see distinct streams.
    EXPECT_NE(a.runs[0].regret, a.runs[1].regret);
    EXPECT_NE(a.runs[0].seed, a.runs[1].seed);
}

TEST(RunScenario, SameRunIndexSameTrace)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(4));
    EXPECT_EQ(run_once(s, 1).regret, run_once(s, 1).regret);
}

TEST(RunScenario, ThinnedTraceMatchesFullTrace)
{
    auto s = small_scenario(PolicyKind::dec_thompson, Topology::cycle(4));
    s.set_horizon(47);
    const auto full = run_scenario(s);
    s.record_every = 10;
    const auto thin = run_scenario(s);
    ASSERT_EQ(thin.rounds, (std::vector<std::size_t>{10, 20, 30, 40, 47}));
    for (std::size_t p = 0; p < thin.rounds.size(); ++p) EXPECT_EQ(thin.mean[p], full.mean[thin.rounds[p] - 1]);
}

TEST(RunScenario, CentralizedBeatsIsolatedOnSeventeenArmInstance)
{
    Scenario s;
    s.instance = BanditInstance::gaussian(seventeen_arms(), 1.0);
    s.n_agents = 100;
    s.schedule = {ScheduleKind::static_matrix, Topology::cycle(100), 0.0};
    s.policy.kind = PolicyKind::centralized_thompson;
    s.set_horizon(300);
    s.n_runs = 200;
    s.master_seed = 5;
    s.record_every = 300;
    const auto cen = run_scenario(s);
    s.policy.kind = PolicyKind::isolated_thompson;
    const auto iso = run_scenario(s);
    EXPECT_LT(cen.final_mean(), iso.final_mean());
}
