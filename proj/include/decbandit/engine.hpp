#pragma once

// Synchronous multi-agent round loop, regret and message accounting, and the
// Monte Carlo runner.

#include "decbandit/environment.hpp"
#include "decbandit/kernels.hpp"
#include "decbandit/network.hpp"
#include "decbandit/policy.hpp"
#include "decbandit/posterior.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace decbandit {

enum class RegretMode { pseudo, realized };

std::string_view to_string(RegretMode mode);

struct Priors {
    BetaPosterior beta{};
    GaussianPosterior gaussian{};

    bool operator==(const Priors&) const = default;
};

struct Scenario {
    std::string name = "scenario";
    BanditInstance instance = BanditInstance::bernoulli({0.5});
    std::size_t n_agents = 1;
    ScheduleSpec schedule{};
    PolicyConfig policy{};
    std::size_t horizon = 1;
    std::size_t n_runs = 1;
    std::uint64_t master_seed = 0;
    /// Trace thinning: rounds r, 2r, ... are recorded, plus the last round.
    std::size_t record_every = 1;
    RegretMode regret = RegretMode::pseudo;
    /// Keep every run's trace in the aggregate.
    bool keep_runs = false;
    Priors priors{};

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    /// Sets both the run length and the Bayes-UCB horizon.
    void set_horizon(std::size_t t)
    {
        horizon = t;
        policy.horizon = t;
    }

    bool operator==(const Scenario&) const = default;
};

/// Rounds at which a trace is recorded for the given horizon and thinning.
std::vector<std::size_t> recorded_rounds(std::size_t horizon, std::size_t record_every);

struct RegretTrace {
    /// Seed of agent 0's stream; the other streams derive from the same
    /// (master seed, run) pair.
    std::uint64_t seed = 0;
    /// Per-agent cumulative regret at each recorded round.
    std::vector<double> regret;
    std::uint64_t messages = 0;
};

struct AggregateResult {
    std::vector<std::size_t> rounds;
    std::vector<double> mean;
    std::vector<double> std_error;
    /// Filled only when Scenario::keep_runs is set.
    std::vector<RegretTrace> runs;
    /// Messages of each run, in run order.
    std::vector<std::uint64_t> messages;

    double final_mean() const { return mean.back(); }
    double final_stderr() const { return std_error.back(); }
};

/// Posterior messages carried by one merge with W: K * #{(i, j) : j != i, W_ij > 0}.
std::uint64_t count_messages(const CommMatrix& w, std::size_t num_arms);

/// One Monte Carlo run advanced a round at a time. Rounds are two-phase:
/// every agent selects, observes and updates its own bank, then all banks are
/// replaced by their merge.
template <class P>
class Simulation {
public:
    Simulation(const Scenario& scenario, std::size_t run);

    /// Replaces the policy's arm choice, e.g. with a fixed arm in tests.
    /// Called as selector(agent, round) with 1-based rounds.
    using Selector = std::function<std::size_t(std::size_t, std::size_t)>;
    void override_selection(Selector selector) { selector_ = std::move(selector); }

    /// Runs both phases of the next round.
    void step();
    /// Phase 1 of the next round: select, draw, tempered update.
    void observe();
    /// Phase 2 of the round last observed.
    void communicate();

    /// Completed rounds.
    std::size_t round() const noexcept { return round_; }
    std::size_t num_agents() const noexcept { return n_; }
    std::size_t num_arms() const noexcept { return k_; }

    /// Flat agent-major bank, element i * K + k.
    std::span<const P> banks() const noexcept { return banks_; }
    const P& posterior(std::size_t agent, std::size_t arm) const { return banks_.at(agent * k_ + arm); }

    /// Plays of the last observed round, one per agent.
    const std::vector<Play>& last_plays() const noexcept { return plays_; }
    /// Network average of the agents' cumulative regret.
    double regret() const noexcept { return regret_sum_ / static_cast<double>(n_); }
    std::uint64_t messages() const noexcept { return messages_; }
    /// Matrix used by the last merge (the schedule's matrix for static runs).
    const CommMatrix& last_matrix() const;

private:
    Scenario scenario_;
    std::size_t n_;
    std::size_t k_;
    MergeBehavior behavior_;
    MatrixSchedule schedule_;
    std::vector<RewardStream> streams_;
    std::vector<RewardStream> counterfactual_;
    std::vector<P> banks_;
    std::vector<P> scratch_;
    std::vector<Play> plays_;
    std::optional<CommMatrix> current_;
    Selector selector_;
    std::size_t round_ = 0;
    bool observed_ = false;
    double regret_sum_ = 0.0;
    std::uint64_t messages_ = 0;
};

extern template class Simulation<BetaPosterior>;
extern template class Simulation<GaussianPosterior>;

/// A full run of the scenario with the given run index.
RegretTrace run_once(const Scenario& scenario, std::size_t run);

/// All runs in parallel over OpenMP threads. The result depends only on the
/// scenario, not on the thread count.
AggregateResult run_scenario(const Scenario& scenario);

/// Reference runner: runs executed one after another.
AggregateResult run_scenario_serial(const Scenario& scenario);

} // namespace decbandit
