#pragma once

// Arm-selection rules: Thompson sampling and Bayes-UCB over a posterior bank,
// and the merge behavior of each policy kind.

#include "decbandit/environment.hpp"
#include "decbandit/posterior.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace decbandit {

enum class PolicyKind { dec_thompson, dec_bayes_ucb, isolated_thompson, centralized_thompson };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view text);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::dec_thompson;
    /// Likelihood temperature of the decentralized policies.
    double eta = 1.0;
    /// Horizon T in the Bayes-UCB level 1 - 1/(t (log T)^c).
    std::size_t horizon = 1;
    double quantile_c = 0.0;

    /// Throws std::invalid_argument for eta < 0, c < 0, T = 0, or Bayes-UCB
    /// with c > 0 and T < 2.
    void validate() const;

    bool operator==(const PolicyConfig&) const = default;
};

/// How a policy combines information across agents after the local update.
struct MergeBehavior {
    enum class Mode {
        schedule,  ///< merge with the per-round communication matrix
        none,      ///< no communication
        shared,    ///< every observation goes to one bank read by all agents
    };
    Mode mode = Mode::schedule;
    double eta = 1.0;

    bool operator==(const MergeBehavior&) const = default;
};

MergeBehavior baseline_mode(const PolicyConfig& config);

/// One agent's bank with its configuration and round counter.
template <class P>
struct PolicyState {
    std::vector<P> bank;
    PolicyConfig config;
    std::size_t round = 0;
};

/// Draws one mean per arm and returns the argmax (lowest index on ties).
/// Arms are sampled in index order, one posterior draw each.
std::size_t select_arm_thompson(std::span<const BetaPosterior> bank, RewardStream& stream);
std::size_t select_arm_thompson(std::span<const GaussianPosterior> bank, RewardStream& stream);

/// 1 - 1/(t (log T)^c) clamped into [1e-12, 1 - 1e-12].
double bayes_ucb_level(std::size_t t, std::size_t horizon, double c);

/// Argmax over arms of the posterior quantile at bayes_ucb_level(t, T, c)
/// (lowest index on ties).
std::size_t select_arm_bayes_ucb(std::span<const BetaPosterior> bank, std::size_t t, const PolicyConfig& config);
std::size_t select_arm_bayes_ucb(std::span<const GaussianPosterior> bank, std::size_t t,
                                 const PolicyConfig& config);

/// Tempered update of one posterior with an observation from `instance`.
void apply_observation(BetaPosterior& p, double reward, double eta, const BanditInstance& instance);
void apply_observation(GaussianPosterior& p, double reward, double eta, const BanditInstance& instance);

/// Arm chosen by the configured rule for the round after state.round.
template <class P>
std::size_t select_arm(const PolicyState<P>& state, RewardStream& stream)
{
    if (state.config.kind == PolicyKind::dec_bayes_ucb) {
        return select_arm_bayes_ucb(std::span<const P>(state.bank), state.round + 1, state.config);
    }
    return select_arm_thompson(std::span<const P>(state.bank), stream);
}

/// Applies the observation to the played arm with the policy's eta and
/// advances the round counter.
template <class P>
void step(PolicyState<P>& state, std::size_t played_arm, double reward, const BanditInstance& instance)
{
    apply_observation(state.bank.at(played_arm), reward, baseline_mode(state.config).eta, instance);
    ++state.round;
}

} // namespace decbandit
