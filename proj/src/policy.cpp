#include "decbandit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace decbandit {

std::string_view to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::dec_thompson:
        return "dec_ts";
    case PolicyKind::dec_bayes_ucb:
        return "dec_bayes_ucb";
    case PolicyKind::isolated_thompson:
        return "isolated_ts";
    case PolicyKind::centralized_thompson:
        return "centralized_ts";
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view text)
{
    for (PolicyKind k : {PolicyKind::dec_thompson, PolicyKind::dec_bayes_ucb, PolicyKind::isolated_thompson,
                         PolicyKind::centralized_thompson}) {
        if (text == to_string(k)) return k;
    }
    return std::nullopt;
}

void PolicyConfig::validate() const
{
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("eta must be a non-negative finite number");
    }
    if (!(quantile_c >= 0.0) || !std::isfinite(quantile_c)) {
        throw std::invalid_argument("quantile_c must be non-negative");
    }
    if (horizon == 0) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (kind == PolicyKind::dec_bayes_ucb && quantile_c > 0.0 && horizon < 2) {
        throw std::invalid_argument("Bayes-UCB with quantile_c > 0 needs horizon >= 2");
    }
}

MergeBehavior baseline_mode(const PolicyConfig& config)
{
    switch (config.kind) {
    case PolicyKind::isolated_thompson:
        return {MergeBehavior::Mode::none, 1.0};
    case PolicyKind::centralized_thompson:
        return {MergeBehavior::Mode::shared, 1.0};
    case PolicyKind::dec_thompson:
    case PolicyKind::dec_bayes_ucb:
        break;
    }
    return {MergeBehavior::Mode::schedule, config.eta};
}

namespace {

template <class P>
std::size_t thompson_impl(std::span<const P> bank, RewardStream& stream)
{
    if (bank.empty()) {
        throw std::invalid_argument("empty posterior bank");
    }
    std::size_t best = 0;
    double best_value = sample_mean(bank[0], stream);
    for (std::size_t k = 1; k < bank.size(); ++k) {
        const double v = sample_mean(bank[k], stream);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    return best;
}

template <class P>
std::size_t bayes_ucb_impl(std::span<const P> bank, std::size_t t, const PolicyConfig& config)
{
    if (bank.empty()) {
        throw std::invalid_argument("empty posterior bank");
    }
    const Probability level(bayes_ucb_level(t, config.horizon, config.quantile_c));
    std::size_t best = 0;
    double best_value = quantile(bank[0], level);
    for (std::size_t k = 1; k < bank.size(); ++k) {
        const double v = quantile(bank[k], level);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    return best;
}

} // namespace

std::size_t select_arm_thompson(std::span<const BetaPosterior> bank, RewardStream& stream)
{
    return thompson_impl(bank, stream);
}

std::size_t select_arm_thompson(std::span<const GaussianPosterior> bank, RewardStream& stream)
{
    return thompson_impl(bank, stream);
}

double bayes_ucb_level(std::size_t t, std::size_t horizon, double c)
{
    if (t == 0) {
        throw std::invalid_argument("Bayes-UCB rounds are 1-based");
    }
    const double scale = c == 0.0 ? 1.0 : std::pow(std::log(static_cast<double>(horizon)), c);
    const double level = 1.0 - 1.0 / (static_cast<double>(t) * scale);
    return std::clamp(level, 1e-12, 1.0 - 1e-12);
}

std::size_t select_arm_bayes_ucb(std::span<const BetaPosterior> bank, std::size_t t, const PolicyConfig& config)
{
    return bayes_ucb_impl(bank, t, config);
}

std::size_t select_arm_bayes_ucb(std::span<const GaussianPosterior> bank, std::size_t t,
                                 const PolicyConfig& config)
{
    return bayes_ucb_impl(bank, t, config);
}

void apply_observation(BetaPosterior& p, double reward, double eta, const BanditInstance&)
{
    p = tempered_update(p, reward, eta);
}

void apply_observation(GaussianPosterior& p, double reward, double eta, const BanditInstance& instance)
{
    p = tempered_update(p, reward, eta, instance.noise_sd());
}

} // namespace decbandit
