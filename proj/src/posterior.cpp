#include "decbandit/posterior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace decbandit {

namespace {

void check_weights(std::size_t neighbors, std::span<const double> weights)
{
    if (weights.size() != neighbors) {
        throw std::invalid_argument("merge: " + std::to_string(neighbors) + " posteriors but " +
                                    std::to_string(weights.size()) + " weights");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("merge: negative weight");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("merge: weights sum to " + std::to_string(sum) + ", not 1");
    }
}

} // namespace

BetaPosterior tempered_update(BetaPosterior p, double reward, double eta)
{
    if (reward != 0.0 && reward != 1.0) {
        throw std::invalid_argument("Bernoulli reward must be 0 or 1");
    }
    if (!(eta >= 0.0)) {
        throw std::invalid_argument("eta must be non-negative");
    }
    p.alpha += eta * reward;
    p.beta += eta * (1.0 - reward);
    return p;
}

GaussianPosterior tempered_update(GaussianPosterior p, double reward, double eta, double noise_sd)
{
    const double gain = eta / (noise_sd * noise_sd);
    const double precision = p.precision + gain;
    p.mean = (p.precision * p.mean + gain * reward) / precision;
    p.precision = precision;
    return p;
}

BetaPosterior merge(std::span<const BetaPosterior> neighbors, std::span<const double> weights)
{
    check_weights(neighbors.size(), weights);
    BetaPosterior out{0.0, 0.0};
    for (std::size_t j = 0; j < neighbors.size(); ++j) {
        out.alpha += weights[j] * neighbors[j].alpha;
        out.beta += weights[j] * neighbors[j].beta;
    }
    return out;
}

GaussianPosterior merge(std::span<const GaussianPosterior> neighbors, std::span<const double> weights)
{
    check_weights(neighbors.size(), weights);
    double precision = 0.0;
    double shift = 0.0;
    for (std::size_t j = 0; j < neighbors.size(); ++j) {
        precision += weights[j] * neighbors[j].precision;
        shift += weights[j] * (neighbors[j].precision * neighbors[j].mean);
    }
    return {shift / precision, precision};
}

double sample_mean(const BetaPosterior& p, RewardStream& stream)
{
    return stream.beta(p.alpha, p.beta);
}

double sample_mean(const GaussianPosterior& p, RewardStream& stream)
{
    return p.mean + stream.standard_normal() / std::sqrt(p.precision);
}

double quantile(const BetaPosterior& p, Probability level)
{
    return specfun::inv_reg_inc_beta(p.alpha, p.beta, level);
}

double quantile(const GaussianPosterior& p, Probability level)
{
    return specfun::gaussian_quantile(p.mean, 1.0 / std::sqrt(p.precision), level);
}

double empirical_mean(const BetaPosterior& p)
{
    const double n = p.alpha + p.beta - 2.0;
    return n == 0.0 ? 0.5 : (p.alpha - 1.0) / n;
}

BetaPosterior closed_form_beta_oracle(const PlayHistory& history, const CommMatrix& w, double eta,
                                      std::size_t agent, std::size_t arm, std::size_t t)
{
    const std::size_t n = w.size();
    if (agent >= n) {
        throw std::invalid_argument("oracle: agent index out of range");
    }
    if (t == 0) {
        throw std::invalid_argument("oracle: rounds are 1-based");
    }
    if (history.size() + 1 < t) {
        throw std::invalid_argument("oracle: history covers " + std::to_string(history.size()) +
                                    " rounds, round " + std::to_string(t) + " needs " + std::to_string(t - 1));
    }

    // row = e_agent^T W^{t - tau}, built up from tau = t - 1 down to 1.
    std::vector<double> row(n, 0.0);
    row[agent] = 1.0;
    std::vector<double> next(n);
    double success = 0.0;
    double failure = 0.0;
    for (std::size_t tau = t - 1; tau >= 1; --tau) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) s += row[m] * w(m, j);
            next[j] = s;
        }
        row.swap(next);
        const auto& plays = history[tau - 1];
        if (plays.size() != n) {
            throw std::invalid_argument("oracle: round " + std::to_string(tau) + " has " +
                                        std::to_string(plays.size()) + " plays for " + std::to_string(n) +
                                        " agents");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (plays[j].arm != arm) continue;
            success += row[j] * plays[j].reward;
            failure += row[j] * (1.0 - plays[j].reward);
        }
    }
    return {eta * success + 1.0, eta * failure + 1.0};
}

} // namespace decbandit
