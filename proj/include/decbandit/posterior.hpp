#pragma once

// Conjugate per-arm posteriors with the tempered (likelihood^eta) update and
// the log-linear merge, which for these families is a convex combination of
// natural parameters.

#include "decbandit/environment.hpp"
#include "decbandit/network.hpp"
#include "decbandit/specfun.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace decbandit {

/// Beta(alpha, beta) over the success probability of a Bernoulli arm.
struct BetaPosterior {
    double alpha = 1.0;
    double beta = 1.0;

    bool operator==(const BetaPosterior&) const = default;
};

/// N(mean, 1/precision) over the mean of a Gaussian arm with known noise.
struct GaussianPosterior {
    double mean = 0.0;
    double precision = 1.0;

    bool operator==(const GaussianPosterior&) const = default;
};

/// One posterior per arm.
using BetaBank = std::vector<BetaPosterior>;
using GaussianBank = std::vector<GaussianPosterior>;

/// alpha += eta * reward, beta += eta * (1 - reward). Throws
/// std::invalid_argument unless reward is 0 or 1 and eta >= 0.
BetaPosterior tempered_update(BetaPosterior p, double reward, double eta);

/// precision += eta / sd^2, mean moves to the precision-weighted average.
GaussianPosterior tempered_update(GaussianPosterior p, double reward, double eta, double noise_sd);

/// Convex combination sum_j w_j p_j of the parameters. Throws
/// std::invalid_argument on a length mismatch, a negative weight, or a weight
/// sum off 1 by more than 1e-12.
BetaPosterior merge(std::span<const BetaPosterior> neighbors, std::span<const double> weights);

/// Convex combination of (precision, precision * mean).
GaussianPosterior merge(std::span<const GaussianPosterior> neighbors, std::span<const double> weights);

/// A draw of the arm's mean reward from the posterior.
double sample_mean(const BetaPosterior& p, RewardStream& stream);
double sample_mean(const GaussianPosterior& p, RewardStream& stream);

/// Posterior quantile of the arm's mean reward. Requires 0 < level < 1.
double quantile(const BetaPosterior& p, Probability level);
double quantile(const GaussianPosterior& p, Probability level);

/// (alpha - 1) / (alpha + beta - 2); 0.5 when alpha + beta = 2.
double empirical_mean(const BetaPosterior& p);

struct Play {
    std::size_t arm = 0;
    double reward = 0.0;

    bool operator==(const Play&) const = default;
};

/// history[tau - 1][j] is agent j's play in round tau.
using PlayHistory = std::vector<std::vector<Play>>;

/// Agent `agent`'s Beta posterior on `arm` at the start of round t (1-based),
/// computed from matrix powers of a static W and a Beta(1, 1) prior:
///   alpha = eta * sum_{tau < t} sum_j (W^{t - tau})_{ij} Y_tau^j 1{A_tau^j = arm} + 1.
/// Throws std::invalid_argument if the history ends before round t - 1.
BetaPosterior closed_form_beta_oracle(const PlayHistory& history, const CommMatrix& w, double eta,
                                      std::size_t agent, std::size_t arm, std::size_t t);

} // namespace decbandit
