#pragma once

// Regret upper bound for decentralized Thompson sampling with Bernoulli arms,
// its asymptotic log-slope, and least-squares diagnostics of regret curves.

#include "decbandit/environment.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace decbandit {

struct BoundInputs {
    BanditInstance instance = BanditInstance::bernoulli({0.5});
    std::size_t n_agents = 1;
    /// |second largest eigenvalue| of W, in [0, 1).
    double lambda2 = 0.0;
    double epsilon = 1.0;
    /// T; real-valued so that log T can be set exactly.
    double horizon = 1.0;
};

struct RegretBound {
    /// sum_k Delta_k (1 + eps)^2 log(N T) / (N d(mu_k, mu_1))
    double leading = 0.0;
    /// 3 (1 + 8/eps) log N / (1 - lambda2) * sum_k Delta_k
    double network = 0.0;
    /// N log N / (1 - lambda2): the exponent of the O(1/eps^Ñ) remainder,
    /// which has no explicit constant and is not part of total().
    double n_tilde = 0.0;

    double total() const { return leading + network; }
};

/// Throws std::invalid_argument for a non-Bernoulli instance, eps <= 0,
/// lambda2 outside [0, 1), N = 0 or T < 1. Suboptimal arms with
/// d(mu_k, mu_1) = inf (mu_1 = 1) contribute nothing to the leading term.
RegretBound regret_upper_bound(const BoundInputs& inputs);

/// N log N / (1 - lambda2).
double n_tilde(std::size_t n_agents, double lambda2);

/// sum over suboptimal arms of Delta_k / (N d(mu_k, mu_1)). Same errors as
/// regret_upper_bound for the instance and N.
double asymptotic_slope(const BanditInstance& instance, std::size_t n_agents);

/// Bound total() at each of the given horizons.
std::vector<double> bound_curve(const BoundInputs& inputs, std::span<const std::size_t> horizons);

struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Coefficient of determination; 1 for a constant curve fitted exactly.
    double r_squared = 0.0;
};

/// Least squares of regret against log t over the points with
/// t_lo <= t <= t_hi. `rounds` are the 1-based rounds of `regret`. Throws
/// std::invalid_argument unless t_hi > t_lo >= 2 and the window holds at
/// least two points.
LogFit fit_log_regret(std::span<const std::size_t> rounds, std::span<const double> regret, std::size_t t_lo,
                      std::size_t t_hi);

/// fit_log_regret(...).slope for a curve recorded at every round 1..len.
double fit_log_slope(std::span<const double> regret, std::size_t t_lo, std::size_t t_hi);

} // namespace decbandit
