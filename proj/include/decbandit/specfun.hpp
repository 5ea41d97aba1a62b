#pragma once

// Special functions used by the posteriors, the Bayes-UCB quantile index and
// the regret bound. All functions are pure and safe to call concurrently.

#include <stdexcept>

namespace decbandit {

/// A real number in [0, 1]. Construction outside the interval (or from NaN)
/// throws std::domain_error.
class Probability {
public:
    constexpr Probability() = default;
    explicit Probability(double value);

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

namespace specfun {

/// ln Gamma(x) for x > 0. Relative error <= 1e-12 on [1e-3, 1e6].
double log_gamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a, b), i.e. the Beta(a, b) CDF.
double reg_inc_beta(double a, double b, Probability x);

/// Inverse of reg_inc_beta in x: returns x with |I_x(a,b) - p| <= 1e-10.
double inv_reg_inc_beta(double a, double b, Probability p);

/// Standard normal CDF Phi(z).
double normal_cdf(double z);

/// Phi^{-1}(p) for 0 < p < 1.
double normal_quantile(double p);

/// mean + sd * Phi^{-1}(p). Requires 0 < p < 1 and sd > 0.
double gaussian_quantile(double mean, double sd, Probability p);

/// KL divergence between Bernoulli(a) and Bernoulli(b) with the conventions
/// 0 log(0/b) = 0 and a log(a/0) = +inf. Returns +infinity when b is 0 or 1
/// and a != b.
double bernoulli_kl(Probability a, Probability b);

} // namespace specfun
} // namespace decbandit
