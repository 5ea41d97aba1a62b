#include "decbandit/analysis.hpp"

#include "decbandit/specfun.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace decbandit {

namespace {

void check_instance(const BanditInstance& instance, std::size_t n_agents)
{
    if (instance.family() != RewardFamily::bernoulli) {
        throw std::invalid_argument("the regret bound covers Bernoulli arms only");
    }
    if (n_agents == 0) {
        throw std::invalid_argument("n_agents must be positive");
    }
}

void check_spectrum(double lambda2)
{
    if (!(lambda2 >= 0.0 && lambda2 < 1.0)) {
        throw std::invalid_argument("lambda2 must lie in [0, 1)");
    }
}

// sum_k Delta_k / d(mu_k, mu_1) over arms with Delta_k > 0 and finite d.
double gap_over_kl(const BanditInstance& instance)
{
    const Probability best(instance.best_mean());
    double sum = 0.0;
    for (double mu : instance.means()) {
        const double gap = instance.best_mean() - mu;
        if (gap <= 0.0) continue;
        const double d = specfun::bernoulli_kl(Probability(mu), best);
        if (std::isinf(d)) continue;
        sum += gap / d;
    }
    return sum;
}

} // namespace

double n_tilde(std::size_t n_agents, double lambda2)
{
    check_spectrum(lambda2);
    const auto n = static_cast<double>(n_agents);
    return n * std::log(n) / (1.0 - lambda2);
}

RegretBound regret_upper_bound(const BoundInputs& in)
{
    check_instance(in.instance, in.n_agents);
    check_spectrum(in.lambda2);
    if (!(in.epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (!(in.horizon >= 1.0)) {
        throw std::invalid_argument("horizon must be at least 1");
    }
    const auto n = static_cast<double>(in.n_agents);
    const auto gaps = suboptimality_gaps(in.instance);
    const double gap_sum = std::accumulate(gaps.begin(), gaps.end(), 0.0);
    const double log_n = std::log(n);

    RegretBound b;
    b.leading = (1.0 + in.epsilon) * (1.0 + in.epsilon) * (log_n + std::log(in.horizon)) * gap_over_kl(in.instance) / n;
    b.network = 3.0 * (1.0 + 8.0 / in.epsilon) * log_n / (1.0 - in.lambda2) * gap_sum;
    b.n_tilde = n_tilde(in.n_agents, in.lambda2);
    return b;
}

double asymptotic_slope(const BanditInstance& instance, std::size_t n_agents)
{
    check_instance(instance, n_agents);
    return gap_over_kl(instance) / static_cast<double>(n_agents);
}

std::vector<double> bound_curve(const BoundInputs& inputs, std::span<const std::size_t> horizons)
{
    std::vector<double> out;
    out.reserve(horizons.size());
    BoundInputs at = inputs;
    for (std::size_t t : horizons) {
        at.horizon = static_cast<double>(t);
        out.push_back(regret_upper_bound(at).total());
    }
    return out;
}

LogFit fit_log_regret(std::span<const std::size_t> rounds, std::span<const double> regret, std::size_t t_lo,
                      std::size_t t_hi)
{
    if (rounds.size() != regret.size()) {
        throw std::invalid_argument("rounds and regret differ in length");
    }
    if (t_lo < 2 || t_hi <= t_lo) {
        throw std::invalid_argument("fit window needs t_hi > t_lo >= 2");
    }
    // Regret is shifted by its first value in the window, so a constant
    // curve gives syy == 0 exactly.
    double shift = 0.0;
    double n = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t p = 0; p < rounds.size(); ++p) {
        if (rounds[p] < t_lo || rounds[p] > t_hi) continue;
        if (n == 0.0) shift = regret[p];
        n += 1.0;
        sx += std::log(static_cast<double>(rounds[p]));
        sy += regret[p] - shift;
    }
    if (n < 2.0) {
        throw std::invalid_argument("fit window holds fewer than two points");
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t p = 0; p < rounds.size(); ++p) {
        if (rounds[p] < t_lo || rounds[p] > t_hi) continue;
        const double dx = std::log(static_cast<double>(rounds[p])) - mx;
        const double dy = (regret[p] - shift) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = shift + my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

double fit_log_slope(std::span<const double> regret, std::size_t t_lo, std::size_t t_hi)
{
    if (regret.size() < t_hi) {
        throw std::invalid_argument("regret curve shorter than the fit window");
    }
    std::vector<std::size_t> rounds(regret.size());
    std::iota(rounds.begin(), rounds.end(), std::size_t{1});
    return fit_log_regret(rounds, regret, t_lo, t_hi).slope;
}

} // namespace decbandit
