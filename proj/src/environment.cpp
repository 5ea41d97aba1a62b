#include "decbandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace decbandit {

std::string_view to_string(RewardFamily family)
{
    switch (family) {
    case RewardFamily::bernoulli:
        return "bernoulli";
    case RewardFamily::gaussian:
        return "gaussian";
    }
    return "unknown";
}

BanditInstance::BanditInstance(RewardFamily family, std::vector<double> means, double noise_sd)
    : family_(family), means_(std::move(means)), noise_sd_(noise_sd)
{
    if (means_.empty()) {
        throw std::invalid_argument("bandit instance needs at least one arm");
    }
    for (double m : means_) {
        if (!std::isfinite(m)) {
            throw std::invalid_argument("arm means must be finite");
        }
        if (family_ == RewardFamily::bernoulli && (m < 0.0 || m > 1.0)) {
            throw std::invalid_argument("Bernoulli arm mean outside [0, 1]: " + std::to_string(m));
        }
    }
    if (family_ == RewardFamily::gaussian && !(noise_sd_ > 0.0 && std::isfinite(noise_sd_))) {
        throw std::invalid_argument("Gaussian noise_sd must be positive");
    }
    best_arm_ = static_cast<std::size_t>(std::max_element(means_.begin(), means_.end()) - means_.begin());
}

BanditInstance BanditInstance::bernoulli(std::vector<double> means)
{
    return BanditInstance(RewardFamily::bernoulli, std::move(means), 0.0);
}

BanditInstance BanditInstance::gaussian(std::vector<double> means, double noise_sd)
{
    return BanditInstance(RewardFamily::gaussian, std::move(means), noise_sd);
}

double BanditInstance::gap(std::size_t arm) const
{
    return best_mean() - means_.at(arm);
}

double BanditInstance::max_gap() const
{
    return best_mean() - *std::min_element(means_.begin(), means_.end());
}

std::vector<double> suboptimality_gaps(const BanditInstance& instance)
{
    std::vector<double> gaps;
    gaps.reserve(instance.num_arms());
    for (double m : instance.means()) {
        gaps.push_back(instance.best_mean() - m);
    }
    return gaps;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, StreamKind kind, std::uint64_t a, std::uint64_t b)
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return h;
}

double RewardStream::gamma(double shape)
{
    if (!(shape > 0.0)) {
        throw std::domain_error("gamma shape must be positive");
    }
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a + 1) * U^(1/a)
        const double g = gamma(shape + 1.0);
        double u = uniform();
        while (u == 0.0) u = uniform();
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = standard_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RewardStream::beta(double a, double b)
{
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

double draw_reward(const BanditInstance& instance, std::size_t arm, RewardStream& stream)
{
    if (arm >= instance.num_arms()) {
        throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
    }
    const double mean = instance.means()[arm];
    if (instance.family() == RewardFamily::bernoulli) {
        return stream.uniform() < mean ? 1.0 : 0.0;
    }
    return mean + instance.noise_sd() * stream.standard_normal();
}

} // namespace decbandit
