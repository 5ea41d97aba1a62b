#pragma once

// Ground-truth bandit instances and seeded random streams.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace decbandit {

enum class RewardFamily { bernoulli, gaussian };

std::string_view to_string(RewardFamily family);

/// Reward distributions of the K arms. Means need not be sorted; the best arm
/// is the one with the largest mean (lowest index on ties).
class BanditInstance {
public:
    static BanditInstance bernoulli(std::vector<double> means);
    static BanditInstance gaussian(std::vector<double> means, double noise_sd);

    RewardFamily family() const noexcept { return family_; }
    const std::vector<double>& means() const noexcept { return means_; }
    double noise_sd() const noexcept { return noise_sd_; }
    std::size_t num_arms() const noexcept { return means_.size(); }
    double best_mean() const noexcept { return means_[best_arm_]; }
    std::size_t best_arm() const noexcept { return best_arm_; }
    double gap(std::size_t arm) const;
    double max_gap() const;

    bool operator==(const BanditInstance&) const = default;

private:
    BanditInstance(RewardFamily family, std::vector<double> means, double noise_sd);

    RewardFamily family_;
    std::vector<double> means_;
    double noise_sd_;
    std::size_t best_arm_ = 0;
};

/// Gaps best_mean - mu_k for every arm.
std::vector<double> suboptimality_gaps(const BanditInstance& instance);

/// Purposes of the independent streams derived from a master seed.
enum class StreamKind : std::uint64_t {
    agent = 1,
    schedule = 2,
    counterfactual = 3,
    preset = 4,
};

/// Splittable seed derivation (SplitMix64 chaining). Distinct
/// (master, kind, a, b) tuples give statistically independent seeds.
std::uint64_t derive_seed(std::uint64_t master, StreamKind kind, std::uint64_t a, std::uint64_t b = 0);

/// One deterministic random stream. Owned by a single agent of a single run.
class RewardStream {
public:
    using Engine = std::mt19937_64;

    explicit RewardStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double standard_normal() { return normal_(engine_); }

    /// Gamma(shape, 1), Marsaglia-Tsang.
    double gamma(double shape);

    /// Beta(a, b) as G_a / (G_a + G_b).
    double beta(double a, double b);

    Engine& engine() noexcept { return engine_; }

private:
    Engine engine_;
    std::normal_distribution<double> normal_;
};

/// Draws one reward from the given arm. Throws std::out_of_range for a bad
/// index.
double draw_reward(const BanditInstance& instance, std::size_t arm, RewardStream& stream);

} // namespace decbandit
