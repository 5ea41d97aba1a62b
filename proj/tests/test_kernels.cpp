#include "decbandit/kernels.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace decbandit;

namespace {

std::vector<BetaPosterior> random_beta_bank(std::size_t size, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shape(1.0, 300.0);
    std::vector<BetaPosterior> bank(size);
    for (auto& p : bank) p = {shape(rng), shape(rng)};
    return bank;
}

std::vector<GaussianPosterior> random_gaussian_bank(std::size_t size, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> mean(0.0, 2.0);
    std::uniform_real_distribution<double> prec(0.5, 500.0);
    std::vector<GaussianPosterior> bank(size);
    for (auto& p : bank) p = {mean(rng), prec(rng)};
    return bank;
}

std::vector<CommMatrix> test_matrices()
{
    return {
        CommMatrix::identity(9),
        build_metropolis(Topology::complete(9)),
        build_metropolis(Topology::cycle(9)),
        build_metropolis(Topology::grid(3, 3)),
        build_metropolis(Topology::k_regular(9, 2)),
        gossip_matrix(9, 2, 7),
        MatrixSchedule::link_failure(Topology::complete(9), 0.5, 3).next_matrix(4),
    };
}

} // namespace

TEST(MergeKernels, ParallelAndSparseMatchSerialBitwiseBeta)
{
    const std::size_t k = 5;
    for (const auto& w : test_matrices()) {
        const auto in = random_beta_bank(w.size() * k, w.link_count() + 1);
        std::vector<BetaPosterior> serial(in.size());
        std::vector<BetaPosterior> parallel(in.size());
        std::vector<BetaPosterior> sparse(in.size());
        merge_banks_serial(w, k, in, serial);
        merge_banks_parallel(w, k, in, parallel);
        merge_banks_sparse(w, k, in, sparse);
        EXPECT_EQ(serial, parallel);
        EXPECT_EQ(serial, sparse);
    }
}

TEST(MergeKernels, ParallelAndSparseMatchSerialBitwiseGaussian)
{
    const std::size_t k = 4;
    for (const auto& w : test_matrices()) {
        const auto in = random_gaussian_bank(w.size() * k, w.link_count() + 7);
        std::vector<GaussianPosterior> serial(in.size());
        std::vector<GaussianPosterior> parallel(in.size());
        merge_banks_serial(w, k, in, serial);
        merge_banks_parallel(w, k, in, parallel);
        EXPECT_EQ(serial, parallel);
    }
}

TEST(MergeKernels, IdentityIsNoOp)
{
    const auto in = random_beta_bank(6 * 3, 1);
    std::vector<BetaPosterior> out(in.size());
    merge_banks_parallel(CommMatrix::identity(6), 3, in, out);
    EXPECT_EQ(in, out);
}

TEST(MergeKernels, UniformMatrixMakesBanksIdentical)
{
    const auto in = random_gaussian_bank(5 * 2, 2);
    std::vector<GaussianPosterior> out(in.size());
    merge_banks_parallel(CommMatrix::uniform(5), 2, in, out);
    for (std::size_t i = 1; i < 5; ++i) {
        EXPECT_EQ(out[i * 2], out[0]);
        EXPECT_EQ(out[i * 2 + 1], out[1]);
    }
}

TEST(MergeKernels, DoublyStochasticMergePreservesTotals)
{
    const auto w = build_metropolis(Topology::grid(3, 4));
    const std::size_t k = 3;
    const auto beta_in = random_beta_bank(w.size() * k, 5);
    std::vector<BetaPosterior> beta_out(beta_in.size());
    merge_banks_parallel(w, k, beta_in, beta_out);
    const auto gauss_in = random_gaussian_bank(w.size() * k, 6);
    std::vector<GaussianPosterior> gauss_out(gauss_in.size());
    merge_banks_parallel(w, k, gauss_in, gauss_out);
    for (std::size_t arm = 0; arm < k; ++arm) {
        double a_in = 0, a_out = 0, b_in = 0, b_out = 0, p_in = 0, p_out = 0, s_in = 0, s_out = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            a_in += beta_in[i * k + arm].alpha;
            a_out += beta_out[i * k + arm].alpha;
            b_in += beta_in[i * k + arm].beta;
            b_out += beta_out[i * k + arm].beta;
            p_in += gauss_in[i * k + arm].precision;
            p_out += gauss_out[i * k + arm].precision;
            s_in += gauss_in[i * k + arm].precision * gauss_in[i * k + arm].mean;
            s_out += gauss_out[i * k + arm].precision * gauss_out[i * k + arm].mean;
        }
        EXPECT_NEAR(a_out, a_in, 1e-10 * a_in);
        EXPECT_NEAR(b_out, b_in, 1e-10 * b_in);
        EXPECT_NEAR(p_out, p_in, 1e-10 * p_in);
        EXPECT_NEAR(s_out, s_in, 1e-9 * (1.0 + std::abs(s_in)));
    }
}

TEST(MergeKernels, ShapeMismatchThrows)
{
    std::vector<BetaPosterior> in(10);
    std::vector<BetaPosterior> out(9);
    EXPECT_THROW(merge_banks_parallel(CommMatrix::identity(5), 2, in, out), std::invalid_argument);
    EXPECT_THROW(merge_banks_serial(CommMatrix::identity(5), 2, in, out), std::invalid_argument);
}
