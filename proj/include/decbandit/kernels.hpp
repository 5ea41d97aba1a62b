#pragma once

// Network-wide merge of posterior banks: out[i][k] = sum_j W_ij in[j][k].
// Banks are stored flat, agent-major: element i * K + k is agent i, arm k.
//
// The serial versions are the reference: they call the per-posterior merge on
// full dense rows. The parallel versions walk the compressed rows with OpenMP
// and, when every row of W is the same, merge once and broadcast. Both give
// bitwise identical results because zero weights add exact zeros and the
// summation order over j is ascending in both.

#include "decbandit/network.hpp"
#include "decbandit/posterior.hpp"

#include <cstddef>
#include <span>

namespace decbandit {

void merge_banks_serial(const CommMatrix& w, std::size_t num_arms, std::span<const BetaPosterior> in,
                        std::span<BetaPosterior> out);
void merge_banks_serial(const CommMatrix& w, std::size_t num_arms, std::span<const GaussianPosterior> in,
                        std::span<GaussianPosterior> out);

void merge_banks_parallel(const CommMatrix& w, std::size_t num_arms, std::span<const BetaPosterior> in,
                          std::span<BetaPosterior> out);
void merge_banks_parallel(const CommMatrix& w, std::size_t num_arms, std::span<const GaussianPosterior> in,
                          std::span<GaussianPosterior> out);

/// Sequential CSR merge, the same arithmetic as merge_banks_parallel without
/// spawning threads. Used inside already-parallel Monte Carlo runs.
void merge_banks_sparse(const CommMatrix& w, std::size_t num_arms, std::span<const BetaPosterior> in,
                        std::span<BetaPosterior> out);
void merge_banks_sparse(const CommMatrix& w, std::size_t num_arms, std::span<const GaussianPosterior> in,
                        std::span<GaussianPosterior> out);

} // namespace decbandit
