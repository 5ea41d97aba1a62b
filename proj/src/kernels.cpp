#include "decbandit/kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace decbandit {

namespace {

void check_shapes(const CommMatrix& w, std::size_t num_arms, std::size_t in, std::size_t out)
{
    const std::size_t expected = w.size() * num_arms;
    if (in != expected || out != expected) {
        throw std::invalid_argument("bank size does not match N x K");
    }
}

struct BetaAccumulator {
    double alpha = 0.0;
    double beta = 0.0;
    void add(double w, const BetaPosterior& p)
    {
        alpha += w * p.alpha;
        beta += w * p.beta;
    }
    BetaPosterior result() const { return {alpha, beta}; }
};

struct GaussianAccumulator {
    double precision = 0.0;
    double shift = 0.0;
    void add(double w, const GaussianPosterior& p)
    {
        precision += w * p.precision;
        shift += w * (p.precision * p.mean);
    }
    GaussianPosterior result() const { return {shift / precision, precision}; }
};

template <class P> struct AccumulatorFor;
template <> struct AccumulatorFor<BetaPosterior> { using type = BetaAccumulator; };
template <> struct AccumulatorFor<GaussianPosterior> { using type = GaussianAccumulator; };

template <class P>
void serial_impl(const CommMatrix& w, std::size_t num_arms, std::span<const P> in, std::span<P> out)
{
    check_shapes(w, num_arms, in.size(), out.size());
    const std::size_t n = w.size();
    const auto dense = w.dense();
    std::vector<P> column(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = dense.subspan(i * n, n);
        for (std::size_t k = 0; k < num_arms; ++k) {
            for (std::size_t j = 0; j < n; ++j) column[j] = in[j * num_arms + k];
            out[i * num_arms + k] = merge(std::span<const P>(column), row);
        }
    }
}

template <class P>
void merge_row(const CommMatrix& w, std::size_t i, std::size_t num_arms, std::span<const P> in, P* out)
{
    using Acc = typename AccumulatorFor<P>::type;
    const auto cols = w.columns();
    const auto vals = w.values();
    const std::size_t begin = w.row_begin(i);
    const std::size_t end = w.row_begin(i + 1);
    for (std::size_t k = 0; k < num_arms; ++k) {
        Acc acc;
        for (std::size_t e = begin; e < end; ++e) acc.add(vals[e], in[cols[e] * num_arms + k]);
        out[k] = acc.result();
    }
}

template <class P>
void broadcast_first_row(std::size_t n, std::size_t num_arms, std::span<P> out)
{
    for (std::size_t i = 1; i < n; ++i)
        std::copy_n(out.begin(), num_arms, out.begin() + static_cast<std::ptrdiff_t>(i * num_arms));
}

template <class P>
void sparse_impl(const CommMatrix& w, std::size_t num_arms, std::span<const P> in, std::span<P> out)
{
    check_shapes(w, num_arms, in.size(), out.size());
    const std::size_t n = w.size();
    if (w.has_identical_rows()) {
        merge_row(w, 0, num_arms, in, out.data());
        broadcast_first_row(n, num_arms, out);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) merge_row(w, i, num_arms, in, out.data() + i * num_arms);
}

template <class P>
void parallel_impl(const CommMatrix& w, std::size_t num_arms, std::span<const P> in, std::span<P> out)
{
    check_shapes(w, num_arms, in.size(), out.size());
    const auto n = static_cast<std::ptrdiff_t>(w.size());
    if (w.has_identical_rows()) {
        merge_row(w, 0, num_arms, in, out.data());
        broadcast_first_row(w.size(), num_arms, out);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        merge_row(w, row, num_arms, in, out.data() + row * num_arms);
    }
}

} // namespace

void merge_banks_serial(const CommMatrix& w, std::size_t num_arms, std::span<const BetaPosterior> in,
                        std::span<BetaPosterior> out)
{
    serial_impl(w, num_arms, in, out);
}

void merge_banks_serial(const CommMatrix& w, std::size_t num_arms, std::span<const GaussianPosterior> in,
                        std::span<GaussianPosterior> out)
{
    serial_impl(w, num_arms, in, out);
}

void merge_banks_parallel(const CommMatrix& w, std::size_t num_arms, std::span<const BetaPosterior> in,
                          std::span<BetaPosterior> out)
{
    parallel_impl(w, num_arms, in, out);
}

void merge_banks_parallel(const CommMatrix& w, std::size_t num_arms, std::span<const GaussianPosterior> in,
                          std::span<GaussianPosterior> out)
{
    parallel_impl(w, num_arms, in, out);
}

void merge_banks_sparse(const CommMatrix& w, std::size_t num_arms, std::span<const BetaPosterior> in,
                        std::span<BetaPosterior> out)
{
    sparse_impl(w, num_arms, in, out);
}

void merge_banks_sparse(const CommMatrix& w, std::size_t num_arms, std::span<const GaussianPosterior> in,
                        std::span<GaussianPosterior> out)
{
    sparse_impl(w, num_arms, in, out);
}

} // namespace decbandit
