#pragma once

// Communication graphs, doubly stochastic weight matrices and the per-round
// matrix schedules (static, random gossip, random link failures).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace decbandit {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    bool operator==(const Edge&) const = default;
};

/// An undirected simple graph over n agents, built from one of the named
/// families or from an explicit edge list.
class Topology {
public:
    enum class Kind { complete, cycle, k_regular, grid, custom };

    static Topology complete(std::size_t n);
    static Topology cycle(std::size_t n);
    /// Circulant graph: agent i is adjacent to i +- 1, ..., i +- k (mod n).
    /// Requires 2k + 1 <= n.
    static Topology k_regular(std::size_t n, std::size_t k);
    /// rows x cols lattice with 4-connectivity.
    static Topology grid(std::size_t rows, std::size_t cols);
    static Topology custom(std::size_t n, std::vector<Edge> edges);
    /// Reads "i j" pairs (0-indexed), one per line. Blank lines and lines
    /// starting with '#' are skipped. n must cover every index.
    static Topology from_edge_file(const std::filesystem::path& path, std::size_t n);

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::vector<std::size_t> degrees() const;
    bool is_connected() const;
    std::string describe() const;

    bool operator==(const Topology&) const = default;

private:
    Topology(Kind kind, std::size_t n, std::vector<Edge> edges);

    Kind kind_;
    std::size_t n_;
    std::vector<Edge> edges_;
    std::size_t k_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

/// Dense n x n nonnegative doubly stochastic matrix with a compressed row
/// view of its nonzeros. Immutable after construction.
class CommMatrix {
public:
    static constexpr double kTolerance = 1e-12;

    /// Row-major weights. Throws std::invalid_argument when an entry is
    /// negative or a row/column sum differs from 1 by more than kTolerance.
    CommMatrix(std::size_t n, std::vector<double> weights);

    static CommMatrix identity(std::size_t n);
    /// (1/n) J
    static CommMatrix uniform(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return weights_[i * n_ + j]; }
    std::span<const double> dense() const noexcept { return weights_; }

    // Compressed rows: nonzeros of row i are [row_begin(i), row_begin(i+1)).
    std::size_t row_begin(std::size_t i) const noexcept { return row_ptr_[i]; }
    std::span<const std::size_t> columns() const noexcept { return col_; }
    std::span<const double> values() const noexcept { return val_; }

    /// Number of j != i with W_ij > 0.
    std::size_t out_degree(std::size_t i) const noexcept { return out_degree_[i]; }
    /// Sum of out_degree over all agents.
    std::size_t link_count() const noexcept { return link_count_; }

    bool is_symmetric(double tol = 0.0) const;
    /// True when every row is identical, so one merged row serves all agents.
    bool has_identical_rows() const noexcept { return identical_rows_; }

    bool operator==(const CommMatrix& other) const { return n_ == other.n_ && weights_ == other.weights_; }

private:
    std::size_t n_;
    std::vector<double> weights_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_;
    std::vector<double> val_;
    std::vector<std::size_t> out_degree_;
    std::size_t link_count_ = 0;
    bool identical_rows_ = false;
};

/// Metropolis-Hastings weights W_ij = 1 / (1 + max(deg_i, deg_j)) on edges,
/// remainder on the diagonal. Throws std::invalid_argument for a
/// disconnected topology.
CommMatrix build_metropolis(const Topology& topology);

/// Same weights for an arbitrary (possibly disconnected) edge set; isolated
/// agents get W_ii = 1.
CommMatrix metropolis_weights(std::size_t n, std::span<const Edge> edges);

/// Largest |eigenvalue| other than the leading 1 of a symmetric doubly
/// stochastic matrix; 0 for n = 1. Throws std::invalid_argument if W is not
/// symmetric.
double second_eigenvalue(const CommMatrix& w);

/// I - (e_i - e_j)(e_i - e_j)^T / 2. Throws std::invalid_argument if i == j.
CommMatrix gossip_matrix(std::size_t n, std::size_t i, std::size_t j);

enum class ScheduleKind { static_matrix, gossip, link_failure };

/// Configuration-level description of a schedule, before seeding.
struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::static_matrix;
    Topology topology = Topology::complete(1);
    double fail_prob = 0.0;

    bool operator==(const ScheduleSpec&) const = default;
};

/// Per-round communication matrices. Every emitted matrix is a pure function
/// of (seed, round), so a schedule can be queried from any thread.
class MatrixSchedule {
public:
    static MatrixSchedule fixed(CommMatrix w);
    static MatrixSchedule gossip(std::size_t n, std::uint64_t seed);
    static MatrixSchedule link_failure(Topology base, double fail_prob, std::uint64_t seed);
    static MatrixSchedule from_spec(const ScheduleSpec& spec, std::uint64_t seed);

    ScheduleKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }
    bool is_static() const noexcept { return kind_ == ScheduleKind::static_matrix; }
    /// Valid only for static schedules.
    const CommMatrix& static_matrix() const;

    /// Matrix used for the merge of the given (1-based) round.
    CommMatrix next_matrix(std::size_t round) const;

private:
    MatrixSchedule(ScheduleKind kind, std::size_t n, std::uint64_t seed);

    ScheduleKind kind_;
    std::size_t n_;
    std::uint64_t seed_;
    std::optional<CommMatrix> fixed_;
    std::optional<Topology> base_;
    double fail_prob_ = 0.0;
};

} // namespace decbandit
