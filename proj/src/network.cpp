#include "decbandit/network.hpp"

#include "decbandit/environment.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace decbandit {

// ---------------------------------------------------------------- Topology

Topology::Topology(Kind kind, std::size_t n, std::vector<Edge> edges)
    : kind_(kind), n_(n), edges_(std::move(edges))
{
    if (n_ == 0) {
        throw std::invalid_argument("topology needs at least one agent");
    }
    for (Edge& e : edges_) {
        if (e.u >= n_ || e.v >= n_) {
            throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                        ") references an agent outside [0, " + std::to_string(n_) + ")");
        }
        if (e.u == e.v) {
            throw std::invalid_argument("self-loop on agent " + std::to_string(e.u));
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Topology Topology::complete(std::size_t n)
{
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
    return Topology(Kind::complete, n, std::move(edges));
}

Topology Topology::cycle(std::size_t n)
{
    std::vector<Edge> edges;
    if (n == 2) {
        edges.push_back({0, 1});
    } else if (n >= 3) {
        for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    }
    return Topology(Kind::cycle, n, std::move(edges));
}

Topology Topology::k_regular(std::size_t n, std::size_t k)
{
    if (k == 0 || 2 * k + 1 > n) {
        throw std::invalid_argument("k-regular topology requires k >= 1 and 2k + 1 <= n");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 1; d <= k; ++d) edges.push_back({i, (i + d) % n});
    Topology t(Kind::k_regular, n, std::move(edges));
    t.k_ = k;
    return t;
}

Topology Topology::grid(std::size_t rows, std::size_t cols)
{
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("grid dimensions must be positive");
    }
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t id = r * cols + c;
            if (c + 1 < cols) edges.push_back({id, id + 1});
            if (r + 1 < rows) edges.push_back({id, id + cols});
        }
    }
    Topology t(Kind::grid, rows * cols, std::move(edges));
    t.rows_ = rows;
    t.cols_ = cols;
    return t;
}

Topology Topology::custom(std::size_t n, std::vector<Edge> edges)
{
    return Topology(Kind::custom, n, std::move(edges));
}

Topology Topology::from_edge_file(const std::filesystem::path& path, std::size_t n)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open edge list " + path.string());
    }
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        long long u = -1;
        long long v = -1;
        std::string rest;
        if (!(fields >> u >> v) || (fields >> rest) || u < 0 || v < 0) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected two non-negative agent indices");
        }
        edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
    }
    return custom(n, std::move(edges));
}

std::vector<std::size_t> Topology::degrees() const
{
    std::vector<std::size_t> deg(n_, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

bool Topology::is_connected() const
{
    std::vector<std::vector<std::size_t>> adj(n_);
    for (const Edge& e : edges_) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<bool> seen(n_, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t visited = 1;
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop();
        for (std::size_t j : adj[i]) {
            if (!seen[j]) {
                seen[j] = true;
                ++visited;
                frontier.push(j);
            }
        }
    }
    return visited == n_;
}

std::string Topology::describe() const
{
    switch (kind_) {
    case Kind::complete:
        return "complete(n=" + std::to_string(n_) + ")";
    case Kind::cycle:
        return "cycle(n=" + std::to_string(n_) + ")";
    case Kind::k_regular:
        return "k_regular(n=" + std::to_string(n_) + ",k=" + std::to_string(k_) + ")";
    case Kind::grid:
        return "grid(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
    case Kind::custom:
        return "custom(n=" + std::to_string(n_) + ",m=" + std::to_string(edges_.size()) + ")";
    }
    return "unknown";
}

// -------------------------------------------------------------- CommMatrix

CommMatrix::CommMatrix(std::size_t n, std::vector<double> weights) : n_(n), weights_(std::move(weights))
{
    if (n_ == 0 || weights_.size() != n_ * n_) {
        throw std::invalid_argument("communication matrix must be n x n with n >= 1");
    }
    std::vector<double> col_sum(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            const double w = weights_[i * n_ + j];
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw std::invalid_argument("communication matrix has a negative or non-finite entry");
            }
            row_sum += w;
            col_sum[j] += w;
        }
        if (std::abs(row_sum - 1.0) > kTolerance) {
            throw std::invalid_argument("row " + std::to_string(i) + " of communication matrix does not sum to 1");
        }
    }
    for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(col_sum[j] - 1.0) > kTolerance) {
            throw std::invalid_argument("column " + std::to_string(j) +
                                        " of communication matrix does not sum to 1");
        }
    }

    row_ptr_.reserve(n_ + 1);
    out_degree_.assign(n_, 0);
    row_ptr_.push_back(0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            const double w = weights_[i * n_ + j];
            if (w > 0.0) {
                col_.push_back(j);
                val_.push_back(w);
                if (j != i) ++out_degree_[i];
            }
        }
        row_ptr_.push_back(col_.size());
        link_count_ += out_degree_[i];
    }

    identical_rows_ = true;
    for (std::size_t i = 1; i < n_ && identical_rows_; ++i) {
        identical_rows_ = std::equal(weights_.begin(), weights_.begin() + static_cast<std::ptrdiff_t>(n_),
                                     weights_.begin() + static_cast<std::ptrdiff_t>(i * n_));
    }
}

CommMatrix CommMatrix::identity(std::size_t n)
{
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
    return CommMatrix(n, std::move(w));
}

CommMatrix CommMatrix::uniform(std::size_t n)
{
    return CommMatrix(n, std::vector<double>(n * n, 1.0 / static_cast<double>(n)));
}

bool CommMatrix::is_symmetric(double tol) const
{
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

// ------------------------------------------------------------ constructions

CommMatrix metropolis_weights(std::size_t n, std::span<const Edge> edges)
{
    std::vector<std::size_t> deg(n, 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    if (n > 0 && edges.size() == n * (n - 1) / 2 &&
        std::all_of(deg.begin(), deg.end(), [n](std::size_t d) { return d == n - 1; })) {
        // Complete graph: every weight is exactly 1/n.
        return CommMatrix::uniform(n);
    }
    std::vector<double> w(n * n, 0.0);
    for (const Edge& e : edges) {
        const double weight = 1.0 / (1.0 + static_cast<double>(std::max(deg[e.u], deg[e.v])));
        w[e.u * n + e.v] = weight;
        w[e.v * n + e.u] = weight;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += w[i * n + j];
        w[i * n + i] = 1.0 - off;
    }
    return CommMatrix(n, std::move(w));
}

CommMatrix build_metropolis(const Topology& topology)
{
    if (!topology.is_connected()) {
        throw std::invalid_argument("topology " + topology.describe() + " is disconnected");
    }
    return metropolis_weights(topology.size(), topology.edges());
}

double second_eigenvalue(const CommMatrix& w)
{
    if (!w.is_symmetric(1e-12)) {
        throw std::invalid_argument("second_eigenvalue requires a symmetric matrix");
    }
    const auto n = static_cast<Eigen::Index>(w.size());
    if (n == 1) {
        return 0.0;
    }
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        w.dense().data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue iteration did not converge");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending; ev[n-1] is the Perron root 1
    return std::max(std::abs(ev[n - 2]), std::abs(ev[0]));
}

CommMatrix gossip_matrix(std::size_t n, std::size_t i, std::size_t j)
{
    if (i == j) {
        throw std::invalid_argument("gossip pair must be two distinct agents");
    }
    if (i >= n || j >= n) {
        throw std::invalid_argument("gossip agent index out of range");
    }
    std::vector<double> w(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) w[a * n + a] = 1.0;
    w[i * n + i] = 0.5;
    w[j * n + j] = 0.5;
    w[i * n + j] = 0.5;
    w[j * n + i] = 0.5;
    return CommMatrix(n, std::move(w));
}

// ---------------------------------------------------------------- schedules

MatrixSchedule::MatrixSchedule(ScheduleKind kind, std::size_t n, std::uint64_t seed)
    : kind_(kind), n_(n), seed_(seed)
{
}

MatrixSchedule MatrixSchedule::fixed(CommMatrix w)
{
    MatrixSchedule s(ScheduleKind::static_matrix, w.size(), 0);
    s.fixed_.emplace(std::move(w));
    return s;
}

MatrixSchedule MatrixSchedule::gossip(std::size_t n, std::uint64_t seed)
{
    if (n < 2) {
        throw std::invalid_argument("gossip schedule needs at least two agents");
    }
    return MatrixSchedule(ScheduleKind::gossip, n, seed);
}

MatrixSchedule MatrixSchedule::link_failure(Topology base, double fail_prob, std::uint64_t seed)
{
    if (!(fail_prob >= 0.0 && fail_prob <= 1.0)) {
        throw std::invalid_argument("link failure probability must lie in [0, 1]");
    }
    MatrixSchedule s(ScheduleKind::link_failure, base.size(), seed);
    s.base_.emplace(std::move(base));
    s.fail_prob_ = fail_prob;
    return s;
}

MatrixSchedule MatrixSchedule::from_spec(const ScheduleSpec& spec, std::uint64_t seed)
{
    switch (spec.kind) {
    case ScheduleKind::static_matrix:
        return fixed(build_metropolis(spec.topology));
    case ScheduleKind::gossip:
        return gossip(spec.topology.size(), seed);
    case ScheduleKind::link_failure:
        return link_failure(spec.topology, spec.fail_prob, seed);
    }
    throw std::invalid_argument("unknown schedule kind");
}

const CommMatrix& MatrixSchedule::static_matrix() const
{
    if (!fixed_) {
        throw std::logic_error("schedule is not static");
    }
    return *fixed_;
}

CommMatrix MatrixSchedule::next_matrix(std::size_t round) const
{
    switch (kind_) {
    case ScheduleKind::static_matrix:
        return *fixed_;
    case ScheduleKind::gossip: {
        RewardStream rng(derive_seed(seed_, StreamKind::schedule, round));
        const std::size_t i = rng.engine()() % n_;
        std::size_t j = rng.engine()() % (n_ - 1);
        if (j >= i) ++j;
        return gossip_matrix(n_, i, j);
    }
    case ScheduleKind::link_failure: {
        RewardStream rng(derive_seed(seed_, StreamKind::schedule, round));
        std::vector<Edge> alive;
        alive.reserve(base_->edges().size());
        for (const Edge& e : base_->edges()) {
            if (rng.uniform() >= fail_prob_) alive.push_back(e);
        }
        return metropolis_weights(n_, alive);
    }
    }
    throw std::logic_error("unknown schedule kind");
}

} // namespace decbandit
