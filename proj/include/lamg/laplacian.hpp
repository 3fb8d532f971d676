#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lamg {

using Index = std::int32_t;
using Vector = std::vector<double>;

struct Edge {
  Index u = 0;
  Index v = 0;
  double w = 0.0;
};

/// Undirected weighted edge list. Each unordered pair appears at most once,
/// without self-edges; weights may be negative but not zero.
struct EdgeList {
  Index n = 0;
  std::vector<Edge> edges;
};

/**
 * Graph Laplacian stored as compressed rows of edge weights.
 *
 * Row u lists the neighbors v of u (ascending) together with w_uv. Matrix
 * entries are a_uv = -w_uv and a_uu = sum_v w_uv, so every row sums to zero
 * up to rounding. Instances are immutable once built.
 */
class GraphLaplacian {
 public:
  GraphLaplacian() = default;

  /// Strict construction: throws on self-edges, duplicates, zero weights or
  /// out-of-range endpoints.
  static GraphLaplacian from_edges(const EdgeList& list);

  /// Lenient construction used by ingestion and coarsening: duplicate pairs are
  /// summed, self-edges are ignored, and pairs whose summed weight magnitude is
  /// at most `drop_tol` times the sum of contribution magnitudes are dropped.
  static GraphLaplacian from_summed_edges(Index n, std::vector<Edge> edges,
                                          double drop_tol = 0.0);

  Index size() const { return n_; }
  std::size_t num_edges() const { return col_.size() / 2; }
  std::size_t num_nonzeros() const { return col_.size() + static_cast<std::size_t>(n_); }

  Index degree(Index u) const {
    return static_cast<Index>(row_ptr_[u + 1] - row_ptr_[u]);
  }
  std::span<const Index> neighbors(Index u) const {
    return {col_.data() + row_ptr_[u], row_ptr_[u + 1] - row_ptr_[u]};
  }
  std::span<const double> weights(Index u) const {
    return {weight_.data() + row_ptr_[u], row_ptr_[u + 1] - row_ptr_[u]};
  }
  /// Offset of row u in the adjacency storage; entries of per-edge arrays
  /// aligned with this storage live at [row_begin(u), row_begin(u + 1)).
  std::size_t row_begin(Index u) const { return row_ptr_[u]; }
  double diagonal(Index u) const { return diag_[u]; }
  std::span<const double> diagonal() const { return diag_; }

  /// Matrix entry a_uv (O(log degree)).
  double entry(Index u, Index v) const;

  bool has_isolated_nodes() const;

  /// Edges with u < v, sorted lexicographically.
  EdgeList edges() const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// r = b - A x
  void residual(std::span<const double> b, std::span<const double> x,
                std::span<double> r) const;

  /// max_u |row sum| / max_u sum_v |a_uv|; zero for exact Laplacians.
  double row_sum_defect() const;

 private:
  Index n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<double> weight_;
  std::vector<double> diag_;
};

GraphLaplacian build_laplacian(const EdgeList& edges);

/// x^T A x evaluated as sum over edges of w_uv (x_u - x_v)^2.
double energy(const GraphLaplacian& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace lamg
