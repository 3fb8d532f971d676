#include "lamg/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lamg/error.hpp"

namespace lamg {

namespace {

void check_endpoints(Index n, const Edge& e) {
  if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
    throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                ") out of range for n=" + std::to_string(n));
  }
}

}  // namespace

GraphLaplacian GraphLaplacian::from_edges(const EdgeList& list) {
  if (list.n < 0) throw Error("negative node count");
  std::vector<Edge> edges;
  edges.reserve(list.edges.size());
  for (const Edge& e : list.edges) {
    check_endpoints(list.n, e);
    if (e.u == e.v) throw Error("self-edge at node " + std::to_string(e.u));
    if (e.w == 0.0 || !std::isfinite(e.w)) {
      throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                  ") has zero or non-finite weight");
    }
    edges.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.w});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw Error("duplicate edge (" + std::to_string(edges[i].u) + "," +
                  std::to_string(edges[i].v) + ")");
    }
  }
  return from_summed_edges(list.n, std::move(edges));
}

GraphLaplacian GraphLaplacian::from_summed_edges(Index n, std::vector<Edge> edges,
                                                 double drop_tol) {
  // Directed copies of every edge, bucketed by source row.
  std::vector<std::size_t> count(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    check_endpoints(n, e);
    if (e.u == e.v) continue;
    ++count[e.u + 1];
    ++count[e.v + 1];
  }
  for (Index u = 0; u < n; ++u) count[u + 1] += count[u];
  std::vector<Index> cols(count[n]);
  std::vector<double> vals(count[n]);
  std::vector<double> mags(count[n]);
  {
    std::vector<std::size_t> next(count.begin(), count.end() - 1);
    for (const Edge& e : edges) {
      if (e.u == e.v) continue;
      cols[next[e.u]] = e.v;
      vals[next[e.u]++] = e.w;
      cols[next[e.v]] = e.u;
      vals[next[e.v]++] = e.w;
    }
  }
  edges.clear();
  edges.shrink_to_fit();

  GraphLaplacian a;
  a.n_ = n;
  a.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  a.diag_.assign(n, 0.0);
  a.col_.reserve(cols.size());
  a.weight_.reserve(cols.size());

  std::vector<std::pair<Index, double>> row;
  for (Index u = 0; u < n; ++u) {
    row.clear();
    for (std::size_t k = count[u]; k < count[u + 1]; ++k) row.emplace_back(cols[k], vals[k]);
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::size_t k = 0;
    while (k < row.size()) {
      const Index v = row[k].first;
      double sum = 0.0;
      double mag = 0.0;
      for (; k < row.size() && row[k].first == v; ++k) {
        sum += row[k].second;
        mag += std::abs(row[k].second);
      }
      // Same decision is taken from both endpoints: the summands are identical.
      if (sum == 0.0 || std::abs(sum) <= drop_tol * mag) continue;
      a.col_.push_back(v);
      a.weight_.push_back(sum);
    }
    a.row_ptr_[u + 1] = a.col_.size();
  }
  for (Index u = 0; u < n; ++u) {
    double d = 0.0;
    for (double w : a.weights(u)) d += w;
    a.diag_[u] = d;
  }
  return a;
}

double GraphLaplacian::entry(Index u, Index v) const {
  if (u == v) return diag_[u];
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return -weights(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

bool GraphLaplacian::has_isolated_nodes() const {
  for (Index u = 0; u < n_; ++u) {
    if (degree(u) == 0) return true;
  }
  return false;
}

EdgeList GraphLaplacian::edges() const {
  EdgeList list;
  list.n = n_;
  list.edges.reserve(num_edges());
  for (Index u = 0; u < n_; ++u) {
    auto nbrs = neighbors(u);
    auto w = weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] > u) list.edges.push_back({u, nbrs[k], w[k]});
    }
  }
  return list;
}

void GraphLaplacian::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != x.size()) {
    throw Error("multiply: vector length mismatch");
  }
  for (Index u = 0; u < n_; ++u) {
    double s = diag_[u] * x[u];
    for (std::size_t k = row_ptr_[u]; k < row_ptr_[u + 1]; ++k) s -= weight_[k] * x[col_[k]];
    y[u] = s;
  }
}

void GraphLaplacian::residual(std::span<const double> b, std::span<const double> x,
                              std::span<double> r) const {
  if (x.size() != static_cast<std::size_t>(n_) || b.size() != x.size() ||
      r.size() != x.size()) {
    throw Error("residual: vector length mismatch");
  }
  for (Index u = 0; u < n_; ++u) {
    double s = b[u] - diag_[u] * x[u];
    for (std::size_t k = row_ptr_[u]; k < row_ptr_[u + 1]; ++k) s += weight_[k] * x[col_[k]];
    r[u] = s;
  }
}

double GraphLaplacian::row_sum_defect() const {
  double worst = 0.0;
  double scale = 0.0;
  for (Index u = 0; u < n_; ++u) {
    double sum = diag_[u];
    double abs_sum = std::abs(diag_[u]);
    for (double w : weights(u)) {
      sum -= w;
      abs_sum += std::abs(w);
    }
    worst = std::max(worst, std::abs(sum));
    scale = std::max(scale, abs_sum);
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

GraphLaplacian build_laplacian(const EdgeList& edges) {
  return GraphLaplacian::from_edges(edges);
}

double energy(const GraphLaplacian& a, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(a.size())) {
    throw Error("energy: vector length " + std::to_string(x.size()) +
                " does not match n=" + std::to_string(a.size()));
  }
  double e = 0.0;
  for (Index u = 0; u < a.size(); ++u) {
    auto nbrs = a.neighbors(u);
    auto w = a.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] > u) {
        const double d = x[u] - x[nbrs[k]];
        e += w[k] * d * d;
      }
    }
  }
  return e;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace lamg
