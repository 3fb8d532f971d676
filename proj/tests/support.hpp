#pragma once

// Dense reference implementations and graph fixtures shared by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lamg/agg.hpp"
#include "lamg/generators.hpp"
#include "lamg/laplacian.hpp"
#include "lamg/random.hpp"

namespace testing {

using lamg::Index;
using lamg::Vector;

inline Eigen::MatrixXd dense(const lamg::GraphLaplacian& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.size(), a.size());
  for (Index u = 0; u < a.size(); ++u) {
    auto nb = a.neighbors(u);
    auto w = a.weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      m(u, nb[k]) -= w[k];
      m(u, u) += w[k];
    }
  }
  return m;
}

/// D - W straight from an edge list, independent of the CSR build.
inline Eigen::MatrixXd dense_from_edges(const lamg::EdgeList& list) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(list.n, list.n);
  for (const auto& e : list.edges) {
    m(e.u, e.v) -= e.w;
    m(e.v, e.u) -= e.w;
    m(e.u, e.u) += e.w;
    m(e.v, e.v) += e.w;
  }
  return m;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

/// Minimum-norm solution through the symmetric eigendecomposition.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const auto& lam = es.eigenvalues();
  double tol = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Eigen::VectorXd c = es.eigenvectors().transpose() * b;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = std::abs(lam(i)) > tol ? c(i) / lam(i) : 0.0;
  return es.eigenvectors() * c;
}

inline double a_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(a * x)));
}

/// Textbook lexicographic Gauss-Seidel on a dense matrix.
inline void dense_gs(const Eigen::MatrixXd& a, Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double s = b(i);
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (j != i) s -= a(i, j) * x(j);
    x(i) = s / a(i, i);
  }
}

/// Breadth-first component sets, each a sorted node list.
inline std::set<std::vector<Index>> bfs_components(const Eigen::MatrixXd& a) {
  Index n = static_cast<Index>(a.rows());
  std::vector<char> seen(n, 0);
  std::set<std::vector<Index>> out;
  for (Index s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Index> comp;
    std::queue<Index> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      Index u = q.front();
      q.pop();
      comp.push_back(u);
      for (Index v = 0; v < n; ++v)
        if (v != u && a(u, v) != 0.0 && !seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.insert(comp);
  }
  return out;
}

inline std::set<std::vector<Index>> label_sets(const std::vector<Index>& labels) {
  Index m = 0;
  for (Index l : labels) m = std::max(m, l + 1);
  std::vector<std::vector<Index>> groups(m);
  for (Index u = 0; u < static_cast<Index>(labels.size()); ++u) groups[labels[u]].push_back(u);
  return {groups.begin(), groups.end()};
}

inline Vector random_vector(Index n, lamg::Rng& rng) {
  Vector v(n);
  for (auto& x : v) x = rng.symmetric();
  return v;
}

/// Random b with zero sum on every component.
inline Vector compatible_rhs(const std::vector<Index>& labels, lamg::Rng& rng) {
  Index m = 0;
  for (Index l : labels) m = std::max(m, l + 1);
  Vector b(labels.size());
  std::vector<double> sum(m, 0.0);
  std::vector<Index> cnt(m, 0);
  for (std::size_t u = 0; u < b.size(); ++u) {
    b[u] = rng.symmetric();
    sum[labels[u]] += b[u];
    ++cnt[labels[u]];
  }
  for (std::size_t u = 0; u < b.size(); ++u) b[u] -= sum[labels[u]] / cnt[labels[u]];
  return b;
}

/// Disjoint union of edge lists with a random node relabeling.
inline lamg::GraphLaplacian shuffled_union(const std::vector<lamg::GraphLaplacian>& parts,
                                           Index isolated, std::uint64_t seed) {
  Index n = isolated;
  for (const auto& p : parts) n += p.size();
  std::vector<Index> perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  lamg::Rng rng(seed);
  for (Index i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  lamg::EdgeList list;
  list.n = n;
  Index off = 0;
  for (const auto& p : parts) {
    for (const auto& e : p.edges().edges) list.edges.push_back({perm[e.u + off], perm[e.v + off], e.w});
    off += p.size();
  }
  return lamg::GraphLaplacian::from_edges(list);
}

/// Connected graph with some negative chords, rejected until positive
/// semi-definite with a one-dimensional null space.
inline lamg::GraphLaplacian mixed_sign_graph(Index n, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t s = lamg::mix_seed(seed, attempt);
    auto base = lamg::random_connected_graph(n, static_cast<std::size_t>(n), s, 1.0, 2.0);
    lamg::EdgeList list = base.edges();
    lamg::Rng rng(lamg::mix_seed(s, 7));
    std::set<std::pair<Index, Index>> used;
    for (const auto& e : list.edges) used.insert({e.u, e.v});
    Index negatives = std::max<Index>(1, n / 10);
    for (Index k = 0; k < negatives;) {
      Index u = static_cast<Index>(rng.below(n)), v = static_cast<Index>(rng.below(n));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (!used.insert({u, v}).second) continue;
      list.edges.push_back({u, v, -(0.05 + 0.2 * rng.uniform())});
      ++k;
    }
    auto a = lamg::GraphLaplacian::from_edges(list);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a));
    if (es.eigenvalues()(0) > -1e-10 && es.eigenvalues()(1) > 1e-6) return a;
  }
}

/// Aggregation patterns on a periodic unit grid.
enum class Archetype { Pairs, Triples, Blocks, StaggeredPairs };

/**
 * Worst-aggregate energy inflation for linear vectors on a periodic N x N
 * grid: y replaces each value by its aggregate mean, and the ratio
 * sum_{u in U} E_u(y) / sum_{u in U} E_u(x) is maximized over the direction
 * of the linear vector. Offsets use minimal images so wrap-around does not
 * introduce jumps.
 */
inline double archetype_q(Archetype kind, Index n) {
  lamg::GridOptions go;
  go.periodic = true;
  auto a = lamg::generate_grid(lamg::Stencil::UnweightedGrid2D, n, n, go);
  auto key = [&](Index i, Index j) -> std::pair<Index, Index> {
    switch (kind) {
      case Archetype::Pairs: return {i / 2, j};
      case Archetype::Triples: return {i / 3, j};
      case Archetype::Blocks: return {i / 2, j / 2};
      case Archetype::StaggeredPairs: return {((i + j % 2) % n) / 2, j};
    }
    return {i, j};
  };
  std::map<std::pair<Index, Index>, std::vector<Index>> groups;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) groups[key(i, j)].push_back(i + n * j);
  std::vector<const std::vector<Index>*> agg_of(n * n);
  for (const auto& [k, members] : groups)
    for (Index u : members) agg_of[u] = &members;

  auto wrap = [&](Index d) {
    d = ((d % n) + n) % n;
    return d >= n / 2 ? d - n : d;
  };
  auto offset = [&](Index from, Index to) {
    return std::pair<double, double>(wrap(to % n - from % n), wrap(to / n - from / n));
  };

  double worst = 0.0;
  std::vector<double> x(n * n), y(n * n);
  for (const auto& [k, members] : groups) {
    Index ref = members.front();
    auto local = [&](double a1, double a2, double& num, double& den) {
      for (Index v = 0; v < n * n; ++v) {
        auto [dx, dy] = offset(ref, v);
        x[v] = a1 * dx + a2 * dy;
        double mx = 0.0, my = 0.0;
        for (Index m : *agg_of[v]) {
          auto [ox, oy] = offset(v, m);
          mx += ox;
          my += oy;
        }
        double cnt = static_cast<double>(agg_of[v]->size());
        y[v] = x[v] + a1 * mx / cnt + a2 * my / cnt;
      }
      num = den = 0.0;
      for (Index u : members) {
        num += lamg::nodal_energy(a, y, u);
        den += lamg::nodal_energy(a, x, u);
      }
    };
    double n1, d1, n2, d2, n3, d3;
    local(1, 0, n1, d1);
    local(0, 1, n2, d2);
    local(1, 1, n3, d3);
    Eigen::Matrix2d num, den;
    num << n1, (n3 - n1 - n2) / 2, (n3 - n1 - n2) / 2, n2;
    den << d1, (d3 - d1 - d2) / 2, (d3 - d1 - d2) / 2, d2;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(num, den);
    worst = std::max(worst, es.eigenvalues().maxCoeff());
  }
  return worst;
}

}  // namespace testing
