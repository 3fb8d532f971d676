#include "lamg/coarsen.hpp"

#include <string>

#include "lamg/error.hpp"

namespace lamg {

AggTransfer make_agg_transfer(const AggregateAssignment& assignment) {
  const auto n = static_cast<Index>(assignment.status.size());
  AggTransfer t;
  t.seed_of.assign(n, -1);
  for (Index u = 0; u < n; ++u) {
    if (assignment.status[u] < 0) t.seed_of[u] = t.n_c++;
  }
  for (Index u = 0; u < n; ++u) {
    const Index s = assignment.status[u];
    if (s < 0) continue;
    if (s >= n || assignment.status[s] != kSeed) {
      throw Error("aggregate chain: node " + std::to_string(u) + " points at non-seed " +
                  std::to_string(s));
    }
    t.seed_of[u] = t.seed_of[s];
  }
  return t;
}

GraphLaplacian galerkin_coarsen(const GraphLaplacian& a, const AggTransfer& t) {
  if (t.n_fine() != a.size()) throw Error("galerkin_coarsen: transfer size mismatch");
  std::vector<Edge> edges;
  edges.reserve(a.num_edges());
  for (Index u = 0; u < a.size(); ++u) {
    const Index cu = t.seed_of[u];
    auto nbrs = a.neighbors(u);
    auto w = a.weights(u);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      const Index v = nbrs[e];
      if (v <= u) continue;
      const Index cv = t.seed_of[v];
      if (cu != cv) edges.push_back({cu, cv, w[e]});
    }
  }
  return GraphLaplacian::from_summed_edges(t.n_c, std::move(edges), 1e-13);
}

double optimal_flat_mu(double q) {
  if (!(q >= 1.0)) throw Error("optimal_flat_mu: energy ratio bound must be >= 1");
  return 2.0 * q / (q + 1.0);
}

void agg_restrict(const AggTransfer& t, double mu, std::span<const double> r, std::span<double> b_c) {
  if (r.size() != t.seed_of.size() || b_c.size() != static_cast<std::size_t>(t.n_c)) {
    throw Error("agg_restrict: vector length mismatch");
  }
  std::fill(b_c.begin(), b_c.end(), 0.0);
  for (std::size_t u = 0; u < r.size(); ++u) b_c[t.seed_of[u]] += r[u];
  for (double& v : b_c) v *= mu;
}

Vector agg_restrict(const AggTransfer& t, double mu, std::span<const double> r) {
  Vector b_c(t.n_c);
  agg_restrict(t, mu, r, b_c);
  return b_c;
}

void agg_correct(const AggTransfer& t, std::span<double> x, std::span<const double> e_c) {
  if (x.size() != t.seed_of.size() || e_c.size() != static_cast<std::size_t>(t.n_c)) {
    throw Error("agg_correct: vector length mismatch");
  }
  for (std::size_t u = 0; u < x.size(); ++u) x[u] += e_c[t.seed_of[u]];
}

}  // namespace lamg
