#include "lamg/agg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lamg/error.hpp"

namespace lamg {

namespace {

constexpr double kRatioGuard = 1e-14;

double median_nonzero_degree(const GraphLaplacian& a) {
  std::vector<Index> degrees;
  degrees.reserve(a.size());
  for (Index u = 0; u < a.size(); ++u) {
    if (a.degree(u) > 0) degrees.push_back(a.degree(u));
  }
  if (degrees.empty()) return 0.0;
  const std::size_t mid = degrees.size() / 2;
  std::nth_element(degrees.begin(), degrees.begin() + mid, degrees.end());
  if (degrees.size() % 2 == 1) return degrees[mid];
  const Index upper = degrees[mid];
  const Index lower = *std::max_element(degrees.begin(), degrees.begin() + mid);
  return 0.5 * (lower + upper);
}

// Per-node terms of the nodal energy quadratic for every test vector.
struct NodalTerms {
  std::vector<double> b;
  std::vector<double> c;
};

void nodal_terms(const GraphLaplacian& a, const TestVectorSet& x, Index u, NodalTerms& out) {
  const int k = x.k;
  out.b.assign(k, 0.0);
  out.c.assign(k, 0.0);
  auto nbrs = a.neighbors(u);
  auto w = a.weights(u);
  for (std::size_t e = 0; e < nbrs.size(); ++e) {
    auto row = x.row(nbrs[e]);
    for (int col = 0; col < k; ++col) {
      out.b[col] += w[e] * row[col];
      out.c[col] += w[e] * row[col] * row[col];
    }
  }
  for (double& v : out.c) v *= 0.5;
}

inline double horner(double half_diag, double b, double c, double y) {
  return (half_diag * y - b) * y + c;
}

double inflation_from_terms(const GraphLaplacian& a, const TestVectorSet& x, const NodalTerms& t,
                            std::span<const double> fitted_energy, Index u, Index cand) {
  const double half_diag = 0.5 * a.diagonal(u);
  auto row = x.row(cand);
  double worst = 0.0;
  for (int col = 0; col < x.k; ++col) {
    const double num = horner(half_diag, t.b[col], t.c[col], row[col]);
    const double den = fitted_energy[col];
    if (den < kRatioGuard * num || den <= 0.0) continue;
    worst = std::max(worst, num / den);
  }
  return worst;
}

// Smallest attainable nodal energy per test vector, at x_u = B_u / a_uu.
void fitted_energies(const GraphLaplacian& a, const NodalTerms& t, Index u,
                     std::vector<double>& out) {
  const double d = a.diagonal(u);
  out.resize(t.b.size());
  for (std::size_t col = 0; col < t.b.size(); ++col) {
    const double xbar = d != 0.0 ? t.b[col] / d : 0.0;
    out[col] = horner(0.5 * d, t.b[col], t.c[col], xbar);
  }
}

}  // namespace

double AffinityMap::operator()(const GraphLaplacian& a, Index u, Index v) const {
  auto nbrs = a.neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return values[a.row_begin(u) + static_cast<std::size_t>(it - nbrs.begin())];
}

AffinityMap compute_affinities(const GraphLaplacian& a, const TestVectorSet& x) {
  if (x.n != a.size()) throw Error("compute_affinities: test vector size mismatch");
  const Index n = a.size();
  std::vector<double> self(n);
  for (Index u = 0; u < n; ++u) self[u] = dot(x.row(u), x.row(u));

  AffinityMap c;
  c.values.assign(a.row_begin(n), 0.0);
  c.max_affinity.assign(n, 0.0);
  for (Index u = 0; u < n; ++u) {
    auto nbrs = a.neighbors(u);
    const std::size_t base = a.row_begin(u);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      const Index v = nbrs[e];
      const double denom = self[u] * self[v];
      double value = 0.0;
      if (denom > 0.0) {
        const double uv = dot(x.row(u), x.row(v));
        value = std::min(1.0, uv * uv / denom);
      }
      c.values[base + e] = value;
      c.max_affinity[u] = std::max(c.max_affinity[u], value);
    }
  }
  return c;
}

std::vector<Index> AggregateAssignment::seed_of_nodes() const {
  std::vector<Index> seed(status.size());
  for (std::size_t u = 0; u < status.size(); ++u) {
    seed[u] = status[u] >= 0 ? status[u] : static_cast<Index>(u);
  }
  return seed;
}

AggregateAssignment initial_assignment(const GraphLaplacian& a, double seed_degree_factor) {
  AggregateAssignment s;
  s.status.assign(a.size(), kUndecided);
  s.agg_size.assign(a.size(), 1);
  s.n_c = a.size();
  const double threshold = seed_degree_factor * median_nonzero_degree(a);
  if (threshold > 0.0) {
    for (Index u = 0; u < a.size(); ++u) {
      if (a.degree(u) >= threshold) s.status[u] = kSeed;
    }
  }
  return s;
}

std::vector<char> strong_neighbors(const GraphLaplacian& a, const AffinityMap& c, double delta) {
  std::vector<char> strong(c.values.size(), 0);
  for (Index u = 0; u < a.size(); ++u) {
    auto nbrs = a.neighbors(u);
    const std::size_t base = a.row_begin(u);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      const double value = c.values[base + e];
      const double bar = delta * std::max(c.max_affinity[u], c.max_affinity[nbrs[e]]);
      strong[base + e] = value > 0.0 && value >= bar;
    }
  }
  return strong;
}

double nodal_energy(const GraphLaplacian& a, std::span<const double> x, Index u, double y) {
  double b = 0.0;
  double c = 0.0;
  auto nbrs = a.neighbors(u);
  auto w = a.weights(u);
  for (std::size_t e = 0; e < nbrs.size(); ++e) {
    const double xv = x[nbrs[e]];
    b += w[e] * xv;
    c += w[e] * xv * xv;
  }
  return horner(0.5 * a.diagonal(u), b, 0.5 * c, y);
}

double energy_inflation(const GraphLaplacian& a, const TestVectorSet& x, Index u, Index t) {
  NodalTerms terms;
  nodal_terms(a, x, u, terms);
  std::vector<double> fitted;
  fitted_energies(a, terms, u, fitted);
  return inflation_from_terms(a, x, terms, fitted, u, t);
}

Index best_seed(const GraphLaplacian& a, const TestVectorSet& x,
                const AggregateAssignment& assignment, std::span<const char> strong, Index u,
                double max_energy_ratio, double* ratio_out) {
  auto nbrs = a.neighbors(u);
  const std::size_t base = a.row_begin(u);

  bool any = false;
  for (std::size_t e = 0; e < nbrs.size() && !any; ++e) {
    const Index st = assignment.status[nbrs[e]];
    any = strong[base + e] && (st == kUndecided || st == kSeed);
  }
  if (!any) return kNotFound;

  NodalTerms terms;
  nodal_terms(a, x, u, terms);
  std::vector<double> fitted;
  fitted_energies(a, terms, u, fitted);

  Index best = kNotFound;
  Index best_size = std::numeric_limits<Index>::max();
  double best_ratio = 0.0;
  for (std::size_t e = 0; e < nbrs.size(); ++e) {
    const Index t = nbrs[e];
    const Index st = assignment.status[t];
    if (!strong[base + e] || (st != kUndecided && st != kSeed)) continue;
    const double q = inflation_from_terms(a, x, terms, fitted, u, t);
    if (q > max_energy_ratio) continue;
    // Neighbors are visited in ascending order, so ties keep the smaller index.
    if (assignment.agg_size[t] < best_size) {
      best = t;
      best_size = assignment.agg_size[t];
      best_ratio = q;
    }
  }
  if (ratio_out != nullptr) *ratio_out = best_ratio;
  return best;
}

void aggregation_stage(AggregateAssignment& assignment, const GraphLaplacian& a,
                       const AffinityMap& c, TestVectorSet& x, double delta,
                       double max_energy_ratio, const AggregationObserver& observer) {
  const std::vector<char> strong = strong_neighbors(a, c, delta);
  std::vector<Index> candidates;
  for (Index u = 0; u < a.size(); ++u) {
    if (assignment.status[u] != kUndecided) continue;
    const std::size_t base = a.row_begin(u);
    const std::size_t deg = static_cast<std::size_t>(a.degree(u));
    if (std::any_of(strong.begin() + static_cast<std::ptrdiff_t>(base),
                    strong.begin() + static_cast<std::ptrdiff_t>(base + deg),
                    [](char f) { return f != 0; })) {
      candidates.push_back(u);
    }
  }

  for (Index u : candidates) {
    if (assignment.status[u] != kUndecided) continue;  // changed earlier in this sweep
    double ratio = 0.0;
    const Index s = best_seed(a, x, assignment, strong, u, max_energy_ratio, &ratio);
    if (s == kNotFound) continue;
    if (observer) observer(u, s, ratio, x);
    assignment.status[s] = kSeed;
    assignment.status[u] = s;
    --assignment.n_c;
    auto src = x.row(s);
    auto dst = x.row(u);
    std::copy(src.begin(), src.end(), dst.begin());
    const Index size = assignment.agg_size[s] + 1;
    assignment.agg_size[u] = size;
    assignment.agg_size[s] = size;
  }
}

AggregationResult aggregate(const GraphLaplacian& a, const TestVectorSet& x,
                            const AggregationOptions& opts) {
  if (!(opts.alpha_max > 0.0 && opts.alpha_max < 1.0)) {
    throw Error("aggregate: alpha_max must lie in (0, 1)");
  }
  const Index n = a.size();
  AggregationResult result;
  result.assignment = initial_assignment(a, opts.seed_degree_factor);
  if (n == 0) return result;

  const AffinityMap c = compute_affinities(a, x);
  TestVectorSet tv = x;
  AggregateAssignment current = result.assignment;

  double best_score = std::numeric_limits<double>::infinity();
  double alpha = 1.0;
  double delta = opts.delta_first;
  int stage = 0;
  while (alpha >= opts.alpha_max && stage < opts.max_stages) {
    ++stage;
    aggregation_stage(current, a, c, tv, delta, opts.max_energy_ratio);
    alpha = static_cast<double>(current.n_c) / n;
    const double score = alpha <= opts.alpha_max ? 1.0 - alpha : 1.0 + alpha;
    if (score < best_score) {
      best_score = score;
      result.assignment = current;
      result.alpha = alpha;
      result.chosen_stage = stage;
    }
    delta *= opts.delta_factor;
  }
  result.stages_run = stage;
  return result;
}

}  // namespace lamg
