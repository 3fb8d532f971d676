#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lamg/laplacian.hpp"
#include "lamg/relax.hpp"

namespace lamg {

/// Affinities c_uv on the edge set, aligned with the Laplacian's adjacency
/// storage (entry row_begin(u) + k belongs to the k-th neighbor of u).
struct AffinityMap {
  std::vector<double> values;
  /// max_{s != u} c_us over the neighbors of u.
  std::vector<double> max_affinity;

  double operator()(const GraphLaplacian& a, Index u, Index v) const;
};

/// c_uv = (X_u, X_v)^2 / ((X_u, X_u) (X_v, X_v)); rows with zero norm get 0.
AffinityMap compute_affinities(const GraphLaplacian& a, const TestVectorSet& x);

inline constexpr Index kUndecided = -1;
inline constexpr Index kSeed = -2;
inline constexpr Index kNotFound = -1;

/**
 * Aggregation state. status[u] is kUndecided, kSeed, or the seed that u is
 * associated with. Undecided nodes end up as singleton aggregates, so the
 * coarse count n_c is the number of seeds plus undecided nodes.
 */
struct AggregateAssignment {
  std::vector<Index> status;
  std::vector<Index> agg_size;
  Index n_c = 0;

  /// Representative of every node: itself for seeds and undecided nodes.
  std::vector<Index> seed_of_nodes() const;
};

struct AggregationOptions {
  double alpha_max = 0.7 / 1.5;
  int max_stages = 2;
  double delta_first = 0.9;
  double delta_factor = 0.6;
  double max_energy_ratio = 2.5;
  /// Nodes with degree >= factor * median degree start out as seeds.
  double seed_degree_factor = 8.0;
};

struct AggregationResult {
  AggregateAssignment assignment;
  /// Coarsening ratio n_c / n of the returned snapshot.
  double alpha = 1.0;
  int stages_run = 0;
  /// Stage whose snapshot was returned (1-based); 0 when no stage ran.
  int chosen_stage = 0;
};

/// Called on every accepted aggregation with the test vectors as they were
/// when the decision was made.
using AggregationObserver =
    std::function<void(Index u, Index seed, double ratio, const TestVectorSet& x)>;

/// Fresh assignment: all undecided except high-degree nodes, which are seeds.
AggregateAssignment initial_assignment(const GraphLaplacian& a, double seed_degree_factor);

/// Multi-stage aggregation with decreasing affinity thresholds; returns the
/// stage snapshot whose coarsening ratio best matches alpha_max.
AggregationResult aggregate(const GraphLaplacian& a, const TestVectorSet& x,
                            const AggregationOptions& opts = {});

/// Per-edge flags for c_uv >= delta * max(max_affinity_u, max_affinity_v).
std::vector<char> strong_neighbors(const GraphLaplacian& a, const AffinityMap& c, double delta);

/// One sweep over undecided nodes that have delta-affinitive neighbors.
void aggregation_stage(AggregateAssignment& assignment, const GraphLaplacian& a,
                       const AffinityMap& c, TestVectorSet& x, double delta,
                       double max_energy_ratio = 2.5,
                       const AggregationObserver& observer = {});

/**
 * Seed for u among its strong seed or undecided neighbors: those whose energy
 * inflation stays within max_energy_ratio, smallest aggregate first, then
 * smallest index. Returns kNotFound when no neighbor qualifies.
 */
Index best_seed(const GraphLaplacian& a, const TestVectorSet& x,
                const AggregateAssignment& assignment, std::span<const char> strong, Index u,
                double max_energy_ratio = 2.5, double* ratio_out = nullptr);

/// E_u(x; y) = (a_uu y / 2 - B_u(x)) y + C_u(x), the energy of node u when x_u
/// is replaced by y.
double nodal_energy(const GraphLaplacian& a, std::span<const double> x, Index u, double y);
inline double nodal_energy(const GraphLaplacian& a, std::span<const double> x, Index u) {
  return nodal_energy(a, x, u, x[u]);
}

/// max_k E_u(x^(k); x_t^(k)) / E_u(x^(k); B_u / a_uu); test vectors whose
/// denominator is below 1e-14 of the numerator are skipped.
double energy_inflation(const GraphLaplacian& a, const TestVectorSet& x, Index u, Index t);

}  // namespace lamg
