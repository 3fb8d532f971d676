#pragma once

#include <span>
#include <vector>

#include "lamg/agg.hpp"
#include "lamg/laplacian.hpp"

namespace lamg {

/// Caliber-1 interpolation: fine node u takes the value of coarse node seed_of[u].
struct AggTransfer {
  std::vector<Index> seed_of;
  Index n_c = 0;

  Index n_fine() const { return static_cast<Index>(seed_of.size()); }
};

/// Coarse nodes are numbered by ascending seed index. Throws on chains
/// (an associate pointing at a non-seed).
AggTransfer make_agg_transfer(const AggregateAssignment& assignment);

/// P^T A P for the unit-weight caliber-1 P: coarse weights are sums of fine
/// weights between aggregates; intra-aggregate edges disappear.
GraphLaplacian galerkin_coarsen(const GraphLaplacian& a, const AggTransfer& t);

/// mu = 2Q / (Q + 1), the flat correction minimizing max_{1<=q<=Q} |1 - mu/q|.
double optimal_flat_mu(double q);

/// b_c[U] = mu * sum_{u in U} r_u
void agg_restrict(const AggTransfer& t, double mu, std::span<const double> r, std::span<double> b_c);
Vector agg_restrict(const AggTransfer& t, double mu, std::span<const double> r);

/// x_u += e_c[seed_of[u]]
void agg_correct(const AggTransfer& t, std::span<double> x, std::span<const double> e_c);

}  // namespace lamg
