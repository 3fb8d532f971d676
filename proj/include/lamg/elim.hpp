#pragma once

#include <span>
#include <vector>

#include "lamg/laplacian.hpp"
#include "lamg/sparse.hpp"

namespace lamg {

/// Largest degree of a node eligible for low-degree elimination.
inline constexpr Index kMaxElimDegree = 4;
/// A stage runs while it finds isolated nodes or at least this fraction of
/// eligible nodes.
inline constexpr double kMinElimFraction = 0.01;

/**
 * One block-elimination stage. Node indices refer to the stage's input graph;
 * c_set is ascending and position k in it is the stage's output node k.
 */
struct EliminationStage {
  Index n_in = 0;
  std::vector<Index> z_set;
  std::vector<Index> f_set;
  std::vector<Index> c_set;
  std::vector<double> f_diag;
  /// n_in x |C|: identity on C, -A_FF^{-1} A_FC on F, zero on Z.
  SparseMatrix interp;
};

/// Composite elimination operators of an Elim level.
struct ElimTransfer {
  std::vector<EliminationStage> stages;
  Index n_fine = 0;
  Index n_coarse = 0;
  /// Product of the stage interpolations (n_fine x n_coarse).
  SparseMatrix composite_p;
  /// Fine index of each coarse node (coarse nodes are surviving fine nodes).
  std::vector<Index> coarse_to_fine;

  /// Q b, the b-dependent part of the fine reconstruction.
  Vector apply_q(std::span<const double> b) const;
  /// Injection of a fine vector onto the surviving nodes.
  Vector inject(std::span<const double> x) const;
};

struct EliminationResult {
  GraphLaplacian coarse;
  ElimTransfer transfer;
  bool eliminated_any = false;
};

/// Independent set of nodes with 1 <= degree <= 4, scanned in ascending order.
/// Nodes whose diagonal is not safely positive are never selected.
std::vector<Index> select_low_degree(const GraphLaplacian& a);

/// Repeated elimination of isolated and low-degree nodes.
EliminationResult eliminate(const GraphLaplacian& a);

/// b_c = P^T b
Vector elim_restrict(const ElimTransfer& t, std::span<const double> b);
/// x = P x_c + Q b
Vector elim_correct(const ElimTransfer& t, std::span<const double> x_c, std::span<const double> b);

}  // namespace lamg
