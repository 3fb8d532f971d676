#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lamg/agg.hpp"
#include "lamg/coarsen.hpp"
#include "lamg/elim.hpp"
#include "lamg/laplacian.hpp"
#include "lamg/random.hpp"

namespace lamg {

enum class LevelKind { Finest, Elim, Agg };
std::string level_kind_name(LevelKind kind);

struct Level {
  LevelKind kind = LevelKind::Finest;
  GraphLaplacian a;
  /// Transfer from the previous level; only the one matching `kind` is set.
  ElimTransfer elim;
  AggTransfer agg;

  /// Cycle parameters for the transition to the next level.
  double gamma = 1.0;
  int nu_pre = 0;
  int nu_post = 0;
  /// Test vectors used to build the next level (0 when it is not an Agg level).
  int tv_count = 0;
  /// Relaxation probe result; negative when the probe was skipped.
  double rho = -1.0;
  /// Coarsening ratio of the aggregation that produced this level (Agg only).
  double alpha = 1.0;

  /// Component label of every node. Labels are shared across levels: a coarse
  /// node and the fine nodes it represents carry the same label.
  std::vector<Index> labels;
};

enum class CoarsestSolver { Direct, Relaxation };

/// Which coarse-level cycle index rule to use when edges shrink.
enum class GammaFormula {
  /// min(2, guard * |E^l| / |E^{l+1}|)
  EdgeRatio,
  /// min(2, guard * |E^{l+1}| / |E^l|), clamped below at 1.
  InverseEdgeRatio,
};

struct SetupOptions {
  double gamma = 1.5;
  double guard = 0.7;
  std::uint64_t seed = kDefaultSeed;
  Index coarsest_size = 150;
  int max_levels = 100;
  int tv_count = 8;
  int tv_sweeps = 3;
  GammaFormula gamma_formula = GammaFormula::EdgeRatio;
  /// Levels whose edge count exceeds this fraction of the finest use `gamma`.
  double gamma_edge_fraction = 0.1;
  /// alpha_max is always replaced by guard / gamma.
  AggregationOptions aggregation;
};

/// Augmented dense system [A U; U^T 0] for the coarsest level, factored once.
struct DirectCoarsest {
  Index n = 0;
  Index m = 0;
  /// Local component index of every coarsest node.
  std::vector<Index> component;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

struct Hierarchy {
  std::vector<Level> levels;
  Index num_components = 0;
  CoarsestSolver coarsest_solver = CoarsestSolver::Direct;
  std::string stop_reason;
  std::shared_ptr<const DirectCoarsest> direct;

  std::size_t num_levels() const { return levels.size(); }
  const Level& finest() const { return levels.front(); }
  const Level& coarsest() const { return levels.back(); }
  const std::vector<Index>& components() const { return levels.front().labels; }
  /// Sum of edge counts over all levels.
  std::size_t total_edges() const;
};

/// Setup phase: relaxation probe, elimination and aggregation, level by level,
/// followed by cycle parameters and component labels.
Hierarchy build_hierarchy(const GraphLaplacian& a, const SetupOptions& opts = {});

/// Cycle index and sweep counts for every level but the coarsest.
void assign_cycle_params(Hierarchy& h, double gamma, double guard,
                         GammaFormula formula = GammaFormula::EdgeRatio,
                         double edge_fraction = 0.1);

/// Connected components of the coarsest graph, interpolated to every level.
/// Fills Level::labels and Hierarchy::num_components; finest labels are
/// numbered by smallest member node.
void assemble_components(Hierarchy& h);

/// Connected component labels of a graph by iterative depth-first search,
/// numbered in order of smallest member node.
std::vector<Index> connected_components(const GraphLaplacian& a, Index* count = nullptr);

/// Factors the augmented coarsest system. Throws if it is singular.
std::shared_ptr<const DirectCoarsest> factor_coarsest(const GraphLaplacian& a,
                                                      std::span<const Index> labels);

/// Per-level table: kind, n, m, mean degree, gamma, nu, K.
nlohmann::json hierarchy_to_json(const Hierarchy& h);

}  // namespace lamg
