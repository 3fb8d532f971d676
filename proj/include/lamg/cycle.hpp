#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lamg/laplacian.hpp"
#include "lamg/random.hpp"
#include "lamg/setup.hpp"

namespace lamg {

enum class Correction { Flat, Adaptive };

struct SolveOptions {
  double tolerance = 1e-8;
  int max_cycles = 100;
  Correction correction = Correction::Flat;
  /// Residual scaling applied at every aggregation restriction.
  double mu = 4.0 / 3.0;
  /// Maximum number of saved iterants used by recombination (1 or 2).
  int theta_max = 2;
  std::uint64_t seed = kDefaultSeed;
};

struct SolveReport {
  /// ||b - A x|| before the first cycle and after each cycle.
  std::vector<double> residual_history;
  /// (r_p / r_0)^(1/p); 0 when no cycle was needed.
  double acf = 0.0;
  /// Same over the last five cycles (or fewer).
  double tail_acf = 0.0;
  int cycles = 0;
  bool converged = false;
  double solve_seconds = 0.0;
  /// Relaxation sweeps and residual evaluations, in finest-level sweep units.
  double work_units = 0.0;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/**
 * Cycles from a seeded random start until the residual drops by `tolerance`
 * or max_cycles is hit. `alpha` holds the requested sum of x over each
 * component (empty means all zero). Throws if b has a nonzero component sum.
 */
SolveResult solve(const Hierarchy& h, std::span<const double> b, std::span<const double> alpha,
                  const SolveOptions& opts = {});

/// Counts sub-cycles: the number of coarse visits per visit of a level whose
/// cycle index is gamma, with the fractional part carried in `credit`.
/// credit += gamma; k = floor(credit); credit -= k.
int take_visits(double gamma, double& credit);

/// Runtime state of a solve. Credits carry across cycles.
struct CycleState {
  std::vector<double> credit;
  double work = 0.0;
  /// Level the solve cycles on; it is never recombined.
  std::size_t top = 0;
};

/**
 * Visit of level l (x updated in place): `sub_cycles` passes of pre-relaxation,
 * coarse correction and post-relaxation, then recombination of the iterants
 * saved before each restriction (adaptive mode). Elimination transitions pass
 * straight through to the next level.
 */
void level_cycle(const Hierarchy& h, std::size_t l, Vector& x, std::span<const double> b,
                 const SolveOptions& opts, CycleState& state, int sub_cycles = 1);

/**
 * Least-squares recombination y = x + sum_i a_i (x_i - x) minimizing ||b - A y||.
 * `residual_of_saved` holds b - A x_i; `r` is b - A x. Directions that are
 * numerically dependent are dropped. Never increases the residual.
 */
Vector recombine(const GraphLaplacian& a, std::span<const double> x,
                 std::span<const double> r, const std::vector<Vector>& saved,
                 const std::vector<Vector>& residual_of_saved);
/// Convenience overload that evaluates the residuals.
Vector recombine(const GraphLaplacian& a, std::span<const double> b, std::span<const double> x,
                 const std::vector<Vector>& saved);

/// x += ((alpha_m - u_m^T x) / u_m^T u_m) u_m for each component m.
/// labels[u] is the component of u; alpha may be empty (all zero).
void orthogonalize_zero_modes(std::span<double> x, std::span<const Index> labels,
                              Index num_components, std::span<const double> alpha = {});

/// Solve at the coarsest level: augmented direct solve, or Gauss-Seidel until
/// the residual drops tenfold (at most 50 sweeps).
void coarsest_solve(const Hierarchy& h, Vector& x, std::span<const double> b, CycleState* state = nullptr);

/// Dense augmented solve: A x = b with U^T x = 0 (the dual part is dropped).
Vector solve_augmented(const DirectCoarsest& d, std::span<const double> b);

}  // namespace lamg
