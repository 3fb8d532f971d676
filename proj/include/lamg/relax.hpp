#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lamg/laplacian.hpp"
#include "lamg/random.hpp"

namespace lamg {

/// One lexicographic Gauss-Seidel sweep on A x = b, in place.
/// Throws lamg::Error naming the first node with a zero diagonal.
void gs_sweep(const GraphLaplacian& a, std::span<double> x, std::span<const double> b);
/// Sweep on A x = 0.
void gs_sweep(const GraphLaplacian& a, std::span<double> x);

inline constexpr int kProbeIterations = 15;

/**
 * Relaxation-speed probe: GS solve iterations (sweep, then subtract the mean)
 * on A x = 0 from a seeded random start; returns |x_nu| / |x_{nu-1}|.
 * Graphs with at most two nodes report 0.
 */
double estimate_relaxation_acf(const GraphLaplacian& a, std::uint64_t seed = kDefaultSeed,
                               int iterations = kProbeIterations);

/// Relaxed test vectors, stored node-major: row u holds (x_u^(1), ..., x_u^(K)).
struct TestVectorSet {
  Index n = 0;
  int k = 0;
  int nu = 0;
  std::vector<double> values;

  double& at(Index u, int col) { return values[static_cast<std::size_t>(u) * k + col]; }
  double at(Index u, int col) const { return values[static_cast<std::size_t>(u) * k + col]; }
  std::span<double> row(Index u) { return {values.data() + static_cast<std::size_t>(u) * k, static_cast<std::size_t>(k)}; }
  std::span<const double> row(Index u) const {
    return {values.data() + static_cast<std::size_t>(u) * k, static_cast<std::size_t>(k)};
  }
  Vector column(int col) const;
};

/// Random draw used as the starting point of test vector `col`.
Vector test_vector_start(Index n, std::uint64_t seed, int col);

/// K columns, each nu GS sweeps on A x = 0 from an independent uniform [-1,1]
/// draw; column `col` uses the stream mix_seed(seed, col).
TestVectorSet generate_test_vectors(const GraphLaplacian& a, int k, int nu, std::uint64_t seed);

}  // namespace lamg
