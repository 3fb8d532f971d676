#include "lamg/relax.hpp"

#include <cmath>
#include <string>

#include "lamg/error.hpp"

namespace lamg {

namespace {

[[noreturn]] void zero_diagonal(Index u) {
  throw Error("Gauss-Seidel: zero diagonal at node " + std::to_string(u));
}

}  // namespace

void gs_sweep(const GraphLaplacian& a, std::span<double> x, std::span<const double> b) {
  const Index n = a.size();
  if (x.size() != static_cast<std::size_t>(n) || b.size() != x.size()) {
    throw Error("gs_sweep: vector length mismatch");
  }
  for (Index u = 0; u < n; ++u) {
    const double d = a.diagonal(u);
    if (d == 0.0) zero_diagonal(u);
    auto nbrs = a.neighbors(u);
    auto w = a.weights(u);
    double s = b[u];
    for (std::size_t k = 0; k < nbrs.size(); ++k) s += w[k] * x[nbrs[k]];
    x[u] = s / d;
  }
}

void gs_sweep(const GraphLaplacian& a, std::span<double> x) {
  const Index n = a.size();
  if (x.size() != static_cast<std::size_t>(n)) throw Error("gs_sweep: vector length mismatch");
  for (Index u = 0; u < n; ++u) {
    const double d = a.diagonal(u);
    if (d == 0.0) zero_diagonal(u);
    auto nbrs = a.neighbors(u);
    auto w = a.weights(u);
    double s = 0.0;
    for (std::size_t k = 0; k < nbrs.size(); ++k) s += w[k] * x[nbrs[k]];
    x[u] = s / d;
  }
}

double estimate_relaxation_acf(const GraphLaplacian& a, std::uint64_t seed, int iterations) {
  const Index n = a.size();
  if (n <= 2 || iterations < 1) return 0.0;
  Vector x = test_vector_start(n, seed, -1);
  double prev = 0.0;
  double curr = norm2(x);
  for (int it = 0; it < iterations; ++it) {
    gs_sweep(a, x);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    for (double& v : x) v -= mean;
    prev = curr;
    curr = norm2(x);
  }
  return prev > 0.0 ? curr / prev : 0.0;
}

Vector TestVectorSet::column(int col) const {
  Vector x(n);
  for (Index u = 0; u < n; ++u) x[u] = at(u, col);
  return x;
}

Vector test_vector_start(Index n, std::uint64_t seed, int col) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(col))));
  Vector x(n);
  for (double& v : x) v = rng.symmetric();
  return x;
}

TestVectorSet generate_test_vectors(const GraphLaplacian& a, int k, int nu, std::uint64_t seed) {
  if (k < 1) throw Error("test vector count must be positive");
  if (nu < 0) throw Error("sweep count must be non-negative");
  TestVectorSet tv;
  tv.n = a.size();
  tv.k = k;
  tv.nu = nu;
  tv.values.assign(static_cast<std::size_t>(tv.n) * k, 0.0);
  for (int col = 0; col < k; ++col) {
    Vector x = test_vector_start(tv.n, seed, col);
    for (int s = 0; s < nu; ++s) gs_sweep(a, x);
    for (Index u = 0; u < tv.n; ++u) tv.at(u, col) = x[u];
  }
  return tv;
}

}  // namespace lamg
