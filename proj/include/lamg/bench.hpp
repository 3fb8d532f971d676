#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <json.hpp>

#include "lamg/cycle.hpp"
#include "lamg/laplacian.hpp"
#include "lamg/matrix_market.hpp"
#include "lamg/setup.hpp"

namespace lamg {

struct BenchmarkConfig {
  /// Matrix Market path, or `gen:<spec>` for a synthetic graph.
  std::string input;
  IngestMode mode = IngestMode::Adjacency;
  double gamma = 1.5;
  double guard = 0.7;
  double mu = 4.0 / 3.0;
  double tolerance = 1e-8;
  int max_cycles = 100;
  std::uint64_t seed = kDefaultSeed;
  /// Output directory for the JSON record and metrics.csv; empty to skip writing.
  std::string output;
  /// Record name; derived from the input when empty.
  std::string name;
};

struct MetricsRecord {
  std::string name;
  Index n = 0;
  std::size_t m = 0;
  Index components = 0;
  std::size_t levels = 0;
  double acf_flat = 0.0;
  double acf_adaptive = 0.0;
  /// Setup seconds per edge.
  double t_setup = 0.0;
  /// Adaptive solve seconds per edge per digit of residual reduction.
  double t_solve = 0.0;
  double t_total = 0.0;
  /// Flat over adaptive solve time.
  double gain = 0.0;

  int cycles_flat = 0;
  int cycles_adaptive = 0;
  bool converged_flat = false;
  bool converged_adaptive = false;
  double setup_seconds = 0.0;
  double solve_seconds_flat = 0.0;
  double solve_seconds_adaptive = 0.0;
  std::size_t total_edges = 0;
  std::string error;

  nlohmann::json to_json() const;
  std::string csv_row() const;
  static std::string csv_header();
};

/// Reads a Matrix Market file or builds a `gen:` graph.
GraphLaplacian load_input(const std::string& input, IngestMode mode, std::uint64_t seed);
/// Short record name for an input string.
std::string input_name(const std::string& input);

/// b_s = 1, b_t = -1 for the lowest and highest node of the largest component
/// (ties go to the component holding the smallest node). Throws if every
/// component is a single node.
Vector make_st_rhs(std::span<const Index> labels);

/// t / (m log10(r0 / rp))
double solve_time_per_edge(double seconds, std::size_t m, double r0, double rp);
/// t_setup + 10 t_solve
inline double total_time_per_edge(double t_setup, double t_solve) { return t_setup + 10.0 * t_solve; }

/// Setup once, then flat and adaptive solves of the s/t system. Failures
/// (loading, non-convergence) are recorded in `error` rather than thrown.
MetricsRecord run_benchmark(const BenchmarkConfig& cfg);
/// Same, for an already loaded graph.
MetricsRecord run_benchmark(const GraphLaplacian& a, const BenchmarkConfig& cfg);

/// Writes <dir>/<name>.json and appends a row to <dir>/metrics.csv.
void write_record(const MetricsRecord& rec, const std::string& dir);

}  // namespace lamg
