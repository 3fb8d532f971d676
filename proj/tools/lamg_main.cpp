#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lamg/bench.hpp"
#include "lamg/cycle.hpp"
#include "lamg/error.hpp"
#include "lamg/matrix_market.hpp"
#include "lamg/setup.hpp"

namespace {

struct CommonArgs {
  std::string input;
  std::string mode = "adjacency";
  double gamma = 1.5;
  double guard = 0.7;
  std::uint64_t seed = lamg::kDefaultSeed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool input_required = true) {
  auto* in = cmd->add_option("--input", args.input, "Matrix Market file or gen:<kind>:<N>[x<N>]");
  if (input_required) in->required();
  cmd->add_option("--mode", args.mode, "adjacency or laplacian")
      ->check(CLI::IsMember({"adjacency", "laplacian"}));
  cmd->add_option("--gamma", args.gamma, "cycle index");
  cmd->add_option("--guard", args.guard, "relaxation speed guard g");
  cmd->add_option("--seed", args.seed, "random seed");
}

lamg::IngestMode ingest_mode(const std::string& name) {
  const auto mode = lamg::parse_ingest_mode(name);
  if (!mode) throw lamg::Error("unknown ingestion mode '" + name + "'");
  return *mode;
}

lamg::SetupOptions setup_options(const CommonArgs& args) {
  lamg::SetupOptions so;
  so.gamma = args.gamma;
  so.guard = args.guard;
  so.seed = args.seed;
  return so;
}

void write_json(const std::string& dir, const std::string& file, const nlohmann::json& j) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / file);
  if (!out) throw lamg::Error("cannot write " + file + " in " + dir);
  out << j.dump(2) << '\n';
}

int run_solve(const CommonArgs& args, const std::string& correction, double tol, int max_cycles,
              const std::string& out_dir) {
  const auto mode = ingest_mode(args.mode);
  const lamg::GraphLaplacian a = lamg::load_input(args.input, mode, args.seed);

  const auto t0 = std::chrono::steady_clock::now();
  const lamg::Hierarchy h = lamg::build_hierarchy(a, setup_options(args));
  const double setup_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const lamg::Vector b = lamg::make_st_rhs(h.components());
  lamg::SolveOptions opts;
  opts.tolerance = tol;
  opts.max_cycles = max_cycles;
  opts.seed = args.seed;
  opts.correction = correction == "adaptive" ? lamg::Correction::Adaptive : lamg::Correction::Flat;
  const lamg::SolveResult res = lamg::solve(h, b, {}, opts);
  const auto& rep = res.report;

  nlohmann::json j = {
      {"name", lamg::input_name(args.input)},
      {"n", a.size()},
      {"m", a.num_edges()},
      {"correction", correction},
      {"setup_seconds", setup_seconds},
      {"solve_seconds", rep.solve_seconds},
      {"cycles", rep.cycles},
      {"converged", rep.converged},
      {"acf", rep.acf},
      {"tail_acf", rep.tail_acf},
      {"work_units", rep.work_units},
      {"residual_history", rep.residual_history},
      {"hierarchy", lamg::hierarchy_to_json(h)},
  };
  if (!out_dir.empty()) write_json(out_dir, lamg::input_name(args.input) + ".solve.json", j);
  std::printf("%s: n=%d m=%zu levels=%zu cycles=%d acf=%.4f converged=%s setup=%.3fs solve=%.3fs\n",
              lamg::input_name(args.input).c_str(), a.size(), a.num_edges(), h.num_levels(),
              rep.cycles, rep.acf, rep.converged ? "yes" : "no", setup_seconds, rep.solve_seconds);
  return rep.converged ? 0 : 2;
}

int run_hierarchy(const CommonArgs& args) {
  const lamg::GraphLaplacian a =
      lamg::load_input(args.input, ingest_mode(args.mode), args.seed);
  const lamg::Hierarchy h = lamg::build_hierarchy(a, setup_options(args));
  std::cout << lamg::hierarchy_to_json(h).dump(2) << '\n';
  return 0;
}

int run_suite(const CommonArgs& args, const std::string& suite, double tol, int max_cycles,
              const std::string& out_dir) {
  std::ifstream in(suite);
  if (!in) throw lamg::Error("cannot open suite file " + suite);
  std::cout << lamg::MetricsRecord::csv_header() << '\n';
  int failures = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string input;
    std::string mode = args.mode;
    if (!(ss >> input)) continue;
    ss >> mode;

    lamg::BenchmarkConfig cfg;
    cfg.input = input;
    cfg.mode = ingest_mode(mode);
    cfg.gamma = args.gamma;
    cfg.guard = args.guard;
    cfg.seed = args.seed;
    cfg.tolerance = tol;
    cfg.max_cycles = max_cycles;
    const lamg::MetricsRecord rec = lamg::run_benchmark(cfg);
    if (!out_dir.empty()) lamg::write_record(rec, out_dir);
    std::cout << rec.csv_row() << std::endl;
    if (!rec.error.empty()) {
      std::cerr << rec.name << ": " << rec.error << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lean algebraic multigrid for graph Laplacians"};
  app.require_subcommand(1);

  CommonArgs solve_args;
  std::string correction = "flat";
  double tol = 1e-8;
  int max_cycles = 100;
  std::string out_dir;
  auto* solve_cmd = app.add_subcommand("solve", "Set up and solve an s/t system");
  add_common(solve_cmd, solve_args);
  solve_cmd->add_option("--correction", correction, "flat or adaptive")
      ->check(CLI::IsMember({"flat", "adaptive"}));
  solve_cmd->add_option("--tol", tol, "relative residual reduction");
  solve_cmd->add_option("--max-cycles", max_cycles, "cycle limit");
  solve_cmd->add_option("--out", out_dir, "directory for the JSON report");

  CommonArgs bench_args;
  std::string suite;
  std::string bench_out = "bench_out";
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark protocol over a suite file");
  add_common(bench_cmd, bench_args, false);
  bench_cmd->add_option("--suite", suite, "one input per line, optionally followed by a mode")->required();
  bench_cmd->add_option("--tol", tol, "relative residual reduction");
  bench_cmd->add_option("--max-cycles", max_cycles, "cycle limit");
  bench_cmd->add_option("--out", bench_out, "directory for JSON records and metrics.csv");

  CommonArgs hier_args;
  auto* hier_cmd = app.add_subcommand("hierarchy", "Print the level table as JSON");
  add_common(hier_cmd, hier_args);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve_cmd) return run_solve(solve_args, correction, tol, max_cycles, out_dir);
    if (*bench_cmd) return run_suite(bench_args, suite, tol, max_cycles, bench_out);
    if (*hier_cmd) return run_hierarchy(hier_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
