#include "lamg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lamg/error.hpp"
#include "lamg/generators.hpp"

namespace lamg {

namespace {

constexpr std::string_view kGenPrefix = "gen:";

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

GraphLaplacian load_input(const std::string& input, IngestMode mode, std::uint64_t seed) {
  if (input.starts_with(kGenPrefix)) return generate_from_spec(input.substr(kGenPrefix.size()), seed);
  return load_matrix_market(input, mode);
}

std::string input_name(const std::string& input) {
  std::string name = input.starts_with(kGenPrefix) ? input.substr(kGenPrefix.size())
                                                   : std::filesystem::path(input).stem().string();
  std::replace(name.begin(), name.end(), ':', '_');
  return name;
}

Vector make_st_rhs(std::span<const Index> labels) {
  Index count = 0;
  for (Index lab : labels) count = std::max(count, lab + 1);
  std::vector<Index> size(count, 0);
  std::vector<Index> first(count, -1);
  std::vector<Index> last(count, -1);
  for (std::size_t u = 0; u < labels.size(); ++u) {
    const Index lab = labels[u];
    ++size[lab];
    if (first[lab] < 0) first[lab] = static_cast<Index>(u);
    last[lab] = static_cast<Index>(u);
  }
  Index best = -1;
  for (Index m = 0; m < count; ++m) {
    if (best < 0 || size[m] > size[best] || (size[m] == size[best] && first[m] < first[best])) best = m;
  }
  if (best < 0 || size[best] < 2) throw Error("s/t right-hand side needs a component with two nodes");
  Vector b(labels.size(), 0.0);
  b[first[best]] = 1.0;
  b[last[best]] = -1.0;
  return b;
}

double solve_time_per_edge(double seconds, std::size_t m, double r0, double rp) {
  if (m == 0 || !(r0 > rp) || !(rp > 0.0)) return 0.0;
  return seconds / (static_cast<double>(m) * std::log10(r0 / rp));
}

MetricsRecord run_benchmark(const GraphLaplacian& a, const BenchmarkConfig& cfg) {
  MetricsRecord rec;
  rec.name = cfg.name.empty() ? input_name(cfg.input) : cfg.name;
  rec.n = a.size();
  rec.m = a.num_edges();
  try {
    SetupOptions so;
    so.gamma = cfg.gamma;
    so.guard = cfg.guard;
    so.seed = cfg.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const Hierarchy h = build_hierarchy(a, so);
    rec.setup_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.components = h.num_components;
    rec.levels = h.num_levels();
    rec.total_edges = h.total_edges();

    const Vector b = make_st_rhs(h.components());
    SolveOptions opts;
    opts.tolerance = cfg.tolerance;
    opts.max_cycles = cfg.max_cycles;
    opts.mu = cfg.mu;
    opts.seed = cfg.seed;

    opts.correction = Correction::Flat;
    const SolveResult flat = solve(h, b, {}, opts);
    opts.correction = Correction::Adaptive;
    const SolveResult adaptive = solve(h, b, {}, opts);

    rec.acf_flat = flat.report.acf;
    rec.acf_adaptive = adaptive.report.acf;
    rec.cycles_flat = flat.report.cycles;
    rec.cycles_adaptive = adaptive.report.cycles;
    rec.converged_flat = flat.report.converged;
    rec.converged_adaptive = adaptive.report.converged;
    rec.solve_seconds_flat = flat.report.solve_seconds;
    rec.solve_seconds_adaptive = adaptive.report.solve_seconds;

    const auto& hist = adaptive.report.residual_history;
    rec.t_setup = rec.m > 0 ? rec.setup_seconds / static_cast<double>(rec.m) : 0.0;
    rec.t_solve = solve_time_per_edge(rec.solve_seconds_adaptive, rec.m, hist.front(), hist.back());
    rec.t_total = total_time_per_edge(rec.t_setup, rec.t_solve);
    rec.gain = rec.solve_seconds_adaptive > 0.0 ? rec.solve_seconds_flat / rec.solve_seconds_adaptive : 0.0;

    if (!rec.converged_flat || !rec.converged_adaptive) {
      rec.error = std::string("did not converge within ") + std::to_string(cfg.max_cycles) +
                  " cycles (" + (rec.converged_flat ? "" : "flat") +
                  (!rec.converged_flat && !rec.converged_adaptive ? ", " : "") +
                  (rec.converged_adaptive ? "" : "adaptive") + ")";
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

MetricsRecord run_benchmark(const BenchmarkConfig& cfg) {
  GraphLaplacian a;
  try {
    a = load_input(cfg.input, cfg.mode, cfg.seed);
  } catch (const std::exception& e) {
    MetricsRecord rec;
    rec.name = cfg.name.empty() ? input_name(cfg.input) : cfg.name;
    rec.error = e.what();
    return rec;
  }
  return run_benchmark(a, cfg);
}

nlohmann::json MetricsRecord::to_json() const {
  nlohmann::json j = {
      {"name", name},
      {"n", n},
      {"m", m},
      {"M", components},
      {"L", levels},
      {"acf_flat", acf_flat},
      {"acf_adaptive", acf_adaptive},
      {"t_setup", t_setup},
      {"t_solve", t_solve},
      {"t_total", t_total},
      {"gain", gain},
      {"cycles_flat", cycles_flat},
      {"cycles_adaptive", cycles_adaptive},
      {"converged_flat", converged_flat},
      {"converged_adaptive", converged_adaptive},
      {"setup_seconds", setup_seconds},
      {"solve_seconds_flat", solve_seconds_flat},
      {"solve_seconds_adaptive", solve_seconds_adaptive},
      {"total_edges", total_edges},
  };
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string MetricsRecord::csv_header() {
  return "name,n,m,M,L,acf_flat,acf_adaptive,t_setup,t_solve,t_total,gain";
}

std::string MetricsRecord::csv_row() const {
  std::ostringstream ss;
  ss << name << ',' << n << ',' << m << ',' << components << ',' << levels << ','
     << format_double(acf_flat) << ',' << format_double(acf_adaptive) << ','
     << format_double(t_setup) << ',' << format_double(t_solve) << ','
     << format_double(t_total) << ',' << format_double(gain);
  return ss.str();
}

void write_record(const MetricsRecord& rec, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / (rec.name + ".json"));
    if (!out) throw Error("cannot write record to " + dir);
    out << rec.to_json().dump(2) << '\n';
  }
  const fs::path csv = fs::path(dir) / "metrics.csv";
  const bool fresh = !fs::exists(csv) || fs::file_size(csv) == 0;
  std::ofstream out(csv, std::ios::app);
  if (!out) throw Error("cannot append to " + csv.string());
  if (fresh) out << MetricsRecord::csv_header() << '\n';
  out << rec.csv_row() << '\n';
}

}  // namespace lamg
