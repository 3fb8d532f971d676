#include "lamg/setup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lamg/error.hpp"
#include "lamg/relax.hpp"

namespace lamg {

namespace {

constexpr std::uint64_t kProbeStream = 1000;
constexpr std::uint64_t kTestVectorStream = 2000;

bool fast_relaxation(double rho, double guard) { return rho >= 0.0 && rho <= guard; }

}  // namespace

std::string level_kind_name(LevelKind kind) {
  switch (kind) {
    case LevelKind::Finest: return "finest";
    case LevelKind::Elim: return "elim";
    case LevelKind::Agg: return "agg";
  }
  return "unknown";
}

std::size_t Hierarchy::total_edges() const {
  std::size_t total = 0;
  for (const Level& l : levels) total += l.a.num_edges();
  return total;
}

Hierarchy build_hierarchy(const GraphLaplacian& a, const SetupOptions& opts) {
  if (a.size() < 1) throw Error("build_hierarchy: empty graph");
  if (!(opts.gamma >= 1.0)) throw Error("build_hierarchy: gamma must be >= 1");
  if (!(opts.guard > 0.0 && opts.guard < 1.0)) throw Error("build_hierarchy: guard must lie in (0, 1)");
  if (opts.max_levels < 1) throw Error("build_hierarchy: max_levels must be positive");

  Hierarchy h;
  h.levels.emplace_back();
  h.levels.back().a = a;

  AggregationOptions agg_opts = opts.aggregation;
  agg_opts.alpha_max = opts.guard / opts.gamma;

  int agg_levels = 0;
  bool relax_fast = false;
  while (true) {
    if (static_cast<int>(h.levels.size()) >= opts.max_levels) {
      h.stop_reason = "max-levels";
      break;
    }
    const auto depth = static_cast<std::uint64_t>(h.levels.size() - 1);
    {
      Level& cur = h.levels.back();
      if (!cur.a.has_isolated_nodes()) {
        cur.rho = estimate_relaxation_acf(cur.a, mix_seed(opts.seed, kProbeStream + depth));
        if (fast_relaxation(cur.rho, opts.guard)) {
          relax_fast = true;
          h.stop_reason = "fast-relaxation";
          break;
        }
      }
    }

    EliminationResult er = eliminate(h.levels.back().a);
    if (er.eliminated_any) {
      Level next;
      next.kind = LevelKind::Elim;
      next.a = std::move(er.coarse);
      next.elim = std::move(er.transfer);
      h.levels.push_back(std::move(next));
      if (static_cast<int>(h.levels.size()) >= opts.max_levels) {
        h.stop_reason = "max-levels";
        break;
      }
    }
    Level& cur = h.levels.back();
    if (cur.a.size() <= opts.coarsest_size) {
      h.stop_reason = "coarsest-size";
      break;
    }

    const int k = opts.tv_count + agg_levels;
    const TestVectorSet tv = generate_test_vectors(
        cur.a, k, opts.tv_sweeps, mix_seed(opts.seed, kTestVectorStream + h.levels.size() - 1));
    AggregationResult ar = aggregate(cur.a, tv, agg_opts);
    if (ar.assignment.n_c >= cur.a.size()) {
      h.stop_reason = "no-progress";
      break;
    }
    cur.tv_count = k;
    Level next;
    next.kind = LevelKind::Agg;
    next.agg = make_agg_transfer(ar.assignment);
    next.a = galerkin_coarsen(cur.a, next.agg);
    next.alpha = ar.alpha;
    h.levels.push_back(std::move(next));
    ++agg_levels;
  }

  const Level& last = h.levels.back();
  h.coarsest_solver = relax_fast && !last.a.has_isolated_nodes() ? CoarsestSolver::Relaxation
                                                                 : CoarsestSolver::Direct;
  assign_cycle_params(h, opts.gamma, opts.guard, opts.gamma_formula, opts.gamma_edge_fraction);
  assemble_components(h);
  if (h.coarsest_solver == CoarsestSolver::Direct) {
    h.direct = factor_coarsest(last.a, last.labels);
  }
  return h;
}

void assign_cycle_params(Hierarchy& h, double gamma, double guard, GammaFormula formula,
                         double edge_fraction) {
  if (h.levels.empty()) return;
  const double finest_edges = static_cast<double>(h.levels.front().a.num_edges());
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    Level& lev = h.levels[l];
    if (l + 1 == h.levels.size()) {
      lev.gamma = 1.0;
      lev.nu_pre = 0;
      lev.nu_post = 0;
      continue;
    }
    const Level& next = h.levels[l + 1];
    if (next.kind == LevelKind::Elim) {
      lev.gamma = 1.0;
      lev.nu_pre = 0;
      lev.nu_post = 0;
      continue;
    }
    lev.nu_pre = 1;
    lev.nu_post = 2;
    const double e_l = static_cast<double>(lev.a.num_edges());
    const double e_next = static_cast<double>(next.a.num_edges());
    if (e_l > edge_fraction * finest_edges) {
      lev.gamma = gamma;
    } else if (e_l == 0.0 || e_next == 0.0) {
      lev.gamma = 2.0;
    } else {
      const double ratio = formula == GammaFormula::EdgeRatio ? e_l / e_next : e_next / e_l;
      lev.gamma = std::min(2.0, guard * ratio);
    }
    lev.gamma = std::max(1.0, lev.gamma);
  }
}

std::vector<Index> connected_components(const GraphLaplacian& a, Index* count) {
  const Index n = a.size();
  std::vector<Index> label(n, -1);
  std::vector<Index> stack;
  Index next = 0;
  for (Index root = 0; root < n; ++root) {
    if (label[root] >= 0) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v : a.neighbors(u)) {
        if (label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return label;
}

void assemble_components(Hierarchy& h) {
  if (h.levels.empty()) return;
  Index next_label = 0;
  h.levels.back().labels = connected_components(h.levels.back().a, &next_label);

  for (std::size_t l = h.levels.size() - 1; l > 0; --l) {
    const Level& coarse = h.levels[l];
    Level& fine = h.levels[l - 1];
    const Index n = fine.a.size();
    if (coarse.kind == LevelKind::Agg) {
      fine.labels.resize(n);
      for (Index u = 0; u < n; ++u) fine.labels[u] = coarse.labels[coarse.agg.seed_of[u]];
      continue;
    }
    // Walk the elimination stages from the last back to the first.
    std::vector<Index> out = coarse.labels;
    const auto& stages = coarse.elim.stages;
    for (std::size_t s = stages.size(); s-- > 0;) {
      const EliminationStage& st = stages[s];
      std::vector<Index> in(st.n_in, -1);
      for (std::size_t k = 0; k < st.c_set.size(); ++k) in[st.c_set[k]] = out[k];
      for (Index f : st.f_set) {
        in[f] = out[st.interp.col[st.interp.row_ptr[f]]];
      }
      for (Index z : st.z_set) in[z] = next_label++;
      out = std::move(in);
    }
    fine.labels = std::move(out);
  }

  // Renumber by smallest finest member so labels are deterministic and compact.
  std::vector<Index> remap(next_label, -1);
  Index count = 0;
  for (Index lab : h.levels.front().labels) {
    if (remap[lab] < 0) remap[lab] = count++;
  }
  for (Level& lev : h.levels) {
    for (Index& lab : lev.labels) lab = remap[lab];
  }
  h.num_components = count;
}

std::shared_ptr<const DirectCoarsest> factor_coarsest(const GraphLaplacian& a,
                                                      std::span<const Index> labels) {
  const Index n = a.size();
  if (labels.size() != static_cast<std::size_t>(n)) throw Error("factor_coarsest: label size mismatch");
  auto d = std::make_shared<DirectCoarsest>();
  d->n = n;
  d->component.assign(n, -1);
  std::vector<Index> local(n > 0 ? *std::max_element(labels.begin(), labels.end()) + 1 : 0, -1);
  for (Index u = 0; u < n; ++u) {
    Index& m = local[labels[u]];
    if (m < 0) m = d->m++;
    d->component[u] = m;
  }
  const Index size = n + d->m;
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(size, size);
  for (Index u = 0; u < n; ++u) {
    aug(u, u) = a.diagonal(u);
    auto nbrs = a.neighbors(u);
    auto w = a.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) aug(u, nbrs[k]) = -w[k];
    aug(u, n + d->component[u]) = 1.0;
    aug(n + d->component[u], u) = 1.0;
  }
  d->lu.compute(aug);
  const double scale = aug.cwiseAbs().maxCoeff();
  const Eigen::VectorXd diag = d->lu.matrixLU().diagonal();
  if (size > 0 && diag.cwiseAbs().minCoeff() <= 1e-13 * std::max(scale, 1.0)) {
    throw Error("coarsest augmented system is singular");
  }
  return d;
}

nlohmann::json hierarchy_to_json(const Hierarchy& h) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    const Level& lev = h.levels[l];
    const double n = lev.a.size();
    const double m = static_cast<double>(lev.a.num_edges());
    nlohmann::json row = {
        {"level", l + 1},
        {"kind", level_kind_name(lev.kind)},
        {"n", lev.a.size()},
        {"m", lev.a.num_edges()},
        {"mean_degree", n > 0 ? 2.0 * m / n : 0.0},
        {"gamma", lev.gamma},
        {"nu_pre", lev.nu_pre},
        {"nu_post", lev.nu_post},
        {"K", lev.tv_count},
    };
    if (lev.rho >= 0.0) row["rho"] = lev.rho;
    if (lev.kind == LevelKind::Agg) row["alpha"] = lev.alpha;
    levels.push_back(std::move(row));
  }
  return {
      {"levels", std::move(levels)},
      {"components", h.num_components},
      {"coarsest_solver", h.coarsest_solver == CoarsestSolver::Direct ? "direct" : "relaxation"},
      {"stop_reason", h.stop_reason},
      {"total_edges", h.total_edges()},
  };
}

}  // namespace lamg
