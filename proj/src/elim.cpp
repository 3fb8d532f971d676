#include "lamg/elim.hpp"

#include <cmath>
#include <utility>

#include "lamg/error.hpp"

namespace lamg {

namespace {

enum class Mark : unsigned char { Unvisited, Eliminated, Kept };

bool safely_positive_diagonal(const GraphLaplacian& a, Index u) {
  double abs_sum = 0.0;
  for (double w : a.weights(u)) abs_sum += std::abs(w);
  return a.diagonal(u) > 1e-12 * abs_sum;
}

struct StageOutput {
  EliminationStage stage;
  GraphLaplacian coarse;
};

StageOutput eliminate_stage(const GraphLaplacian& a, std::vector<Index> z_set,
                            std::vector<Index> f_set) {
  const Index n = a.size();
  std::vector<char> role(n, 'C');
  for (Index z : z_set) role[z] = 'Z';
  for (Index f : f_set) role[f] = 'F';

  EliminationStage st;
  st.n_in = n;
  for (Index u = 0; u < n; ++u) {
    if (role[u] == 'C') st.c_set.push_back(u);
  }
  if (st.c_set.empty()) {
    // Only isolated nodes remain; keep one so the coarse level is non-empty.
    st.c_set.push_back(z_set.back());
    role[z_set.back()] = 'C';
    z_set.pop_back();
  }
  st.z_set = std::move(z_set);
  st.f_set = std::move(f_set);

  std::vector<Index> coarse_index(n, -1);
  for (std::size_t k = 0; k < st.c_set.size(); ++k) coarse_index[st.c_set[k]] = static_cast<Index>(k);
  const auto n_c = static_cast<Index>(st.c_set.size());

  // Stage interpolation.
  st.interp.rows = n;
  st.interp.cols = n_c;
  st.interp.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index u = 0; u < n; ++u) {
    if (role[u] == 'C') {
      st.interp.col.push_back(coarse_index[u]);
      st.interp.val.push_back(1.0);
    } else if (role[u] == 'F') {
      const double d = a.diagonal(u);
      auto nbrs = a.neighbors(u);
      auto w = a.weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        st.interp.col.push_back(coarse_index[nbrs[k]]);
        st.interp.val.push_back(w[k] / d);
      }
    }
    st.interp.row_ptr[u + 1] = st.interp.col.size();
  }
  st.f_diag.reserve(st.f_set.size());
  for (Index f : st.f_set) st.f_diag.push_back(a.diagonal(f));

  // Schur complement A_CC - A_CF A_FF^{-1} A_FC, expressed through edge weights.
  std::vector<Edge> edges;
  edges.reserve(a.num_edges() * 2);
  for (Index u : st.c_set) {
    auto nbrs = a.neighbors(u);
    auto w = a.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Index v = nbrs[k];
      if (v > u && role[v] == 'C') edges.push_back({coarse_index[u], coarse_index[v], w[k]});
    }
  }
  for (Index f : st.f_set) {
    const double d = a.diagonal(f);
    auto nbrs = a.neighbors(f);
    auto w = a.weights(f);
    for (std::size_t p = 0; p < nbrs.size(); ++p) {
      for (std::size_t q = p + 1; q < nbrs.size(); ++q) {
        edges.push_back({coarse_index[nbrs[p]], coarse_index[nbrs[q]], w[p] * w[q] / d});
      }
    }
  }
  return {std::move(st), GraphLaplacian::from_summed_edges(n_c, std::move(edges), 1e-13)};
}

}  // namespace

std::vector<Index> select_low_degree(const GraphLaplacian& a) {
  const Index n = a.size();
  std::vector<Mark> mark(n, Mark::Unvisited);
  std::vector<Index> f_set;
  for (Index u = 0; u < n; ++u) {
    const Index deg = a.degree(u);
    if (deg < 1 || deg > kMaxElimDegree || mark[u] != Mark::Unvisited) continue;
    bool has_f_neighbor = false;
    for (Index v : a.neighbors(u)) {
      if (mark[v] == Mark::Eliminated) {
        has_f_neighbor = true;
        break;
      }
    }
    if (has_f_neighbor || !safely_positive_diagonal(a, u)) {
      mark[u] = Mark::Kept;
      continue;
    }
    mark[u] = Mark::Eliminated;
    f_set.push_back(u);
    for (Index v : a.neighbors(u)) mark[v] = Mark::Kept;
  }
  return f_set;
}

EliminationResult eliminate(const GraphLaplacian& a) {
  EliminationResult result;
  ElimTransfer& t = result.transfer;
  t.n_fine = a.size();
  t.coarse_to_fine.resize(a.size());
  for (Index u = 0; u < a.size(); ++u) t.coarse_to_fine[u] = u;

  GraphLaplacian current = a;
  while (current.size() > 1) {
    std::vector<Index> z_set;
    for (Index u = 0; u < current.size(); ++u) {
      if (current.degree(u) == 0) z_set.push_back(u);
    }
    std::vector<Index> f_set = select_low_degree(current);
    if (z_set.empty() &&
        static_cast<double>(f_set.size()) < kMinElimFraction * current.size()) {
      break;
    }
    StageOutput out = eliminate_stage(current, std::move(z_set), std::move(f_set));

    std::vector<Index> survivors;
    survivors.reserve(out.stage.c_set.size());
    for (Index c : out.stage.c_set) survivors.push_back(t.coarse_to_fine[c]);
    t.coarse_to_fine = std::move(survivors);

    t.composite_p = t.stages.empty() ? out.stage.interp : t.composite_p.product(out.stage.interp);
    t.stages.push_back(std::move(out.stage));
    current = std::move(out.coarse);
  }

  t.n_coarse = current.size();
  if (t.stages.empty()) t.composite_p = SparseMatrix::identity(a.size());
  result.eliminated_any = !t.stages.empty();
  result.coarse = std::move(current);
  return result;
}

Vector ElimTransfer::apply_q(std::span<const double> b) const {
  const Vector zero(n_coarse, 0.0);
  return elim_correct(*this, zero, b);
}

Vector ElimTransfer::inject(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_fine)) throw Error("inject: length mismatch");
  Vector xc(n_coarse);
  for (Index k = 0; k < n_coarse; ++k) xc[k] = x[coarse_to_fine[k]];
  return xc;
}

Vector elim_restrict(const ElimTransfer& t, std::span<const double> b) {
  if (b.size() != static_cast<std::size_t>(t.n_fine)) {
    throw Error("elim_restrict: expected length " + std::to_string(t.n_fine) + ", got " +
                std::to_string(b.size()));
  }
  Vector bc(t.n_coarse);
  t.composite_p.multiply_transpose(b, bc);
  return bc;
}

Vector elim_correct(const ElimTransfer& t, std::span<const double> x_c, std::span<const double> b) {
  if (b.size() != static_cast<std::size_t>(t.n_fine) ||
      x_c.size() != static_cast<std::size_t>(t.n_coarse)) {
    throw Error("elim_correct: vector length mismatch");
  }
  if (t.stages.empty()) return Vector(x_c.begin(), x_c.end());

  // Right-hand sides seen by each stage: b_0 = b, b_i = P_i^T b_{i-1}.
  std::vector<Vector> rhs(t.stages.size());
  rhs[0].assign(b.begin(), b.end());
  for (std::size_t i = 1; i < t.stages.size(); ++i) {
    rhs[i].resize(t.stages[i].n_in);
    t.stages[i - 1].interp.multiply_transpose(rhs[i - 1], rhs[i]);
  }

  Vector y(x_c.begin(), x_c.end());
  for (std::size_t s = t.stages.size(); s-- > 0;) {
    const EliminationStage& st = t.stages[s];
    Vector prev(st.n_in);
    st.interp.multiply(y, prev);
    for (std::size_t k = 0; k < st.f_set.size(); ++k) {
      const Index f = st.f_set[k];
      prev[f] += rhs[s][f] / st.f_diag[k];
    }
    y = std::move(prev);
  }
  return y;
}

}  // namespace lamg
