#include "lamg/cycle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "lamg/coarsen.hpp"
#include "lamg/elim.hpp"
#include "lamg/error.hpp"
#include "lamg/relax.hpp"

namespace lamg {

namespace {

constexpr std::uint64_t kStartStream = 3000;
constexpr int kCoarsestMaxSweeps = 50;
constexpr double kCoarsestReduction = 0.1;
constexpr double kRankTolerance = 1e-12;

double work_weight(const Hierarchy& h, std::size_t l) {
  const double fine = static_cast<double>(std::max<std::size_t>(h.levels.front().a.num_nonzeros(), 1));
  return static_cast<double>(h.levels[l].a.num_nonzeros()) / fine;
}

}  // namespace

int take_visits(double gamma, double& credit) {
  credit += gamma;
  const int k = std::max(1, static_cast<int>(std::floor(credit + 1e-12)));
  credit -= k;
  return k;
}

Vector solve_augmented(const DirectCoarsest& d, std::span<const double> b) {
  if (b.size() != static_cast<std::size_t>(d.n)) throw Error("coarsest solve: length mismatch");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d.n + d.m);
  for (Index u = 0; u < d.n; ++u) rhs[u] = b[u];
  const Eigen::VectorXd sol = d.lu.solve(rhs);
  return Vector(sol.data(), sol.data() + d.n);
}

void coarsest_solve(const Hierarchy& h, Vector& x, std::span<const double> b, CycleState* state) {
  const Level& lev = h.coarsest();
  if (h.coarsest_solver == CoarsestSolver::Direct) {
    if (!h.direct) throw Error("coarsest solve: hierarchy has no factorization");
    x = solve_augmented(*h.direct, b);
    return;
  }
  const double weight = work_weight(h, h.levels.size() - 1);
  Vector r(lev.a.size());
  lev.a.residual(b, x, r);
  const double target = kCoarsestReduction * norm2(r);
  for (int s = 0; s < kCoarsestMaxSweeps; ++s) {
    gs_sweep(lev.a, x, b);
    lev.a.residual(b, x, r);
    if (state != nullptr) state->work += 2.0 * weight;
    if (norm2(r) <= target) break;
  }
}

Vector recombine(const GraphLaplacian& a, std::span<const double> x, std::span<const double> r,
                 const std::vector<Vector>& saved, const std::vector<Vector>& residual_of_saved) {
  (void)a;
  Vector y(x.begin(), x.end());
  const std::size_t k = std::min<std::size_t>(saved.size(), 2);
  if (k == 0) return y;
  if (residual_of_saved.size() < k) throw Error("recombine: missing saved residuals");
  const std::size_t n = x.size();

  // A (x_i - x) = r - r_i
  std::vector<Vector> ad(k, Vector(n));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t u = 0; u < n; ++u) ad[i][u] = r[u] - residual_of_saved[i][u];
  }
  double g[2][2] = {{0, 0}, {0, 0}};
  double rhs[2] = {0, 0};
  for (std::size_t i = 0; i < k; ++i) {
    rhs[i] = dot(r, ad[i]);
    for (std::size_t j = 0; j <= i; ++j) g[i][j] = g[j][i] = dot(ad[i], ad[j]);
  }
  const double max_diag = std::max(g[0][0], k > 1 ? g[1][1] : 0.0);
  if (!(max_diag > 0.0)) return y;

  double coef[2] = {0, 0};
  bool use[2] = {g[0][0] > kRankTolerance * max_diag, k > 1 && g[1][1] > kRankTolerance * max_diag};
  if (use[0] && use[1]) {
    const double det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    if (det > kRankTolerance * g[0][0] * g[1][1]) {
      coef[0] = (rhs[0] * g[1][1] - rhs[1] * g[0][1]) / det;
      coef[1] = (rhs[1] * g[0][0] - rhs[0] * g[0][1]) / det;
    } else {
      // Dependent directions: keep the one with the larger residual reduction.
      const std::size_t i = rhs[0] * rhs[0] / g[0][0] >= rhs[1] * rhs[1] / g[1][1] ? 0 : 1;
      coef[i] = rhs[i] / g[i][i];
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      if (use[i]) coef[i] = rhs[i] / g[i][i];
    }
  }

  double before = 0.0;
  double after = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    double rn = r[u];
    for (std::size_t i = 0; i < k; ++i) rn -= coef[i] * ad[i][u];
    before += r[u] * r[u];
    after += rn * rn;
  }
  if (!(after <= before)) return y;
  for (std::size_t i = 0; i < k; ++i) {
    if (coef[i] == 0.0) continue;
    for (std::size_t u = 0; u < n; ++u) y[u] += coef[i] * (saved[i][u] - x[u]);
  }
  return y;
}

Vector recombine(const GraphLaplacian& a, std::span<const double> b, std::span<const double> x,
                 const std::vector<Vector>& saved) {
  Vector r(x.size());
  a.residual(b, x, r);
  std::vector<Vector> rs;
  for (const Vector& s : saved) {
    Vector ri(x.size());
    a.residual(b, s, ri);
    rs.push_back(std::move(ri));
  }
  return recombine(a, x, r, saved, rs);
}

void orthogonalize_zero_modes(std::span<double> x, std::span<const Index> labels,
                              Index num_components, std::span<const double> alpha) {
  if (labels.size() != x.size()) throw Error("orthogonalize_zero_modes: label size mismatch");
  if (!alpha.empty() && alpha.size() != static_cast<std::size_t>(num_components)) {
    throw Error("orthogonalize_zero_modes: expected one constraint value per component");
  }
  std::vector<double> sum(num_components, 0.0);
  std::vector<double> count(num_components, 0.0);
  for (std::size_t u = 0; u < x.size(); ++u) {
    sum[labels[u]] += x[u];
    count[labels[u]] += 1.0;
  }
  std::vector<double> shift(num_components, 0.0);
  for (Index m = 0; m < num_components; ++m) {
    if (count[m] > 0.0) shift[m] = ((alpha.empty() ? 0.0 : alpha[m]) - sum[m]) / count[m];
  }
  for (std::size_t u = 0; u < x.size(); ++u) x[u] += shift[labels[u]];
}

void level_cycle(const Hierarchy& h, std::size_t l, Vector& x, std::span<const double> b,
                 const SolveOptions& opts, CycleState& state, int sub_cycles) {
  if (l + 1 >= h.levels.size()) {
    coarsest_solve(h, x, b, &state);
    return;
  }
  const Level& lev = h.levels[l];
  const Level& next = h.levels[l + 1];
  if (next.kind == LevelKind::Elim) {
    const Vector bc = elim_restrict(next.elim, b);
    Vector xc = next.elim.inject(x);
    level_cycle(h, l + 1, xc, bc, opts, state, sub_cycles);
    x = elim_correct(next.elim, xc, b);
    return;
  }

  const double weight = work_weight(h, l);
  const bool adaptive = opts.correction == Correction::Adaptive;
  std::vector<Vector> saved;
  std::vector<Vector> saved_r;
  Vector r(x.size());
  Vector bc(next.agg.n_c);
  for (int v = 0; v < sub_cycles; ++v) {
    for (int s = 0; s < lev.nu_pre; ++s) gs_sweep(lev.a, x, b);
    lev.a.residual(b, x, r);
    state.work += (lev.nu_pre + 1) * weight;
    if (adaptive && static_cast<int>(saved.size()) < opts.theta_max) {
      saved.push_back(x);
      saved_r.push_back(r);
    }
    agg_restrict(next.agg, opts.mu, r, bc);
    Vector ec(next.agg.n_c, 0.0);
    level_cycle(h, l + 1, ec, bc, opts, state, take_visits(lev.gamma, state.credit[l]));
    agg_correct(next.agg, x, ec);
    for (int s = 0; s < lev.nu_post; ++s) gs_sweep(lev.a, x, b);
    state.work += lev.nu_post * weight;
  }
  if (adaptive && !saved.empty() && l != state.top) {
    lev.a.residual(b, x, r);
    state.work += weight;
    x = recombine(lev.a, x, r, saved, saved_r);
  }
}

SolveResult solve(const Hierarchy& h, std::span<const double> b, std::span<const double> alpha,
                  const SolveOptions& opts) {
  if (h.levels.empty()) throw Error("solve: empty hierarchy");
  if (!(opts.tolerance > 0.0 && opts.tolerance < 1.0)) throw Error("solve: tolerance must lie in (0, 1)");
  if (opts.theta_max < 1 || opts.theta_max > 2) throw Error("solve: theta_max must be 1 or 2");
  const Level& fine = h.finest();
  const Index n = fine.a.size();
  if (b.size() != static_cast<std::size_t>(n)) {
    throw Error("solve: right-hand side has length " + std::to_string(b.size()) + ", expected " +
                std::to_string(n));
  }
  if (!alpha.empty() && alpha.size() != static_cast<std::size_t>(h.num_components)) {
    throw Error("solve: expected one constraint value per component");
  }
  {
    std::vector<double> sums(h.num_components, 0.0);
    for (Index u = 0; u < n; ++u) sums[fine.labels[u]] += b[u];
    const double tol = 1e-8 * norm2(b);
    for (Index m = 0; m < h.num_components; ++m) {
      if (std::abs(sums[m]) > tol) {
        throw Error("solve: incompatible right-hand side, component " + std::to_string(m) +
                    " sums to " + std::to_string(sums[m]));
      }
    }
  }

  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  SolveReport& rep = result.report;

  Vector x0 = test_vector_start(n, opts.seed, -1 - static_cast<int>(kStartStream));
  const bool elim_top = h.levels.size() > 1 && h.levels[1].kind == LevelKind::Elim;
  const std::size_t top = elim_top ? 1 : 0;
  const Level& top_level = h.levels[top];
  Vector b_top;
  Vector x_top;
  if (elim_top) {
    b_top = elim_restrict(top_level.elim, b);
    x_top = top_level.elim.inject(x0);
  } else {
    b_top.assign(b.begin(), b.end());
    x_top = x0;
  }

  // r0 is measured at the raw start; reconstruction through the Elim level
  // belongs to the first cycle.
  Vector x = x0;
  Vector r(n);
  fine.a.residual(b, x, r);
  const double r0 = norm2(r);
  rep.residual_history.push_back(r0);

  CycleState state;
  const std::span<const double> top_alpha = elim_top ? std::span<const double>{} : alpha;
  double current = r0;
  state.credit.assign(h.levels.size(), 0.0);
  state.top = top;
  while (current > opts.tolerance * r0 && rep.cycles < opts.max_cycles) {
    level_cycle(h, top, x_top, b_top, opts, state, 1);
    orthogonalize_zero_modes(x_top, top_level.labels, h.num_components, top_alpha);
    x = elim_top ? elim_correct(top_level.elim, x_top, b) : x_top;
    fine.a.residual(b, x, r);
    state.work += 1.0;
    current = norm2(r);
    rep.residual_history.push_back(current);
    ++rep.cycles;
  }
  rep.converged = current <= opts.tolerance * r0;
  orthogonalize_zero_modes(x, fine.labels, h.num_components, alpha);

  rep.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.work_units = state.work;
  const int p = rep.cycles;
  if (p > 0 && r0 > 0.0) {
    rep.acf = std::pow(current / r0, 1.0 / p);
    const int tail = std::min(p, 5);
    const double from = rep.residual_history[p - tail];
    rep.tail_acf = from > 0.0 ? std::pow(current / from, 1.0 / tail) : 0.0;
  }
  result.x = std::move(x);
  return result;
}

}  // namespace lamg
