#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lamg/cycle.hpp"
#include "lamg/error.hpp"
#include "lamg/generators.hpp"
#include "lamg/setup.hpp"
#include "support.hpp"

using namespace lamg;

namespace {

double relative_a_error(const GraphLaplacian& a, const Vector& x, const Vector& b) {
  auto d = testing::dense(a);
  Eigen::VectorXd xs = testing::pinv_solve(d, testing::to_eigen(b));
  return testing::a_norm(d, testing::to_eigen(x) - xs) / testing::a_norm(d, xs);
}

std::vector<double> component_sums(const Vector& x, const std::vector<Index>& labels, Index m) {
  std::vector<double> s(m, 0.0);
  for (std::size_t u = 0; u < x.size(); ++u) s[labels[u]] += x[u];
  return s;
}

}  // namespace

TEST_CASE("cycle index credit") {
  double credit = 0.0;
  std::vector<int> visits;
  for (int i = 0; i < 8; ++i) visits.push_back(take_visits(1.5, credit));
  CHECK(visits == std::vector<int>{1, 2, 1, 2, 1, 2, 1, 2});
  credit = 0.0;
  for (int i = 0; i < 5; ++i) CHECK(take_visits(1.0, credit) == 1);
  credit = 0.0;
  int total = 0;
  for (int i = 0; i < 1000; ++i) total += take_visits(1.3, credit);
  CHECK(total == 1300);
}

TEST_CASE("pseudo-inverse oracle") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    Rng rng(s);
    Index n = 20 + static_cast<Index>(rng.below(41));
    auto a = s % 3 == 2 ? testing::mixed_sign_graph(n, s) : random_connected_graph(n, n, s);
    Vector b = testing::compatible_rhs(std::vector<Index>(n, 0), rng);
    for (Index cs : {150, 8}) {
      SetupOptions so;
      so.coarsest_size = cs;
      auto h = build_hierarchy(a, so);
      for (auto corr : {Correction::Flat, Correction::Adaptive}) {
        SolveOptions o;
        o.correction = corr;
        auto res = solve(h, b, {}, o);
        CAPTURE(s);
        CAPTURE(cs);
        CHECK(res.report.converged);
        CHECK(relative_a_error(a, res.x, b) <= 1e-6);
        double mean = 0.0;
        for (double v : res.x) mean += v;
        CHECK(std::abs(mean) <= 1e-10 * n);
      }
    }
  }
}

TEST_CASE("zero right-hand side") {
  auto a = random_connected_graph(40, 40, 3);
  auto h = build_hierarchy(a);
  auto res = solve(h, Vector(40, 0.0), {});
  CHECK(res.report.converged);
  for (double v : res.x) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("incompatible right-hand side is rejected") {
  auto h = build_hierarchy(path_graph(10));
  Vector b(10, 0.0);
  b[0] = 1.0;
  CHECK_THROWS_AS(solve(h, b, {}), Error);
}

TEST_CASE("constraints and residual on multi-component grids") {
  auto a = testing::shuffled_union({generate_grid(Stencil::FivePoint, 20, 20), path_graph(30),
                                    random_connected_graph(60, 90, 5)},
                                   0, 11);
  auto h = build_hierarchy(a);
  REQUIRE(h.num_components == 3);
  Rng rng(2);
  Vector b = testing::compatible_rhs(h.components(), rng);
  Vector alpha{0.5, -2.0, 3.25};
  for (auto corr : {Correction::Flat, Correction::Adaptive}) {
    SolveOptions o;
    o.correction = corr;
    auto res = solve(h, b, alpha, o);
    REQUIRE(res.report.converged);
    Vector r(a.size());
    a.residual(b, res.x, r);
    CHECK(norm2(r) <= o.tolerance * res.report.residual_history.front() * (1 + 1e-6));
    auto sums = component_sums(res.x, h.components(), 3);
    for (int m = 0; m < 3; ++m) CHECK(sums[m] == doctest::Approx(alpha[m]).epsilon(1e-10));
  }
}

TEST_CASE("same seed, same residual history") {
  auto a = generate_grid(Stencil::FivePoint, 48, 48);
  auto h = build_hierarchy(a);
  Vector b(a.size(), 0.0);
  b.front() = 1.0;
  b.back() = -1.0;
  SolveOptions o;
  o.correction = Correction::Adaptive;
  auto r1 = solve(h, b, {}, o);
  auto r2 = solve(h, b, {}, o);
  CHECK(r1.report.residual_history == r2.report.residual_history);
  CHECK(r1.x == r2.x);
}

TEST_CASE("grid solves converge with bounded work") {
  auto a = generate_grid(Stencil::FivePoint, 64, 64);
  auto h = build_hierarchy(a);
  Vector b(a.size(), 0.0);
  b.front() = 1.0;
  b.back() = -1.0;
  for (auto corr : {Correction::Flat, Correction::Adaptive}) {
    SolveOptions o;
    o.correction = corr;
    auto res = solve(h, b, {}, o);
    CHECK(res.report.converged);
    CHECK(res.report.acf < 0.4);
    CHECK(res.report.work_units / res.report.cycles <= 3.0 / (1.0 - 0.7) + 2.0);
  }
}

TEST_CASE("relaxation-only hierarchy") {
  auto a = complete_graph(50);
  auto h = build_hierarchy(a);
  REQUIRE(h.coarsest_solver == CoarsestSolver::Relaxation);
  Rng rng(1);
  Vector b = testing::compatible_rhs(std::vector<Index>(50, 0), rng);
  auto res = solve(h, b, {});
  CHECK(res.report.converged);
  CHECK(relative_a_error(a, res.x, b) < 1e-6);
}

TEST_CASE("recombination") {
  auto a = random_connected_graph(30, 30, 8);
  auto d = testing::dense(a);
  Rng rng(8);
  Vector b = testing::compatible_rhs(std::vector<Index>(30, 0), rng);
  Vector x = testing::random_vector(30, rng);
  Vector r(30);
  a.residual(b, x, r);

  SUBCASE("saved iterant equal to x") {
    CHECK(recombine(a, b, x, {x}) == x);
  }
  SUBCASE("single direction") {
    Vector x1 = testing::random_vector(30, rng);
    Eigen::VectorXd dir = testing::to_eigen(x1) - testing::to_eigen(x);
    Eigen::VectorXd ad = d * dir;
    double alpha = testing::to_eigen(r).dot(ad) / ad.dot(ad);
    Eigen::VectorXd ref = testing::to_eigen(x) + alpha * dir;
    Vector y = recombine(a, b, x, {x1});
    for (int u = 0; u < 30; ++u) CHECK(y[u] == doctest::Approx(ref(u)).epsilon(1e-10));
  }
  SUBCASE("two directions") {
    Vector x1 = testing::random_vector(30, rng), x2 = testing::random_vector(30, rng);
    Eigen::MatrixXd dirs(30, 2);
    dirs.col(0) = testing::to_eigen(x1) - testing::to_eigen(x);
    dirs.col(1) = testing::to_eigen(x2) - testing::to_eigen(x);
    Eigen::MatrixXd ad = d * dirs;
    Eigen::VectorXd coef = ad.colPivHouseholderQr().solve(testing::to_eigen(r));
    Eigen::VectorXd ref = testing::to_eigen(x) + dirs * coef;
    Vector y = recombine(a, b, x, {x1, x2});
    for (int u = 0; u < 30; ++u) CHECK(y[u] == doctest::Approx(ref(u)).epsilon(1e-9));
  }
  SUBCASE("dependent directions") {
    Vector x1 = testing::random_vector(30, rng), x2(30);
    for (int u = 0; u < 30; ++u) x2[u] = x[u] + 2.0 * (x1[u] - x[u]);
    Vector y = recombine(a, b, x, {x1, x2});
    Vector ry(30);
    a.residual(b, y, ry);
    CHECK(norm2(ry) <= norm2(r));
  }
}

TEST_CASE("zero-mode orthogonalization") {
  Rng rng(4);
  SUBCASE("single component") {
    Vector x = testing::random_vector(20, rng);
    orthogonalize_zero_modes(x, std::vector<Index>(20, 0), 1);
    double s = 0.0;
    for (double v : x) s += v;
    CHECK(std::abs(s) < 1e-13);
    Vector y = x;
    orthogonalize_zero_modes(y, std::vector<Index>(20, 0), 1);
    for (int u = 0; u < 20; ++u) CHECK(y[u] == doctest::Approx(x[u]).epsilon(1e-14));
  }
  SUBCASE("three components with targets") {
    std::vector<Index> labels(30);
    for (int u = 0; u < 30; ++u) labels[u] = static_cast<Index>(rng.below(3));
    labels[0] = 0, labels[1] = 1, labels[2] = 2;
    Vector x = testing::random_vector(30, rng);
    Vector alpha{rng.symmetric(), rng.symmetric(), rng.symmetric()};
    orthogonalize_zero_modes(x, labels, 3, alpha);
    auto s = component_sums(x, labels, 3);
    for (int m = 0; m < 3; ++m) CHECK(std::abs(s[m] - alpha[m]) <= 1e-12 * 30);
  }
}

TEST_CASE("augmented direct solve") {
  SUBCASE("two nodes") {
    auto a = path_graph(2);
    auto d = factor_coarsest(a, std::vector<Index>{0, 0});
    Vector x = solve_augmented(*d, Vector{1, -1});
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(-0.5));
    Vector z = solve_augmented(*d, Vector{0, 0});
    CHECK(z == Vector{0, 0});
  }
  SUBCASE("two components") {
    auto a = testing::shuffled_union({random_connected_graph(10, 10, 1), random_connected_graph(7, 4, 2)}, 0, 3);
    auto labels = connected_components(a);
    auto d = factor_coarsest(a, labels);
    Rng rng(5);
    Vector b = testing::compatible_rhs(labels, rng);
    Vector x = solve_augmented(*d, b);
    auto s = component_sums(x, labels, 2);
    CHECK(std::abs(s[0]) < 1e-12);
    CHECK(std::abs(s[1]) < 1e-12);
    Vector r(17);
    a.residual(b, x, r);
    CHECK(norm2(r) < 1e-12);
  }
}
