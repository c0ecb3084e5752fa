#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gmg/spectral.hpp"

using namespace gmg;

namespace {

const double kPi = std::acos(-1.0);

Multigraph petersen() {
  std::vector<std::array<std::int64_t, 3>> edges;
  for (std::int64_t i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1});
    edges.push_back({5 + i, 5 + (i + 2) % 5, 1});
    edges.push_back({i, 5 + i, 1});
  }
  return Multigraph::from_edges(10, edges);
}

Eigen::MatrixXd dense_normalized(const Multigraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  double d = static_cast<double>(*g.regular_degree());
  for (Vertex u = 0; u < g.n(); ++u)
    for (const auto& [v, m] : g.row(u)) a(u, v) = static_cast<double>(m) / d;
  return a;
}

}  // namespace

TEST_CASE("spectrum closed forms") {
  auto c4 = spectrum(cycle_graph(4));
  CHECK(c4[0] == doctest::Approx(1.0));
  CHECK(c4[1] == doctest::Approx(0.0));
  CHECK(c4[2] == doctest::Approx(0.0));
  CHECK(c4[3] == doctest::Approx(-1.0));

  auto k4 = spectrum(complete_graph(4));
  CHECK(k4[0] == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) CHECK(k4[i] == doctest::Approx(-1.0 / 3.0));

  for (double lam : spectrum(all_loops_graph(5, 3))) CHECK(lam == doctest::Approx(1.0));
}

TEST_CASE("spectrum requires a regular graph") {
  auto path = Multigraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK_THROWS_WITH_AS(spectrum(path), "non-regular input", std::invalid_argument);
}

TEST_CASE("line gamma closed forms") {
  auto c9 = cycle_graph(9);
  CHECK(gamma_line(c9) == doctest::Approx(1.0 / (1.0 - std::cos(2.0 * kPi / 9.0))));
  double gp = gamma_plus_line(c9);
  CHECK(gp == doctest::Approx(1.0 / (1.0 - std::cos(kPi / 9.0))));
  CHECK(gp == doctest::Approx(16.58).epsilon(1e-3));
  CHECK(gp <= 648.0);

  CHECK(gamma_line(complete_graph(4)) == doctest::Approx(0.75));

  auto two = Multigraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}});
  CHECK_THROWS_AS(gamma_line(two), std::invalid_argument);
  CHECK_THROWS_AS(gamma_plus_line(cycle_graph(4)), std::invalid_argument);  // lambda_n = -1
}

TEST_CASE("poincare_ratio basics") {
  auto k4 = complete_graph(4);
  auto X = FiniteMetric::two_point(1.0);
  CHECK(poincare_ratio(k4, X, {0, 0, 0, 0}) == 0.0);
  CHECK(poincare_ratio(k4, X, {0, 0, 1, 1}) == doctest::Approx(0.75));
}

TEST_CASE("second eigenvector attains the line gamma") {
  for (auto g : {cycle_graph(9), petersen(), looped_cycle_graph(5), complete_graph(4)}) {
    auto [l2, v2] = second_eigenpair(g);
    (void)l2;
    CHECK(poincare_ratio_real(g, v2) == doctest::Approx(gamma_line(g)).epsilon(1e-9));
  }
}

TEST_CASE("random real maps never beat the line gamma") {
  for (auto g : {cycle_graph(9), looped_cycle_graph(5)}) {
    double cap = gamma_line(g);
    double cap_plus = gamma_plus_line(g);
    auto rng = make_rng(7, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
      std::vector<double> f(g.n()), h(g.n());
      for (auto& x : f) x = gauss(rng);
      for (auto& x : h) x = gauss(rng);
      CHECK(poincare_ratio_real(g, f) <= cap + 1e-9);
      CHECK(ratio_plus_real(g, f, h) <= cap_plus + 1e-9);
    }
  }
}

TEST_CASE("negative eigenvector pair attains the plus gamma") {
  auto g = cycle_graph(9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_normalized(g));
  Eigen::VectorXd vn = es.eigenvectors().col(0);  // most negative eigenvalue
  std::vector<double> f(vn.data(), vn.data() + g.n()), h(g.n());
  for (std::int64_t i = 0; i < g.n(); ++i) h[i] = -f[i];
  CHECK(ratio_plus_real(g, f, h) == doctest::Approx(gamma_plus_line(g)).epsilon(1e-9));
}

TEST_CASE("edge average never exceeds four times the full average") {
  // Ratio >= 1/4 for every map whose image has >= 2 points; constants give 0.
  auto rng = make_rng(11, 2);
  auto X = FiniteMetric::from_points_l1({{0, 0}, {1, 0}, {1, 2}, {4, 1}});
  for (auto g : {cycle_graph(7), petersen(), looped_cycle_graph(4)}) {
    std::uniform_int_distribution<std::int64_t> label(0, X.n - 1);
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<std::int64_t> f(g.n());
      for (auto& x : f) x = label(rng);
      double r = poincare_ratio(g, X, f);
      CHECK((r == 0.0 || r >= 0.25 - 1e-12));
    }
  }
}

TEST_CASE("exhaustive two-point search matches the cut oracle") {
  for (auto g : {cycle_graph(5), complete_graph(4), petersen()}) {
    auto rep = gamma_search(g, FiniteMetric::two_point(1.0), SearchMode::exhaustive);
    CHECK(rep.exact);
    CHECK(rep.gamma_estimate == doctest::Approx(gamma_cut_exact(g)).epsilon(1e-12));
  }
}

TEST_CASE("cut ratio is invariant under the two-point scale") {
  auto g = petersen();
  auto a = gamma_search(g, FiniteMetric::two_point(1.0), SearchMode::exhaustive);
  auto b = gamma_search(g, FiniteMetric::two_point(3.5), SearchMode::exhaustive);
  CHECK(a.gamma_estimate == doctest::Approx(b.gamma_estimate).epsilon(1e-12));
}

TEST_CASE("exhaustive search equals independent brute force on C_6 into a 3-point path") {
  auto g = cycle_graph(6);
  auto X = FiniteMetric::real_grid(3, 1.0);
  auto rep = gamma_search(g, X, SearchMode::exhaustive);
  REQUIRE(rep.exact);

  double best = 0.0;
  std::int64_t n = g.n();
  for (std::int64_t code = 0; code < 729; ++code) {
    std::vector<std::int64_t> f(n);
    std::int64_t c = code;
    for (auto& x : f) {
      x = c % 3;
      c /= 3;
    }
    double num = 0.0;
    for (std::int64_t u = 0; u < n; ++u)
      for (std::int64_t v = 0; v < n; ++v) num += std::pow(X(f[u], f[v]), 2);
    num /= static_cast<double>(n * n);
    double den = 0.0;
    for (std::int64_t u = 0; u < n; ++u) {
      den += std::pow(X(f[u], f[(u + 1) % n]), 2);
    }
    den /= 6.0;  // |E| = 6
    if (den > 0.0) best = std::max(best, num / den);
  }
  CHECK(rep.gamma_estimate == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("single-point target is degenerate") {
  auto rep = gamma_search(cycle_graph(5), FiniteMetric::from_matrix(1, {0.0}),
                          SearchMode::exhaustive);
  CHECK(rep.degenerate);
  CHECK(rep.gamma_estimate == 0.0);
}

TEST_CASE("local search lower-bounds the exact value and its witness recomputes") {
  auto g = cycle_graph(6);
  auto X = FiniteMetric::real_grid(3, 1.0);
  auto exact = gamma_search(g, X, SearchMode::exhaustive);
  auto local = gamma_search(g, X, SearchMode::local, false, 2'000'000, 5, 40);
  CHECK(local.mode == "search");
  CHECK(local.gamma_estimate <= exact.gamma_estimate + 1e-9);
  CHECK(local.gamma_estimate >= 0.9 * exact.gamma_estimate);  // 40 restarts find a good map
  double recheck = poincare_ratio(g, X, local.witness_f);
  CHECK(recheck == doctest::Approx(local.gamma_estimate).epsilon(1e-9));
}

TEST_CASE("plus search dominates the plain search on exhaustive instances") {
  auto g = cycle_graph(5);
  for (auto X : {FiniteMetric::two_point(1.0), FiniteMetric::real_grid(3, 1.0)}) {
    auto plain = gamma_search(g, X, SearchMode::exhaustive, false);
    auto plus = gamma_search(g, X, SearchMode::exhaustive, true);
    CHECK(plain.gamma_estimate <= plus.gamma_estimate + 1e-9);
  }
}

TEST_CASE("search reports stay above a quarter when the witness spreads") {
  auto rep = gamma_search(complete_graph(4), FiniteMetric::two_point(1.0),
                          SearchMode::exhaustive);
  std::int64_t distinct = 1;
  for (auto x : rep.witness_f)
    if (x != rep.witness_f[0]) distinct = 2;
  CHECK(distinct == 2);
  CHECK(rep.gamma_estimate >= 0.25);
  CHECK(rep.gamma_estimate == doctest::Approx(0.75));  // below 1: the bound is 1/4, not 1
}

TEST_CASE("gamma_cut_exact oracle values") {
  CHECK(gamma_cut_exact(complete_graph(4)) == doctest::Approx(0.75));
  CHECK(gamma_cut_exact(cycle_graph(4)) == doctest::Approx(1.0));
  auto two = Multigraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}});
  CHECK(std::isinf(gamma_cut_exact(two)));
  CHECK_THROWS_AS(gamma_cut_exact(cycle_graph(25)), std::invalid_argument);
}

TEST_CASE("cheeger_check consistency") {
  CHECK_THROWS_AS(cheeger_check(cycle_graph(5), FiniteMetric::from_matrix(1, {0.0})),
                  std::invalid_argument);
  auto rep = cheeger_check(complete_graph(4), FiniteMetric::two_point(1.0));
  CHECK(rep.ok);
  CHECK(rep.exact);
  CHECK(rep.gamma_found == doctest::Approx(0.75));
  REQUIRE(rep.cut_gamma.has_value());
  CHECK(*rep.cut_gamma == doctest::Approx(0.75));
  CHECK(rep.sqrt_bound == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(rep.margin == doctest::Approx(0.75 / (std::sqrt(3.0) / 2.0)));
}

TEST_CASE("grid maps into the line stay under the closed form") {
  auto g = cycle_graph(9);
  auto rep = gamma_search(g, FiniteMetric::real_grid(5, 1.0), SearchMode::exhaustive);
  CHECK(rep.gamma_estimate <= gamma_line(g) + 1e-6);
}

TEST_CASE("l1 extrapolation quotients stay small on cycles") {
  auto rep = l1_extrapolation_check(cycle_graph(8), 3, 3);
  CHECK(rep.quotients.size() == 3);
  CHECK(rep.max_quotient > 0.0);
  CHECK(rep.max_quotient < 5.0);
}

TEST_CASE("iterative eigenvalue estimates match the dense solver") {
  for (auto g : {cycle_graph(9), petersen(), looped_cycle_graph(7), complete_graph(6)}) {
    auto ev = spectrum(g);
    auto l2 = lambda2_iterative(g, 1e-10, 200000);
    CHECK(l2.converged);
    CHECK(l2.value == doctest::Approx(ev[1]).epsilon(1e-7));
    auto ln = lambda_min_iterative(g, 1e-10, 200000);
    CHECK(ln.converged);
    CHECK(ln.value == doctest::Approx(ev.back()).epsilon(1e-7));
  }
}

TEST_CASE("matrix search agrees with graph search on the induced weights") {
  auto g = petersen();
  std::int64_t n = g.n();
  std::vector<double> w(static_cast<std::size_t>(n * n), 0.0);
  for (Vertex u = 0; u < n; ++u)
    for (const auto& [v, m] : g.row(u))
      w[static_cast<std::size_t>(u * n + v)] = static_cast<double>(m) / 3.0;
  auto X = FiniteMetric::two_point(1.0);
  auto a = gamma_search(g, X, SearchMode::exhaustive, true);
  auto b = matrix_gamma_search(w, n, X, SearchMode::exhaustive, true);
  CHECK(a.gamma_estimate == doctest::Approx(b.gamma_estimate).epsilon(1e-12));
  CHECK(matrix_ratio_plus(w, n, X, a.witness_f, a.witness_g) ==
        doctest::Approx(a.gamma_estimate).epsilon(1e-9));
}
