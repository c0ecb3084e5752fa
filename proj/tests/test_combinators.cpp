#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>

#include "gmg/combinators.hpp"
#include "gmg/spectral.hpp"

using namespace gmg;

namespace {

double lambda2_of(const Multigraph& g) {
  const std::vector<double> ev = spectrum(g);
  return ev.size() > 1 ? ev[1] : ev[0];
}

bool same_edges(const Multigraph& a, const Multigraph& b) {
  return a.n() == b.n() && a.edge_list() == b.edge_list();
}

}  // namespace

TEST_CASE("zigzag of a 4-regular graph with the looped 4-cycle") {
  const Multigraph g1 = best_random_regular(10, 4, 20, 11);
  const Multigraph g2 = looped_cycle_graph(4);
  const Multigraph z = zigzag(g1, g2);
  CHECK(z.n() == 40);
  CHECK(z.regular_degree() == std::optional<std::int64_t>(9));
  const ValidationReport rep = validate(z, 9);
  CHECK(rep.ok);
  CHECK(z.rotation().has_value());
}

TEST_CASE("zigzag size mismatch is rejected") {
  CHECK_THROWS_WITH_AS(zigzag(complete_graph(4), looped_cycle_graph(4)),
                       doctest::Contains("|V(g2)| must equal deg(g1)"), std::invalid_argument);
}

TEST_CASE("zigzag of all-loops graphs is an all-loops graph") {
  const Multigraph g1 = all_loops_graph(4, 2);
  const Multigraph g2 = all_loops_graph(2, 3);
  const Multigraph z = zigzag(g1, g2);
  CHECK(z.n() == 8);
  CHECK(z.regular_degree() == std::optional<std::int64_t>(9));
  for (Vertex v = 0; v < z.n(); ++v) CHECK(z.loops(v) == 9);
}

TEST_CASE("zigzag spectral submultiplicativity on random instances") {
  const Multigraph g2 = looped_cycle_graph(4);
  const double gp2 = gamma_plus_line(g2);
  for (int t = 0; t < 20; ++t) {
    const Multigraph g1 = best_random_regular(8, 4, 40, 100 + t);
    const Multigraph z = zigzag(g1, g2);
    const double lhs = gamma_plus_line(z);
    const double rhs = gamma_plus_line(g1) * gp2 * gp2;
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("replacement of a 9-regular graph with the 9-cycle") {
  const Multigraph g1 = best_random_regular(12, 9, 20, 5);
  const Multigraph r = replacement(g1, cycle_graph(9));
  CHECK(r.n() == 108);
  CHECK(r.regular_degree() == std::optional<std::int64_t>(3));
  CHECK(validate(r, 3).ok);
}

TEST_CASE("replacement rejects a cloud of the wrong size") {
  const Multigraph g1 = all_loops_graph(1, 2);
  CHECK_THROWS_WITH_AS(replacement(g1, cycle_graph(9)), doctest::Contains("ports insufficient"),
                       std::invalid_argument);
}

TEST_CASE("replacement turns rotation fixed points into loops") {
  const Multigraph g1 = looped_cycle_graph(3);
  const Multigraph r = replacement(g1, cycle_graph(3));
  CHECK(r.n() == 9);
  CHECK(r.regular_degree() == std::optional<std::int64_t>(3));
  CHECK(r.loop_count() == 3);
}

TEST_CASE("replacement spectral submultiplicativity on random instances") {
  const Multigraph g2 = looped_cycle_graph(4);
  const double gp2 = gamma_plus_line(g2);
  for (int t = 0; t < 20; ++t) {
    const Multigraph g1 = best_random_regular(8, 4, 40, 200 + t);
    const Multigraph r = replacement(g1, g2);
    const double lhs = gamma_plus_line(r);
    const double rhs = 3.0 * 4.0 * gamma_plus_line(g1) * gp2 * gp2;
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("edge completion of the 9-cycle to degree 3 is the looped 9-cycle") {
  const Multigraph c = edge_completion(cycle_graph(9), 3);
  CHECK(same_edges(c, looped_cycle_graph(9)));
  CHECK(validate(c, 3).ok);
}

TEST_CASE("edge completion at the input degree is the identity") {
  const Multigraph g = complete_graph(4);
  CHECK(edge_completion(g, 3) == g);
}

TEST_CASE("edge completion keeps at least half the mass on copies") {
  for (const auto& [n, d, D] : {std::array<std::int64_t, 3>{16, 3, 7},
                                std::array<std::int64_t, 3>{10, 4, 9},
                                std::array<std::int64_t, 3>{9, 4, 11}}) {
    const Multigraph g = best_random_regular(n, d, 20, 31 + D);
    const Multigraph c = edge_completion(g, D);
    CHECK(c.regular_degree() == std::optional<std::int64_t>(D));
    const std::int64_t copies = (D / d) * d;
    CHECK(copies * 2 >= D);
    CHECK(c.loop_count() == g.loop_count() * (D / d) + (D - copies) * n);
  }
}

TEST_CASE("edge completion at most doubles the line constant") {
  for (int t = 0; t < 10; ++t) {
    const Multigraph g = best_random_regular(16, 3, 40, 300 + t);
    const Multigraph c = edge_completion(g, 7);
    CHECK(gamma_plus_line(c) <= 2.0 * gamma_plus_line(g) + 1e-9);
  }
}

TEST_CASE("cesaro with m = 1 is one self-loop per vertex") {
  const Multigraph a = cesaro(complete_graph(4), 1);
  CHECK(a.n() == 4);
  CHECK(a.regular_degree() == std::optional<std::int64_t>(1));
  for (Vertex v = 0; v < 4; ++v) {
    CHECK(a.loops(v) == 1);
    CHECK(a.row(v).size() == 1);
  }
}

TEST_CASE("cesaro with m = 2 is d loops plus the original edges") {
  const Multigraph a = cesaro(complete_graph(4), 2);
  CHECK(a.regular_degree() == std::optional<std::int64_t>(6));
  for (Vertex u = 0; u < 4; ++u) {
    CHECK(a.loops(u) == 3);
    for (Vertex v = 0; v < 4; ++v) {
      if (v != u) CHECK(a.multiplicity(u, v) == 1);
    }
  }
}

TEST_CASE("cesaro with m = 3 on the complete graph") {
  const Multigraph a = cesaro(complete_graph(4), 3);
  CHECK(a.regular_degree() == std::optional<std::int64_t>(27));
  for (Vertex u = 0; u < 4; ++u) {
    CHECK(a.multiplicity(u, u) == 12);  // 9 + walks of length 2 staying home
    for (Vertex v = 0; v < 4; ++v) {
      if (v != u) CHECK(a.multiplicity(u, v) == 5);  // 3 direct + 2 two-step
    }
  }
}

TEST_CASE("cesaro adjacency equals the mean of normalized powers") {
  const Multigraph g = best_random_regular(10, 3, 20, 77);
  const std::int64_t m = 3;
  const Multigraph a = cesaro(g, m);
  const std::int64_t dd = *a.regular_degree();

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(10, 10);
  for (Vertex u = 0; u < 10; ++u) {
    for (const auto& [v, mult] : g.row(u)) p(u, v) = static_cast<double>(mult) / 3.0;
  }
  Eigen::MatrixXd mean = Eigen::MatrixXd::Identity(10, 10);
  Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(10, 10);
  for (std::int64_t t = 1; t < m; ++t) {
    pw = pw * p;
    mean += pw;
  }
  mean /= static_cast<double>(m);
  for (Vertex u = 0; u < 10; ++u) {
    for (Vertex v = 0; v < 10; ++v) {
      const double got = static_cast<double>(a.multiplicity(u, v)) / static_cast<double>(dd);
      CHECK(std::abs(got - mean(u, v)) < 1e-12);
    }
  }
}

TEST_CASE("cesaro rejects overflowing walk counts") {
  CHECK_THROWS_WITH_AS(cesaro(complete_graph(4), 42), doctest::Contains("overflow of walk counts"),
                       std::invalid_argument);
}

TEST_CASE("star transform with the default conversion") {
  const Multigraph g = best_random_regular(20, 4, 20, 9);
  const StarTransformResult res = star_transform(g, 4);
  CHECK(res.default_hook);
  CHECK(res.stage_sizes == std::vector<std::int64_t>{20, 320, 2880});
  CHECK(res.graph.regular_degree() == std::optional<std::int64_t>(3));
  CHECK(validate(res.graph, 3).ok);
  CHECK(res.notes.size() == 3);
}

TEST_CASE("star transform with a caller-supplied halving conversion") {
  const Multigraph g = best_random_regular(20, 4, 20, 9);
  const GammaPlusHook hook = [](const Multigraph&) {
    return edge_completion(complete_graph(10), 16);
  };
  const StarTransformResult res = star_transform(g, 4, hook);
  CHECK_FALSE(res.default_hook);
  CHECK(res.stage_sizes == std::vector<std::int64_t>{10, 160, 1440});
  CHECK(res.graph.regular_degree() == std::optional<std::int64_t>(3));
  CHECK(validate(res.graph, 3).ok);
}

TEST_CASE("star transform preconditions") {
  CHECK_THROWS_WITH_AS(star_transform(best_random_regular(7, 4, 20, 3), 4),
                       doctest::Contains("even vertex count"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(star_transform(cycle_graph(8), 2), doctest::Contains("at least 3"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(star_transform(complete_graph(4), 3), doctest::Contains("at least 6"),
                       std::invalid_argument);
}

TEST_CASE("star transform line constants against the input") {
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::int64_t n = 8 + 2 * (t % 4);
    const Multigraph g = best_random_regular(n, 4, 40, 400 + t);
    const StarTransformResult res = star_transform(g, 4);
    const IterativeEigEstimate top = lambda2_iterative(res.graph, 1e-8, 30000);
    const IterativeEigEstimate bot = lambda_min_iterative(res.graph, 1e-8, 30000);
    const double mu = std::max(top.value + top.residual, -(bot.value - bot.residual));
    REQUIRE(mu < 1.0);
    const double gp = 1.0 / (1.0 - mu);
    const double ratio = gp / (256.0 * gamma_line(g));
    REQUIRE(std::isfinite(ratio));
    worst = std::max(worst, ratio);
  }
  CHECK(worst > 0.0);
  CHECK(worst < 1e4);
  std::cout << "star transform gamma_+ / (d^4 gamma) worst case: " << worst << "\n";
}

TEST_CASE("recipe arithmetic and the small-depth guard") {
  const Multigraph base = best_random_regular(27, 3, 50, 21);
  CHECK(base.n() == 27);
  CHECK(base.regular_degree() == std::optional<std::int64_t>(3));
  const IterationRecipe rec = make_recipe(base, 2);
  CHECK(rec.m == 1);
  CHECK(rec.m_used == 2);
  CHECK(rec.degenerate_guard);

  const Multigraph big = best_random_regular(729, 3, 5, 22);
  const IterationRecipe rec2 = make_recipe(big, 0);
  CHECK(rec2.m == 2);
  CHECK(rec2.m_used == 2);
  CHECK_FALSE(rec2.degenerate_guard);

  CHECK_THROWS_WITH_AS(make_recipe(best_random_regular(26, 3, 20, 23), 1),
                       doctest::Contains("n >= d^3"), std::invalid_argument);
}

TEST_CASE("zigzag iteration sizes and spectral gaps for two levels") {
  const Multigraph base = best_random_regular(27, 3, 50, 21);
  const IterationRecipe rec = make_recipe(base, 2);
  const IterationResult res = zigzag_iteration(rec, true, 1e-6, 20000);
  REQUIRE(res.levels.size() == 2);

  const IterationLevel& l1 = res.levels[0];
  CHECK(l1.w.n() == 27);
  CHECK(l1.w.regular_degree() == std::optional<std::int64_t>(9));
  CHECK(l1.g.n() == 2187);
  CHECK(l1.g.regular_degree() == std::optional<std::int64_t>(3));

  const IterationLevel& l2 = res.levels[1];
  CHECK(l2.w.n() == 729);
  CHECK(l2.w.regular_degree() == std::optional<std::int64_t>(9));
  CHECK(l2.g.n() == 59049);
  CHECK(l2.g.regular_degree() == std::optional<std::int64_t>(3));

  for (const IterationLevel& lvl : res.levels) {
    CHECK(lvl.lambda2_w + lvl.residual_w < 1.0);
    CHECK(lvl.lambda2_g + lvl.residual_g < 1.0);
    CHECK(is_connected(lvl.g));
  }
  std::cout << "iteration lambda_2: W_1 " << res.levels[0].lambda2_w << ", G_1 "
            << res.levels[0].lambda2_g << ", W_2 " << res.levels[1].lambda2_w << ", G_2 "
            << res.levels[1].lambda2_g << "\n";
}

TEST_CASE("zigzag iteration with depth zero is empty") {
  const IterationRecipe rec = make_recipe(best_random_regular(27, 3, 10, 21), 0);
  CHECK(zigzag_iteration(rec).levels.empty());
}

TEST_CASE("averaging constant for the line stays small on samples") {
  std::vector<Multigraph> samples;
  samples.push_back(complete_graph(4));
  samples.push_back(best_random_regular(10, 3, 20, 51));
  samples.push_back(best_random_regular(12, 4, 20, 52));
  const double K = measure_cesaro_K(samples, 3);
  CHECK(K > 0.0);
  CHECK(K < 50.0);
  std::cout << "measured averaging constant for the line: " << K << "\n";
}

TEST_CASE("best-of-trials sampler is deterministic and regular") {
  const Multigraph a = best_random_regular(14, 3, 25, 99);
  const Multigraph b = best_random_regular(14, 3, 25, 99);
  CHECK(a == b);
  CHECK(a.regular_degree() == std::optional<std::int64_t>(3));
  CHECK(is_connected(a));
  CHECK(lambda2_of(a) < 1.0);
}
