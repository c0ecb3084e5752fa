#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gmg/approximator.hpp"
#include "gmg/randgraph.hpp"

using namespace gmg;

namespace {

template <typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

bool mentions(const std::string& msg, const std::string& needle) {
  return msg.find(needle) != std::string::npos;
}

// 3-regular circulant: cycle plus the antipodal matching, n even
Multigraph circulant_cubic(std::int64_t n) {
  std::vector<std::array<std::int64_t, 3>> rows;
  for (std::int64_t v = 0; v < n; ++v) rows.push_back({v, (v + 1) % n, 1});
  for (std::int64_t v = 0; v < n / 2; ++v) rows.push_back({v, v + n / 2, 1});
  return Multigraph::from_edges(n, rows);
}

TemplateFamily small_family() {
  return make_template_family(
      {circulant_cubic(16), circulant_cubic(32), circulant_cubic(64)}, 2.0);
}

}  // namespace

TEST_CASE("a template matching n exactly reproduces itself") {
  TemplateFamily fam = small_family();
  UniversalApproximator u = build_universal(fam, 16);
  CHECK(u.template_size == 16);
  CHECK(u.n == 16);
  CHECK(u.edge_total == 24);
  for (std::int64_t s : u.bucket_size) CHECK(s == 1);
  for (const auto& e : u.edges) CHECK(e[0] != e[1]);  // singleton buckets: no loops
}

TEST_CASE("a divisible bucket split conserves the edge count") {
  TemplateFamily fam = small_family();
  UniversalApproximator u = build_universal(fam, 16);
  UniversalApproximator v = build_universal(fam, 8);  // template 16, buckets of 2
  CHECK(v.template_size == 16);
  for (std::int64_t s : v.bucket_size) CHECK(s == 2);
  CHECK(v.edge_total == u.edge_total);

  std::int64_t loops = 0;
  for (const auto& e : v.edges)
    if (e[0] == e[1]) loops += e[2];
  CHECK(loops > 0);  // cycle edges inside a bucket project to loops
}

TEST_CASE("projected edge counts respect the family bound") {
  TemplateFamily fam = small_family();
  for (std::int64_t n : {8, 9, 16, 23, 33, 64}) {
    UniversalApproximator u = build_universal(fam, n);
    CHECK(static_cast<double>(u.edge_total) <= 1.5 * fam.size_ratio * static_cast<double>(n));
    std::int64_t covered = 0;
    const std::int64_t b = u.template_size / n;
    for (std::int64_t s : u.bucket_size) {
      CHECK((s == b || s == b + 1));
      covered += s;
    }
    CHECK(covered == u.template_size);
  }
  CHECK(mentions(thrown_message([&] { build_universal(small_family(), 7); }),
                 "no suitable template"));
  CHECK(mentions(thrown_message([&] { build_universal(small_family(), 65); }),
                 "no suitable template"));
}

TEST_CASE("identical points estimate to zero") {
  const std::int64_t n = 12;
  std::vector<double> zero(static_cast<std::size_t>(n * n), 0.0);
  MatrixOracle oracle(FiniteMetric::from_matrix(n, std::move(zero)));
  TemplateFamily fam = small_family();
  UniversalApproximator u = build_universal(fam, n);
  EstimateResult est = estimate_avg_sq(u, oracle);
  CHECK(est.estimate == 0.0);
  CHECK(est.queries == u.edge_total);
  CHECK(oracle.queries() == u.edge_total);

  double ex = exact_avg_sq(oracle, n);
  CHECK(ex == 0.0);
}

TEST_CASE("two points at unit distance average to one half") {
  MatrixOracle oracle(FiniteMetric::two_point(1.0));
  CHECK(exact_avg_sq(oracle, 2) == doctest::Approx(0.5));
}

TEST_CASE("oracle construction validates the matrix") {
  CHECK(mentions(thrown_message([] {
          std::vector<double> d = {0.5, 1.0, 1.0, 0.0};
          MatrixOracle o(FiniteMetric::from_matrix(2, std::move(d)));
        }),
        "diagonal"));
  CHECK(mentions(thrown_message([] {
          std::vector<double> d = {0.0, 1.0, 2.0, 0.0};
          MatrixOracle o(FiniteMetric::from_matrix(2, std::move(d)));
        }),
        "symmetric"));
}

TEST_CASE("graph metrics keep the estimate within a factor four of exact") {
  TemplateFamily fam = small_family();
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    Multigraph h = uniform_simple_sample(200, 3, seed).graph;
    MatrixOracle base = graph_metric_oracle(h);
    const BfsMetrics bm = bfs_metrics(h);
    std::vector<double> mat(static_cast<std::size_t>(200 * 200));
    for (std::int64_t i = 0; i < 200; ++i)
      for (std::int64_t j = 0; j < 200; ++j)
        mat[static_cast<std::size_t>(i * 200 + j)] = static_cast<double>(
            bm.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    FiniteMetric fm = FiniteMetric::from_matrix(200, std::move(mat));
    auto rng = make_rng(seed, 9);
    std::vector<std::int64_t> all(200);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::int64_t> tuple(all.begin(), all.begin() + 64);
    MatrixOracle oracle = tuple_oracle(fm, tuple);
    UniversalApproximator u = build_universal(fam, 64);
    const double est = estimate_avg_sq(u, oracle).estimate;
    const double ex = exact_avg_sq(oracle, 64);
    CHECK(est <= 4.0 * ex);
    CHECK(est >= ex / 4.0);
  }
}

TEST_CASE("sampling baseline concentrates at the exact average") {
  Multigraph h = uniform_simple_sample(100, 3, 7).graph;
  MatrixOracle oracle = graph_metric_oracle(h);
  const double ex = exact_avg_sq(oracle, 100);
  const std::int64_t pairs = 100 * 100;
  const double mean = sampling_baseline(oracle, 100, pairs, 3);
  // d^2 <= diam^2; crude variance cap gives a generous three-sigma band
  const BfsMetrics bm = bfs_metrics(h);
  const double span = std::pow(static_cast<double>(bm.diameter), 2.0);
  const double sigma = span / std::sqrt(static_cast<double>(pairs));
  CHECK(std::abs(mean - ex) <= 3.0 * sigma);
}

TEST_CASE("projection identity: lifted edge sums match the bucket multiset") {
  TemplateFamily fam = small_family();
  const std::int64_t n = 12;
  UniversalApproximator u = build_universal(fam, n);
  Multigraph h = uniform_simple_sample(64, 3, 15).graph;
  const BfsMetrics bm = bfs_metrics(h);

  // lift: template vertex -> tuple point bucket -> host vertex
  std::vector<std::int64_t> tuple(n);
  std::iota(tuple.begin(), tuple.end(), 0);
  const Multigraph& g = fam.members[static_cast<std::size_t>(u.template_index)];
  double lifted = 0.0;
  for (const auto& e : g.edge_list()) {
    const std::int64_t a = tuple[static_cast<std::size_t>(
        u.bucket_of[static_cast<std::size_t>(e[0])])];
    const std::int64_t b = tuple[static_cast<std::size_t>(
        u.bucket_of[static_cast<std::size_t>(e[1])])];
    const double d =
        static_cast<double>(bm.dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
    lifted += static_cast<double>(e[2]) * d * d;
  }
  double bucketed = 0.0;
  for (const auto& e : u.edges) {
    const double d = static_cast<double>(
        bm.dist[static_cast<std::size_t>(tuple[static_cast<std::size_t>(e[0])])]
               [static_cast<std::size_t>(tuple[static_cast<std::size_t>(e[1])])]);
    bucketed += static_cast<double>(e[2]) * d * d;
  }
  CHECK(lifted == doctest::Approx(bucketed).epsilon(1e-12));
}

TEST_CASE("iterated-construction templates plug in at the boundary size") {
  Multigraph base = best_random_regular(27, 3, 5, 99);
  TemplateFamily fam = zigzag_template_family(base, 1);
  CHECK(fam.members.size() == 1);
  CHECK(fam.members[0].n() == 2187);  // 9 * 9 * 27
  CHECK(fam.members[0].regular_degree() == 3);
  CHECK(fam.size_ratio == doctest::Approx(27.0));

  UniversalApproximator u = build_universal(fam, 81);  // 2187 = 27 * 81 exactly
  for (std::int64_t s : u.bucket_size) CHECK(s == 27);
  std::int64_t template_edges = 0;
  for (const auto& e : fam.members[0].edge_list()) template_edges += e[2];
  CHECK(u.edge_total == template_edges);
}

TEST_CASE("ratio experiment emits one row per trial and mode") {
  TemplateFamily fam = small_family();
  RatioExperiment r = ratio_experiment(100, 3, 32, 5, 77, fam);
  CHECK(r.rows.size() == 10);
  for (const auto& row : r.rows) {
    CHECK(row.m == 100);
    CHECK(row.n == 32);
    CHECK(row.exact > 0.0);
    CHECK(row.ratio > 0.0);
    CHECK((row.tuple_mode == "uniform" || row.tuple_mode == "adversarial"));
    CHECK(row.queries == build_universal(fam, 32).edge_total);
  }
  CHECK(r.d_emp_uniform >= 1.0);
  CHECK(r.d_emp_adversarial >= 1.0);

  const std::string csv = r.csv();
  CHECK(csv.rfind("trial,m,n,exact,estimate,ratio,queries,tuple_mode\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

  RatioExperiment again = ratio_experiment(100, 3, 32, 5, 77, fam);
  CHECK(again.csv() == csv);  // deterministic end to end
}

TEST_CASE("least squares slope recovers a known line") {
  SlopeCi s = slope_ci({1.0, 2.0, 3.0, 4.0}, {2.0, 4.1, 5.9, 8.0});
  CHECK(s.slope == doctest::Approx(1.99).epsilon(0.02));
  CHECK(s.lo <= 2.0);
  CHECK(s.hi >= 2.0);
  CHECK(mentions(thrown_message([] { slope_ci({1.0, 2.0}, {1.0, 2.0}); }),
                 "at least three"));
}

TEST_CASE("universal build time grows about linearly") {
  std::vector<double> logn, logt;
  for (std::int64_t n : {1 << 8, 1 << 10, 1 << 12, 1 << 14, 1 << 16}) {
    TemplateFamily fam = make_template_family({circulant_cubic(2 * n)}, 2.0);
    double best = 1e100;
    for (int rep = 0; rep < 3; ++rep) {
      // amortize clock noise: repeat builds until 20ms have passed
      const auto t0 = std::chrono::steady_clock::now();
      std::int64_t builds = 0;
      double elapsed = 0.0;
      do {
        UniversalApproximator u = build_universal(fam, n);
        CHECK(u.n == n);
        ++builds;
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
      } while (elapsed < 0.02);
      best = std::min(best, elapsed / static_cast<double>(builds));
    }
    logn.push_back(std::log(static_cast<double>(n)));
    logt.push_back(std::log(best));
  }
  SlopeCi s = slope_ci(logn, logt);
  CHECK(s.slope >= 0.8);
  CHECK(s.slope <= 1.3);
}
