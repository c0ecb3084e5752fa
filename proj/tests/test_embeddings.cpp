#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "gmg/embeddings.hpp"

using namespace gmg;

namespace {

constexpr double kPi = std::numbers::pi;

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

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Multigraph path_graph(std::int64_t n) {
  std::vector<std::array<std::int64_t, 3>> rows;
  for (std::int64_t i = 0; i + 1 < n; ++i) rows.push_back({i, i + 1, 1});
  Multigraph g = Multigraph::from_edges(n, rows);
  return g;
}

Multigraph triangle_pendant() {
  Multigraph g = Multigraph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 3, 1}});
  return g;
}

// triangle, path of `inner + 2` path edges, triangle at the far end
Multigraph two_triangles(std::int64_t inner) {
  std::vector<std::array<std::int64_t, 3>> rows = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}};
  const std::int64_t far = 2 + inner + 1;
  for (std::int64_t v = 2; v < far; ++v) rows.push_back({v, v + 1, 1});
  rows.push_back({far, far + 1, 1});
  rows.push_back({far, far + 2, 1});
  rows.push_back({far + 1, far + 2, 1});
  Multigraph g = Multigraph::from_edges(far + 3, rows);
  return g;
}

Multigraph theta_333() {
  Multigraph g = Multigraph::from_edges(
      8, {{0, 2, 1}, {2, 3, 1}, {1, 3, 1}, {0, 4, 1}, {4, 5, 1}, {1, 5, 1},
          {0, 6, 1}, {6, 7, 1}, {1, 7, 1}});
  return g;
}

std::int64_t edges_inside(const Multigraph& g, const std::set<std::int64_t>& s) {
  std::int64_t cnt = 0;
  for (const auto& row : g.edge_list())
    if (s.count(row[0]) && s.count(row[1])) cnt += row[2];
  return cnt;
}

std::int64_t tree_hops(const std::vector<std::array<Vertex, 2>>& host,
                       const std::vector<std::int32_t>& tree, Vertex a, Vertex b,
                       std::int64_t n) {
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n));
  for (std::int32_t e : tree) {
    adj[host[e][0]].push_back(host[e][1]);
    adj[host[e][1]].push_back(host[e][0]);
  }
  std::vector<std::int64_t> dist(static_cast<std::size_t>(n), -1);
  std::queue<Vertex> q;
  q.push(a);
  dist[a] = 0;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist[b];
}

}  // namespace

TEST_CASE("truncated distance closed form") {
  CHECK(walsh_truncated_distance(0.0, kPi) == 0.0);
  const double d = walsh_truncated_distance(1.0, kPi);
  CHECK(std::abs(d - kPi * (1.0 - std::exp(-1.0 / kPi))) <= 1e-15);
  CHECK(std::abs(d - 0.8560) <= 1e-3);
  CHECK(walsh_truncated_distance(50.0, 2.0) <= 2.0);
}

TEST_CASE("hypercube embedding matches the closed form") {
  // k = 1 two-point example
  VectorSet two = walsh_truncation({{0}, {1}}, kPi);
  CHECK(two.dim() == 2);
  CHECK(std::abs(two.distance(0, 1) - kPi * (1.0 - std::exp(-1.0 / kPi))) <= 1e-12);
  CHECK(std::abs(two.norm_of(0) - kPi) <= 1e-12);
  CHECK(std::abs(two.norm_of(1) - kPi) <= 1e-12);

  // k = 12, seeded point set, closed form to 1e-10
  std::mt19937_64 rng = make_rng(77, 0);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<std::vector<int>> pts(6, std::vector<int>(12));
  for (auto& p : pts)
    for (auto& b : p) b = bit(rng);
  const double m = 2.5;
  VectorSet vs = walsh_truncation(pts, m);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(std::abs(vs.norm_of(static_cast<std::int64_t>(i)) - m) <= 1e-10);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      int h = 0;
      for (int c = 0; c < 12; ++c) h += (pts[i][c] != pts[j][c]);
      const double want = walsh_truncated_distance(static_cast<double>(h), m);
      CHECK(std::abs(vs.distance(static_cast<std::int64_t>(i),
                                 static_cast<std::int64_t>(j)) -
                     want) <= 1e-10);
    }
  }

  CHECK(mentions(thrown_message([] {
          walsh_truncation({std::vector<int>(17, 0)}, 1.0);
        }),
        "k too large"));
}

TEST_CASE("grid truncation is exact on rational points") {
  // coarse quarter-integer grid in three coordinates
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 20; ++i)
    pts.push_back({(i % 4) / 4.0, ((i / 4) % 4) / 4.0, ((i / 2) % 2) * 0.75});
  TruncateResult res = truncate_l1(pts, kPi, 0.01);
  CHECK(res.grid_denominator == 4);
  CHECK(res.pattern_rank <= 9);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(std::abs(res.vecs.norm_of(static_cast<std::int64_t>(i)) - kPi) <= 1e-10);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = l1(pts[i], pts[j]);
      const double vd = res.vecs.distance(static_cast<std::int64_t>(i),
                                          static_cast<std::int64_t>(j));
      CHECK(std::abs(vd - walsh_truncated_distance(d, kPi)) <= 1e-10);
      if (d == 0.0) {
        CHECK(vd <= 1e-12);
      } else {
        CHECK(d <= kPi);  // the ratio bracket needs distances below M
        const double ratio = vd / d;
        CHECK(ratio <= 1.0 + 1e-9);
        CHECK(ratio >= 1.0 - std::exp(-1.0) - 1e-9);
      }
    }
  }

  // far pair saturates toward M
  TruncateResult far = truncate_l1({{0.0}, {20.0}}, 1.0, 0.5);
  const double fd = far.vecs.distance(0, 1);
  CHECK(fd >= 1.0 - std::exp(-5.0) - 1e-12);
  CHECK(fd <= 1.0 + 1e-12);

  // one-third grid detection
  TruncateResult thirds = truncate_l1({{1.0 / 3.0}, {2.0 / 3.0}}, 1.0, 0.5);
  CHECK(thirds.grid_denominator == 3);

  std::vector<std::vector<double>> line;
  for (int i = 0; i < 22; ++i) line.push_back({static_cast<double>(i)});
  CHECK(mentions(thrown_message([&] { truncate_l1(line, 5.0, 0.1); }),
                 "hypercube dimension exceeds budget"));
  // incommensurate values blow past any common denominator
  CHECK(mentions(thrown_message([] {
          truncate_l1({{kPi}, {std::sqrt(2.0)}, {std::sqrt(3.0)}}, 1.0, 0.1);
        }),
        "not on a detectable rational grid"));
}

TEST_CASE("cone embedding certifies its bracket on a large sample") {
  std::vector<ConeL1Point> pts;
  for (int b = 0; b < 15; ++b) {
    const std::vector<double> base = {(b % 3) / 2.0, ((b / 3) % 5) / 2.0,
                                      (b % 2) / 2.0};
    for (int j = 1; j <= 10; ++j) pts.push_back({j / 2.0, base});
  }
  pts.push_back({0.0, {0.0, 0.0, 0.0}});  // cusp
  REQUIRE(pts.size() == 151);
  CHECK(pts.size() * (pts.size() - 1) / 2 >= 10000);

  ConeL1Result res = cone_l1_embed(pts, 0.01);
  CHECK(std::abs(res.upper_const - kPi * std::sqrt(5.0) / 2.0) <= 1e-12);
  CHECK(std::abs(res.lower_const - 0.31447) <= 1e-4);
  CHECK(res.max_ratio <= res.upper_const + 1e-9);
  CHECK(res.min_ratio >= res.lower_const / 1.01 - 1e-9);
  CHECK(res.distortion <= 11.17 * 1.01 + 1e-9);

  // radial pairs scale exactly by pi
  CHECK(std::abs(res.vecs.distance(0, 1) - kPi * 0.5) <= 1e-9);
  CHECK(std::abs(res.vecs.distance(150, 0) - kPi * 0.5) <= 1e-9);
  for (int j = 0; j < 10; ++j)
    CHECK(std::abs(res.vecs.norm_of(j) - kPi * (j + 1) / 2.0) <= 1e-9);
}

TEST_CASE("helix interpolates between line and square root") {
  HelixResult line = helix({0.0, 1.0, 2.5, 4.0}, 1.0);
  CHECK(std::abs(line.vecs.distance(0, 3) - 4.0) <= 1e-9);
  CHECK(std::abs(line.vecs.distance(1, 2) - 1.5) <= 1e-9);

  HelixResult root = helix({0.0, 1.0, 4.0}, 0.5);
  CHECK(std::abs(root.vecs.distance(0, 1) - 1.0) <= 1e-9);
  CHECK(std::abs(root.vecs.distance(0, 2) - 2.0) <= 1e-9);
  CHECK(std::abs(root.vecs.distance(1, 2) - std::sqrt(3.0)) <= 1e-9);
  CHECK(std::abs(root.vecs.norm_of(1) - 1.0) <= 1e-9);
  CHECK(std::abs(root.vecs.norm_of(2) - 2.0) <= 1e-9);
  CHECK(root.gram_min_eigenvalue >= -1e-9);

  CHECK(mentions(thrown_message([] { helix({1.0, 2.0}, 0.5); }),
                 "points must include 0"));
  CHECK(mentions(thrown_message([] { helix({0.0, 1.0, 2.0}, 1.2); }),
                 "indefinite"));
}

TEST_CASE("snowflake cone embedding on a uniform base") {
  // four base points at mutual distance one, embedded exactly (D = 1)
  FiniteMetric x;
  x.n = 4;
  x.d.assign(16, 1.0);
  for (int i = 0; i < 4; ++i) x.at(i, i) = 0.0;
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<double>> f = {{h, 0, 0, 0}, {0, h, 0, 0},
                                        {0, 0, h, 0}, {0, 0, 0, h}};
  std::vector<ConePoint> pts;
  for (std::int64_t b = 0; b < 4; ++b)
    for (int j = 1; j <= 4; ++j) pts.push_back(cone_point(j * 0.5, b));
  pts.push_back(cone_cusp());

  SnowflakeResult res = snowflake_cone_embed(x, pts, 0.5, f, 1.0);
  CHECK(std::abs(res.upper_const - 1.4903) <= 1e-3);
  CHECK(std::abs(res.lower_const - 0.5079) <= 1e-3);
  CHECK(res.paper_upper_const > res.upper_const);  // looser, logged only
  CHECK(res.max_ratio <= res.upper_const * (1.0 + 1e-8) + 1e-12);
  CHECK(res.min_ratio >= res.lower_const * (1.0 - 1e-8) - 1e-12);
  CHECK(res.distortion <= res.upper_const / res.lower_const + 1e-9);
  CHECK(mentions(res.notes, "2.574"));

  // tensor identity: inner products split into helix and kernel factors
  const double p2a = kPi;  // pi^{2 alpha} at alpha = 1/2
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double kh = std::min(pts[i].s, pts[j].s);
      double fd2 = 0.0;
      for (std::size_t c = 0; c < 4; ++c) {
        const double dd = f[pts[i].base][c] - f[pts[j].base][c];
        fd2 += dd * dd;
      }
      const double kt = 0.5 * p2a * std::exp(-fd2 / p2a);
      const double want = kh * kt;
      CHECK(std::abs(dot(res.vecs.rows[i], res.vecs.rows[j]) - want) <=
            1e-10 * (1.0 + std::abs(want)));
    }

  // coincident cone points land together
  SnowflakeResult dup = snowflake_cone_embed(
      x, {cone_point(1.0, 2), cone_point(1.0, 2), cone_cusp()}, 0.5, f, 1.0);
  CHECK(dup.vecs.distance(0, 1) <= 1e-7);

  CHECK(mentions(thrown_message([&] {
          snowflake_cone_embed(x, pts, 1.2, f, 1.0);
        }),
        "Gram factorization failure"));
}

TEST_CASE("quotient collapses short cycles") {
  QuotientResult q = quotient_graph(triangle_pendant(), 4.0);
  CHECK(q.graph.n() == 2);
  CHECK(q.graph.edge_list().size() == 1);
  CHECK(q.cycles.size() == 1);
  CHECK(q.vertex_map == std::vector<Vertex>{1, 1, 1, 0});
  CHECK(q.cycle_vertex == std::vector<Vertex>{1});
  REQUIRE(q.edge_origin.size() == 1);
  CHECK(q.edge_origin[0] == std::array<Vertex, 2>{2, 3});

  // trees are untouched
  QuotientResult tq = quotient_graph(path_graph(5), 4.0);
  CHECK(tq.graph.n() == 5);
  CHECK(tq.cycles.empty());
  CHECK(tq.graph.edge_list().size() == 4);

  // far-apart cycles collapse to far-apart vertices
  QuotientResult far = quotient_graph(two_triangles(5), 4.0);
  CHECK(far.cycles.size() == 2);
  const BfsMetrics bm = bfs_metrics(far.graph);
  CHECK(bm.dist[far.cycle_vertex[0]][far.cycle_vertex[1]] == 6);
  CHECK(bm.dist[far.cycle_vertex[0]][far.cycle_vertex[1]] > 4 + 1);

  CHECK(mentions(thrown_message([] { quotient_graph(path_graph(3), 26.0); }),
                 "short-cycle search cap"));
}

TEST_CASE("overlapping short cycles are dense and rejected") {
  // shared edge: 4 vertices carrying 5 edges
  Multigraph shared_edge = Multigraph::from_edges(
      4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  CHECK(edges_inside(shared_edge, {0, 1, 2, 3}) >= 4 + 1);
  CHECK(mentions(thrown_message([&] { quotient_graph(shared_edge, 4.0); }),
                 "overlapping short cycles"));

  // shared vertex: 5 vertices carrying 6 edges
  Multigraph shared_vertex = Multigraph::from_edges(
      5, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {3, 4, 1}});
  CHECK(edges_inside(shared_vertex, {0, 1, 2, 3, 4}) >= 5 + 1);
  CHECK(mentions(thrown_message([&] { quotient_graph(shared_vertex, 4.0); }),
                 "overlapping short cycles"));

  // two length-4 cycles through two shared degree-3 vertices
  Multigraph theta = Multigraph::from_edges(
      5, {{0, 2, 1}, {1, 2, 1}, {0, 3, 1}, {1, 3, 1}, {0, 4, 1}, {1, 4, 1}});
  CHECK(edges_inside(theta, {0, 1, 2, 3, 4}) >= 5 + 1);
  CHECK(mentions(thrown_message([&] { quotient_graph(theta, 5.0); }),
                 "overlapping short cycles"));
}

TEST_CASE("tree polytope measure on trees and cycles") {
  SpanningTreeDistribution star = tree_polytope_measure(path_graph(5), 0.25);
  CHECK(star.trees.size() == 1);
  CHECK(star.weights[0] == Rat(1));
  for (std::int32_t e = 0; e < 4; ++e) CHECK(star.marginal(e) == Rat(1));

  Multigraph c9 = cycle_graph(9);
  SpanningTreeDistribution cyc = tree_polytope_measure(c9, 1.0 / 8.0);
  Rat total(0);
  for (const Rat& w : cyc.weights) total += w;
  CHECK(total == Rat(1));
  for (std::int32_t e = 0; e < 9; ++e)
    CHECK(std::abs(cyc.marginal_double(e) - 8.0 / 9.0) <= 1e-9);

  CHECK(mentions(thrown_message([] {
          tree_polytope_measure(complete_graph(4), 0.1);
        }),
        "infeasible polytope"));
}

TEST_CASE("tree polytope measure on the theta graph") {
  Multigraph g = theta_333();
  SpanningTreeDistribution d = tree_polytope_measure(g, 0.3);
  const std::int64_t m = static_cast<std::int64_t>(d.host_edges.size());
  Rat marg_total(0);
  for (std::int32_t e = 0; e < m; ++e) {
    const Rat marg = d.marginal(e);
    marg_total += marg;
    CHECK(to_double(marg) >= 1.0 / 1.3 - 1e-9);
  }
  CHECK(marg_total == Rat(7));  // n - 1 in expectation, exactly
}

TEST_CASE("good tree measure splits cycle mass evenly") {
  SpanningTreeDistribution d = good_tree_measure(triangle_pendant(), 4.0, 1.0 / 12.0);
  CHECK(d.trees.size() == 3);
  for (const Rat& w : d.weights) CHECK(w == Rat(1) / Rat(3));
  // rows order: (0,1) (0,2) (1,2) (2,3); the first three form the triangle
  CHECK(d.marginal(0) == Rat(2) / Rat(3));
  CHECK(d.marginal(1) == Rat(2) / Rat(3));
  CHECK(d.marginal(2) == Rat(2) / Rat(3));
  CHECK(d.marginal(3) == Rat(1));

  // the dropped cycle edge closes through the rest of its cycle: |C| - 1 hops
  for (const auto& tree : d.trees) {
    for (std::int32_t e = 0; e < 3; ++e) {
      if (std::binary_search(tree.begin(), tree.end(), e)) continue;
      const std::int64_t hops =
          tree_hops(d.host_edges, tree, d.host_edges[e][0], d.host_edges[e][1], 4);
      CHECK(hops == 2);
      CHECK(hops <= 3);
    }
  }

  CHECK(mentions(thrown_message([] {
          good_tree_measure(triangle_pendant(), 5.0, 1.0 / 12.0);
        }),
        "t must equal 1/(3 delta)"));
}

TEST_CASE("good tree measure through a quotient with two cycles") {
  Multigraph g = two_triangles(5);  // 11 vertices, 12 edges
  const double delta = 1.0 / 11.0;
  SpanningTreeDistribution d = good_tree_measure(g, 1.0 / (3.0 * delta), delta);
  CHECK(d.trees.size() == 9);
  const std::int64_t m = static_cast<std::int64_t>(d.host_edges.size());
  std::int64_t cycle_edges = 0;
  for (std::int32_t e = 0; e < m; ++e) {
    const Rat marg = d.marginal(e);
    if (marg == Rat(2) / Rat(3))
      ++cycle_edges;
    else
      CHECK(marg == Rat(1));
  }
  CHECK(cycle_edges == 6);

  // a long even cycle has no short cycles yet still gets certified marginals
  SpanningTreeDistribution c6 = good_tree_measure(cycle_graph(6), 4.0, 1.0 / 12.0);
  for (std::int32_t e = 0; e < 6; ++e)
    CHECK(c6.marginal_double(e) >= 9.0 / 13.0 - 1e-9);
}

TEST_CASE("sparse embedding of a tree stays within the truncation loss") {
  Multigraph g = path_graph(6);
  SparseEmbedResult res = sparse_graph_l1(g, 0.2, 30, 11);
  CHECK(res.report.tree_count == 1);  // single spanning tree, used once
  CHECK(mentions(res.report.notes, "tree"));
  CHECK(res.report.point_count == 10);  // 6 vertices + 4 interior points
  CHECK(res.report.distortion <= std::exp(1.0) / (std::exp(1.0) - 1.0) + 1e-6);
  CHECK(res.report.max_ratio <= 1.0 + 1e-9);
  CHECK(res.report.min_ratio >= 1.0 - std::exp(-1.0) - 1e-9);
  CHECK(res.report.diameter == 5);
  CHECK(res.report.truncation == 6.0);

  // deterministic under a fixed seed
  SparseEmbedResult again = sparse_graph_l1(g, 0.2, 30, 11);
  CHECK(again.report.distortion == res.report.distortion);
  CHECK(again.report.expectation_constant == res.report.expectation_constant);
}

TEST_CASE("sparse embedding of a single cycle logs the remark") {
  Multigraph g = cycle_graph(12);
  const double delta = 1.0 / 11.0;
  SparseEmbedResult res = sparse_graph_l1(g, delta, 64, 5);
  CHECK(res.report.short_cycle_count == 0);  // the 12-cycle is not short
  CHECK(mentions(res.report.notes, "single cycle"));
  CHECK(res.report.distortion >= 1.0 - 1e-9);
  CHECK(res.report.distortion <= 4.0);
  CHECK(res.report.expectation_constant <= 4.0);

  const std::string msg =
      thrown_message([&] { sparse_graph_l1(g, delta, 5000, 5); });
  CHECK(mentions(msg, "sample budget exceeded"));
}

TEST_CASE("sparse embedding keeps its constant across sizes") {
  double cmin = 1e30, cmax = 0.0;
  for (std::int64_t inner : {16, 28, 40}) {
    Multigraph g = two_triangles(inner);
    SparseEmbedResult res = sparse_graph_l1(g, 1.0 / 12.0, 48, 23);
    CHECK(res.report.short_cycle_count == 2);
    CHECK(res.report.distortion >= 1.0);
    const double ce = res.report.distortion /
                      (1.0 + res.report.delta * static_cast<double>(res.report.diameter));
    CHECK(ce <= 4.0);
    cmin = std::min(cmin, ce);
    cmax = std::max(cmax, ce);
    CHECK(res.report.expectation_constant <= 4.0);
  }
  CHECK(cmax / cmin <= 3.0);

  // delta so small that the short-cycle cap would be breached
  CHECK(mentions(thrown_message([] {
          sparse_graph_l1(cycle_graph(12), 0.01, 8, 1);
        }),
        "short-cycle search cap"));
}
