#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gmg/multigraph.hpp"

using namespace gmg;

namespace {

Multigraph petersen() {
  std::vector<std::array<std::int64_t, 3>> edges;
  for (std::int64_t i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1});          // outer cycle
    edges.push_back({5 + i, 5 + (i + 2) % 5, 1});  // inner pentagram
    edges.push_back({i, 5 + i, 1});                // spokes
  }
  return Multigraph::from_edges(10, edges);
}

}  // namespace

TEST_CASE("validate accepts C_9 as 2-regular") {
  auto rep = validate(cycle_graph(9));
  CHECK(rep.ok);
  CHECK(rep.regular_degree == 2);
}

TEST_CASE("validate flags asymmetric multiplicity") {
  auto g = Multigraph::from_rows_unchecked(3, {{{1, 1}, {2, 1}}, {{0, 2}, {2, 1}}, {{0, 1}, {1, 1}}});
  auto rep = validate(g);
  CHECK_FALSE(rep.ok);
  CHECK(rep.error == "asymmetric multiplicity");
}

TEST_CASE("validate flags degree mismatch against a declared regularity") {
  auto path = Multigraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}});
  auto rep = validate(path, 2);
  CHECK_FALSE(rep.ok);
  CHECK(rep.error == "degree mismatch");
}

TEST_CASE("degrees count self-loops once") {
  auto g = looped_cycle_graph(5);
  for (Vertex v = 0; v < 5; ++v) CHECK(g.degree(v) == 3);
  CHECK(g.loop_count() == 5);
  CHECK(g.regular_degree() == 3);
  CHECK(g.edge_normalization() == doctest::Approx(7.5));
}

TEST_CASE("default rotation is a consistent involution") {
  for (auto g : {looped_cycle_graph(5), complete_graph(4), all_loops_graph(3, 2)}) {
    REQUIRE(g.rotation().has_value());
    CHECK(g.rotation()->is_involution());
    CHECK(validate(g).ok);
  }
}

TEST_CASE("rotation round-trip through from_rotation") {
  auto g = looped_cycle_graph(7);
  auto h = Multigraph::from_rotation(g.n(), *g.rotation());
  CHECK(h.edge_list() == g.edge_list());
}

TEST_CASE("attach_rotation rejects an inconsistent table") {
  auto g = cycle_graph(4);
  auto rot = *cycle_graph(4).rotation();
  // Rewire ports 0 of vertices 0 and 2 onto each other: still an involution,
  // but realizes a different multiset of edges.
  auto other = [&](Vertex v) { return v * rot.d; };
  std::int64_t p0 = other(0), p2 = other(2);
  std::int64_t q0 = rot.table[p0], q2 = rot.table[p2];
  rot.table[static_cast<std::size_t>(p0)] = p2;
  rot.table[static_cast<std::size_t>(p2)] = p0;
  rot.table[static_cast<std::size_t>(q0)] = q2;
  rot.table[static_cast<std::size_t>(q2)] = q0;
  CHECK_THROWS_WITH_AS(g.attach_rotation(rot), "rotation inconsistent with multiplicities",
                       std::invalid_argument);
}

TEST_CASE("bfs_metrics on C_9") {
  auto m = bfs_metrics(cycle_graph(9));
  CHECK(m.connected);
  CHECK(m.diameter == 4);
  CHECK(m.dist[0][4] == 4);
  CHECK(m.dist[0][5] == 4);
}

TEST_CASE("bfs_metrics flags two disjoint triangles") {
  std::vector<std::array<std::int64_t, 3>> edges{{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                                                 {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
  auto m = bfs_metrics(Multigraph::from_edges(6, edges));
  CHECK_FALSE(m.connected);
  CHECK(m.dist[0][3] == -1);
  CHECK(m.diameter == 1);
}

TEST_CASE("bfs_metrics on the Petersen graph") {
  auto m = bfs_metrics(petersen());
  CHECK(m.connected);
  CHECK(m.diameter == 2);
}

TEST_CASE("girth basics") {
  CHECK(girth(looped_cycle_graph(5)) == 1);
  CHECK(girth(cycle_graph(9)) == 9);
  // Path on 4 vertices: a tree, so twice the diameter.
  auto path = Multigraph::from_edges(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  CHECK(girth(path) == 6);
  auto doubled = Multigraph::from_edges(3, {{0, 1, 2}, {1, 2, 1}});
  CHECK(girth(doubled) == 2);
  CHECK(girth(petersen()) == 5);
  CHECK(girth(complete_graph(4)) == 3);
}

TEST_CASE("short_cycles on a triangle with a pendant edge") {
  auto g = Multigraph::from_edges(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}});
  auto cycles = short_cycles(g, 4);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].verts == std::vector<Vertex>{0, 1, 2});
  CHECK(cycles[0].induced);
}

TEST_CASE("short_cycles threshold is strict") {
  CHECK(short_cycles(cycle_graph(9), 9).empty());
  auto cycles = short_cycles(cycle_graph(9), 10);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].verts.size() == 9);
}

TEST_CASE("short_cycles counts loops and parallel pairs") {
  auto g = Multigraph::from_edges(2, {{0, 0, 1}, {0, 1, 2}});
  auto cycles = short_cycles(g, 3);
  REQUIRE(cycles.size() == 2);
  CHECK(cycles[0].verts == std::vector<Vertex>{0});
  CHECK(cycles[0].induced);
  CHECK(cycles[1].verts == std::vector<Vertex>{0, 1});
  CHECK_FALSE(cycles[1].induced);  // the loop at 0 joins |E(C)| = 3
}

TEST_CASE("short_cycles census on K_4 and the Petersen graph") {
  auto k4 = short_cycles(complete_graph(4), 5);
  std::int64_t triangles = 0, squares = 0;
  for (const auto& c : k4) (c.verts.size() == 3 ? triangles : squares)++;
  CHECK(triangles == 4);
  CHECK(squares == 3);
  for (const auto& c : k4) CHECK(c.induced == (c.verts.size() == 3));

  auto pet = short_cycles(petersen(), 6);
  CHECK(pet.size() == 12);  // pentagons only
  for (const auto& c : pet) {
    CHECK(c.verts.size() == 5);
    CHECK(c.induced);
  }
}

TEST_CASE("simplicial distance between midpoints of adjacent edges") {
  auto g = cycle_graph(9);
  auto p = SimplicialPoint::edge_point(0, 1, 0, kGrid / 2);
  auto q = SimplicialPoint::edge_point(1, 2, 0, kGrid / 2);
  CHECK(simplicial_distance(g, p, q) == doctest::Approx(1.0));
}

TEST_CASE("simplicial distance restricts to the graph metric on vertices") {
  auto g = petersen();
  auto m = bfs_metrics(g);
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = 0; v < g.n(); ++v)
      CHECK(simplicial_distance(g, SimplicialPoint::vertex(u), SimplicialPoint::vertex(v)) ==
            doctest::Approx(m.dist[u][v]));
}

TEST_CASE("simplicial distance from an edge midpoint of C_5 to the far vertex") {
  auto g = cycle_graph(5);
  auto p = SimplicialPoint::edge_point(0, 1, 0, kGrid / 2);
  CHECK(simplicial_distance(g, p, SimplicialPoint::vertex(3)) == doctest::Approx(2.5));
}

TEST_CASE("simplicial distance from an edge midpoint of C_4 to the opposite vertex") {
  auto g = cycle_graph(4);
  auto p = SimplicialPoint::edge_point(0, 1, 0, kGrid / 2);
  CHECK(simplicial_distance(g, p, SimplicialPoint::vertex(2)) == doctest::Approx(1.5));
}

TEST_CASE("same-edge and loop geodesics") {
  auto g = looped_cycle_graph(5);
  auto a = SimplicialPoint::edge_point(0, 1, 0, kGrid / 4);
  auto b = SimplicialPoint::edge_point(0, 1, 0, 3 * kGrid / 4);
  CHECK(simplicial_distance(g, a, b) == doctest::Approx(0.5));
  // Points on the loop circle at vertex 2, parameters 0.25 and 0.75: the loop
  // identifies t with 1-t, so they coincide.
  auto l1 = SimplicialPoint::edge_point(2, 2, 0, kGrid / 4);
  auto l2 = SimplicialPoint::edge_point(2, 2, 0, 3 * kGrid / 4);
  CHECK(l1 == l2);
  CHECK(simplicial_distance(g, l1, l2) == doctest::Approx(0.0));
  // Loop point to its vertex and to a neighbor.
  CHECK(simplicial_distance(g, l1, SimplicialPoint::vertex(2)) == doctest::Approx(0.25));
  CHECK(simplicial_distance(g, l1, SimplicialPoint::vertex(3)) == doctest::Approx(1.25));
}

TEST_CASE("simplicial distance spans orientation conventions") {
  auto g = cycle_graph(4);
  auto p = SimplicialPoint::edge_point(1, 0, 0, kGrid / 4);  // = (0,1) at 3/4
  CHECK(p.u == 0);
  CHECK(p.off == 3 * kGrid / 4);
  CHECK(simplicial_distance(g, p, SimplicialPoint::vertex(1)) == doctest::Approx(0.25));
}

TEST_CASE("simplicial diameter sandwich on sampled graphs") {
  for (auto g : {cycle_graph(9), petersen(), complete_graph(5)}) {
    auto m = bfs_metrics(g);
    double worst = 0.0;
    auto list = g.edge_list();
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a; b < list.size(); ++b) {
        auto p = SimplicialPoint::edge_point(list[a][0], list[a][1], 0, kGrid / 2);
        auto q = SimplicialPoint::edge_point(list[b][0], list[b][1], 0, kGrid / 2);
        worst = std::max(worst, simplicial_distance(g, p, q));
      }
    CHECK(worst <= static_cast<double>(m.diameter) + 1.0);
  }
}

TEST_CASE("edge_sum conventions") {
  auto c4 = cycle_graph(4);
  auto ones = [](Vertex u, Vertex v) { return u == v ? 0.0 : 1.0; };
  CHECK(edge_sum(c4, ones) == doctest::Approx(4.0));
  auto c4loops = Multigraph::from_edges(
      4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}});
  CHECK(edge_sum(c4loops, ones) == doctest::Approx(4.0));
  auto doubled = Multigraph::from_edges(2, {{0, 1, 2}});
  CHECK(edge_sum(doubled, [](Vertex u, Vertex v) { return u == v ? 0.0 : 5.0; }) ==
        doctest::Approx(10.0));
  CHECK_THROWS_WITH_AS(edge_sum(c4, [](Vertex, Vertex) { return 1.0; }),
                       "kernel diagonal must vanish", std::invalid_argument);
}

TEST_CASE("graph json round-trip") {
  for (auto g : {cycle_graph(9), looped_cycle_graph(5), petersen()}) {
    auto h = graph_from_json(graph_to_json(g));
    CHECK(h.n() == g.n());
    CHECK(h.edge_list() == g.edge_list());
    if (g.rotation()) {
      REQUIRE(h.rotation().has_value());
      CHECK(*h.rotation() == *g.rotation());
    }
  }
}

TEST_CASE("graph json accepts accumulated duplicate edge rows") {
  auto g = graph_from_json(R"({"n": 2, "edges": [[0,1,1],[1,0,1],[0,0,2]]})");
  CHECK(g.multiplicity(0, 1) == 2);
  CHECK(g.loops(0) == 2);
  CHECK(g.degree(0) == 4);
}
