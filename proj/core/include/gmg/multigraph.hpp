#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmg/common.hpp"

namespace gmg {

using Vertex = std::int64_t;

// Half-edge pairing of a d-regular multigraph.  Rot(v,i) = (w,j) glues the
// i-th half-edge at v to the j-th half-edge at w; it is an involution, and a
// fixed point encodes a self-loop (degree contribution 1).
struct RotationMap {
  std::int64_t d = 0;
  std::vector<std::int64_t> table;  // table[v*d+i] = w*d+j

  std::pair<Vertex, std::int64_t> operator()(Vertex v, std::int64_t i) const {
    std::int64_t e = table[static_cast<std::size_t>(v * d + i)];
    return {e / d, e % d};
  }
  bool is_involution() const;

  friend bool operator==(const RotationMap&, const RotationMap&) = default;
};

// Regular multigraph with self-loops.  A self-loop contributes exactly 1 to
// the degree and 1 to the diagonal of the multiplicity matrix.
class Multigraph {
 public:
  Multigraph() = default;

  // Accumulates (u, v, multiplicity) rows; [u,u,k] adds k self-loops.
  static Multigraph from_edges(std::int64_t n,
                               const std::vector<std::array<std::int64_t, 3>>& edges);
  static Multigraph from_rotation(std::int64_t n, RotationMap rot);
  // No symmetry repair; rows are taken as-is so validate() can see defects.
  static Multigraph from_rows_unchecked(
      std::int64_t n, std::vector<std::vector<std::pair<Vertex, std::int64_t>>> rows);

  std::int64_t n() const { return n_; }
  std::int64_t degree(Vertex u) const { return deg_[static_cast<std::size_t>(u)]; }
  // Sorted (neighbor, multiplicity) pairs; a diagonal entry counts self-loops.
  const std::vector<std::pair<Vertex, std::int64_t>>& row(Vertex u) const {
    return adj_[static_cast<std::size_t>(u)];
  }
  std::int64_t multiplicity(Vertex u, Vertex v) const;
  std::int64_t loops(Vertex u) const { return multiplicity(u, u); }

  std::int64_t half_edge_count() const;  // sum of degrees
  std::int64_t loop_count() const;
  // Poincare normalization |E| = (sum of degrees)/2, as a real number so that
  // self-loops weigh one half and the Rayleigh identity stays exact.
  double edge_normalization() const { return 0.5 * static_cast<double>(half_edge_count()); }

  std::optional<std::int64_t> regular_degree() const;

  const std::optional<RotationMap>& rotation() const { return rot_; }
  RotationMap& mutable_rotation();
  void attach_rotation(RotationMap rot);
  // Deterministic pairing realizing the multiplicity matrix: loops become
  // fixed points, parallel copies pair consecutive free ports.
  void attach_default_rotation();
  void drop_rotation() { rot_.reset(); }

  // Rows (u, v, m) with u <= v, sorted.
  std::vector<std::array<std::int64_t, 3>> edge_list() const;

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  std::int64_t n_ = 0;
  std::vector<std::vector<std::pair<Vertex, std::int64_t>>> adj_;
  std::vector<std::int64_t> deg_;
  std::optional<RotationMap> rot_;
};

struct ValidationReport {
  bool ok = true;
  std::string error;  // first violated invariant
  std::optional<std::int64_t> regular_degree;
};

ValidationReport validate(const Multigraph& g,
                          std::optional<std::int64_t> expect_degree = std::nullopt);

struct BfsMetrics {
  std::vector<std::vector<std::int32_t>> dist;  // -1 marks unreachable
  std::int64_t diameter = 0;                    // max finite distance
  bool connected = true;
};

std::vector<std::int32_t> bfs_from(const Multigraph& g, Vertex source);
BfsMetrics bfs_metrics(const Multigraph& g);
bool is_connected(const Multigraph& g);

// Smallest cycle length: self-loop 1, parallel pair 2, else shortest simple
// cycle; acyclic graphs return 2*diam(G).
std::int64_t girth(const Multigraph& g);

struct Cycle {
  std::vector<Vertex> verts;  // cyclic order; least vertex first
  bool induced = false;       // |E_G(C)| == |C|
};

// All cycles with |C| < t (strict).  Bounded-depth DFS with canonical
// rotation/reflection dedup; lengths are capped at 24.
std::vector<Cycle> short_cycles(const Multigraph& g, double t);

// Point of the simplicial complex: a vertex (off == 0), or an interior point
// of edge instance (u, v, instance) at offset off/kGrid from u.  Offsets are
// exact on the 2^-20 grid; (u,v,t) and (v,u,1-t) are the same point, and on a
// self-loop t and 1-t coincide (the loop is a circle through its vertex).
struct SimplicialPoint {
  Vertex u = 0;
  Vertex v = 0;
  std::int64_t instance = 0;
  std::int64_t off = 0;  // grid units in [0, kGrid)

  static SimplicialPoint vertex(Vertex w) { return {w, w, 0, 0}; }
  static SimplicialPoint edge_point(Vertex a, Vertex b, std::int64_t instance,
                                    std::int64_t off_units);
  bool is_vertex() const { return off == 0; }

  friend bool operator==(const SimplicialPoint&, const SimplicialPoint&) = default;
};

// Geodesic distance on the complex in 2^-20 grid units.  dist_from_u/v are
// single-source BFS rows for the anchor vertices of p; pass the same row twice
// when p is a vertex or a loop point.
std::int64_t simplicial_distance_units(const Multigraph& g, const SimplicialPoint& p,
                                       const SimplicialPoint& q,
                                       const std::vector<std::int32_t>& dist_from_u,
                                       const std::vector<std::int32_t>& dist_from_v);
// Convenience wrapper running its own BFS; unitless result (edges have length 1).
double simplicial_distance(const Multigraph& g, const SimplicialPoint& p,
                           const SimplicialPoint& q);

// (1/2) sum_{(u,v)} E_G(u,v) K(u,v); K must vanish on the diagonal, so
// self-loops contribute nothing.
double edge_sum(const Multigraph& g, const std::function<double(Vertex, Vertex)>& kernel);

Multigraph cycle_graph(std::int64_t k);
// C_k with one self-loop per vertex (3-regular).
Multigraph looped_cycle_graph(std::int64_t k);
Multigraph complete_graph(std::int64_t k);
// One vertex, d self-loops (the identity-like d-regular graph).
Multigraph all_loops_graph(std::int64_t n, std::int64_t d);

std::string graph_to_json(const Multigraph& g);
Multigraph graph_from_json(const std::string& text);
void save_graph(const Multigraph& g, const std::string& path);
Multigraph load_graph(const std::string& path);

}  // namespace gmg
