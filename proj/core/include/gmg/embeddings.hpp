#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gmg/common.hpp"
#include "gmg/conegeom.hpp"
#include "gmg/metric.hpp"
#include "gmg/multigraph.hpp"

namespace gmg {

// Finite family of vectors sharing one coordinate frame.  distance() is the
// norm of the difference under the tagged norm.
struct VectorSet {
  enum class Norm { l1, l2 };

  Norm norm = Norm::l1;
  std::vector<std::vector<double>> rows;  // one row per point, equal lengths

  std::int64_t size() const { return static_cast<std::int64_t>(rows.size()); }
  std::int64_t dim() const {
    return rows.empty() ? 0 : static_cast<std::int64_t>(rows.front().size());
  }
  double norm_of(std::int64_t i) const;
  double distance(std::int64_t i, std::int64_t j) const;
};

// M (1 - e^{-d/M}): the distance realized between cube points at L1 distance
// d by the truncated Walsh embedding with threshold M.
double walsh_truncated_distance(double l1_distance, double M);

// Truncated Walsh embedding of points of {0,1}^k, materialized on all 2^k
// subset coordinates.  Every output vector has L1 norm exactly M, and the
// pairwise distances follow walsh_truncated_distance exactly.  k <= 16.
VectorSet walsh_truncation(const std::vector<std::vector<int>>& cube_points,
                           double M);

// Truncated L1 embedding of rational-grid vectors: unary grid discretization
// into a hypercube followed by the Walsh embedding, with coordinates of equal
// sign pattern on the input merged.  Output dimension is 2^pattern_rank.
// Pairwise ratios against min{M, d} lie in [(1-1/e)/(1+eps), 1].
struct TruncateResult {
  VectorSet vecs;
  std::int64_t grid_denominator = 1;
  int pattern_rank = 0;
};
TruncateResult truncate_l1(const std::vector<std::vector<double>>& points,
                           double M, double eps);

// Point of the cone over L1: radius s and a base vector.  s = 0 is the cusp.
struct ConeL1Point {
  double s = 0.0;
  std::vector<double> base;
};

// (s, x) -> s * T_pi(x) with T_pi the truncated L1 embedding at threshold pi.
// Certified on every input pair: ratio to the cone distance lies in
// [lower_const/(1+eps), upper_const] with upper_const = pi sqrt(5)/2 and
// lower_const = pi(e-1)/sqrt(4 pi^2 e^2 + (e-1)^2); distortion <= 11.17(1+eps).
struct ConeL1Result {
  VectorSet vecs;
  double upper_const = 0.0;
  double lower_const = 0.0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double distortion = 0.0;
};
ConeL1Result cone_l1_embed(const std::vector<ConeL1Point>& points, double eps);

// Euclidean realization of the alpha-snowflaked line on a finite point set:
// Gram matrix K(s,t) = (|s|^{2a} + |t|^{2a} - |s-t|^{2a})/2 factored through
// its PSD root, so ||h(s) - h(t)|| = |s-t|^alpha and ||h(s)|| = |s|^alpha.
// The input must contain 0 (h(0) = 0 anchors the norms).
struct HelixResult {
  VectorSet vecs;
  double gram_min_eigenvalue = 0.0;
};
HelixResult helix(const std::vector<double>& points, double alpha);

// Snowflaked cone into L2: phi(s, x) = h(s) (x) tau(f(x)) where h is the
// helix on the radii and tau is the Gaussian-kernel map with
// ||tau(u) - tau(v)||^2 = pi^{2a} (1 - e^{-||u-v||^2 / pi^{2a}}).
// f must embed the alpha-snowflake of X into L2 with distortion at most D:
// d(x,y)^alpha / D <= ||f(x)-f(y)|| <= d(x,y)^alpha.
// Certified on every pair: ||phi(p)-phi(q)|| / d_cone(p,q)^alpha lies in
// [lower_const, upper_const].  paper_upper_const records the looser constant
// from the source derivation for comparison; notes holds remark-level
// figures that are logged, never asserted.
struct SnowflakeResult {
  VectorSet vecs;
  double upper_const = 0.0;
  double lower_const = 0.0;
  double paper_upper_const = 0.0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double distortion = 0.0;
  std::string notes;
};
SnowflakeResult snowflake_cone_embed(const FiniteMetric& X,
                                     const std::vector<ConePoint>& points,
                                     double alpha,
                                     const std::vector<std::vector<double>>& f,
                                     double D);

// Quotient of a simple connected graph by its cycles shorter than t: each
// short cycle collapses to one vertex, cycle edges vanish, all other edges
// survive.  Requires the short cycles to be induced and pairwise disjoint
// with no edge between two of them; then |V_q| = |V| - |Gamma| + #cycles and
// |E_q| = |E| - |Gamma| with Gamma the union of the cycle vertex sets, and
// quotient edges correspond bijectively to surviving input edges.
struct QuotientResult {
  Multigraph graph;
  double t = 0.0;
  std::vector<std::vector<Vertex>> cycles;  // input short cycles, cyclic order
  std::vector<Vertex> vertex_map;           // input vertex -> quotient vertex
  std::vector<Vertex> cycle_vertex;         // cycle index -> quotient vertex
  // Quotient edge i (in graph.edge_list() order) came from this input edge.
  std::vector<std::array<Vertex, 2>> edge_origin;
};
QuotientResult quotient_graph(const Multigraph& g, double t);

// Finite distribution over spanning trees of a simple host graph.  Trees are
// edge-index subsets into host_edges; weights are exact rationals summing to
// one, so marginals are exact weighted indicator sums.
struct SpanningTreeDistribution {
  std::vector<std::array<Vertex, 2>> host_edges;
  std::vector<std::vector<std::int32_t>> trees;
  std::vector<Rat> weights;

  Rat marginal(std::int32_t edge_index) const;
  double marginal_double(std::int32_t edge_index) const;
  // Spanning, acyclic, positive weights summing to one; n is the host order.
  void validate(std::int64_t n) const;
};

// Spanning-tree distribution of a graph with |E(S)| <= (1+delta)(|S|-1) for
// all vertex sets S, with every edge marginal >= 1/(1+delta) - 1e-9.  Solves
// for a point of the spanning-tree base polytope with per-edge lower bound
// 1/(1+delta) (lazy cut generation, min-cut separation), then peels off at
// most |E| spanning trees, each with the largest weight that keeps the
// remainder inside the scaled polytope.
SpanningTreeDistribution tree_polytope_measure(const Multigraph& g,
                                               double delta);

// Product distribution on trees that use all but one edge of every short
// cycle: a tree of the quotient (drawn from tree_polytope_measure at
// 4 delta/(1-3 delta)) times an independent uniform dropped edge per cycle.
// Marginals: >= (1-3 delta)/(1+delta) off the short cycles and exactly
// (|C|-1)/|C| on a cycle of length |C|.  Requires 0 < delta < 1/3 and
// t = 1/(3 delta).
SpanningTreeDistribution good_tree_measure(const Multigraph& g, double t,
                                           double delta);

struct SparseEmbedReport {
  std::int64_t n = 0;
  std::int64_t edges = 0;
  double delta = 0.0;
  double t = 0.0;
  std::int64_t diameter = 0;
  std::int64_t short_cycle_count = 0;
  std::int64_t tree_count = 0;
  std::int64_t point_count = 0;
  std::int64_t pair_count = 0;
  double truncation = 0.0;  // threshold of the per-tree truncated embedding
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double distortion = 0.0;
  // Largest E[min{d_T, diam}] / ((1 + delta diam) d) over the certified
  // pairs: the measured constant of the averaged-tree upper bound.
  double expectation_constant = 0.0;
  std::string notes;
};

// Embedding of sample points of the simplicial complex of a sparse graph
// into L1: spanning trees of the complex are sampled from the good-tree
// distribution (split points on non-tree edges uniform on the offset grid),
// each tree metric maps isometrically to L1 by edge coordinates, each block
// is truncated at diameter + 1 and weighted by 1/#trees.  Reports measured
// distortion and the averaged-tree expectation constant.
struct SparseEmbedResult {
  std::vector<SimplicialPoint> points;
  VectorSet embedding;
  SparseEmbedReport report;

  std::string report_json() const;
};
SparseEmbedResult sparse_graph_l1(const Multigraph& g, double delta,
                                  std::int64_t samples, std::uint64_t seed);

}  // namespace gmg
