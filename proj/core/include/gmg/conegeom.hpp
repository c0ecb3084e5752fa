#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gmg/metric.hpp"
#include "gmg/multigraph.hpp"

namespace gmg {

// Point of the Euclidean cone over a finite metric: radius s and a base
// index.  All points with s = 0 are the cusp; the base index is then ignored.
struct ConePoint {
  double s = 0.0;
  Vertex base = 0;
};

inline ConePoint cone_cusp() { return ConePoint{0.0, 0}; }
inline ConePoint cone_point(double s, Vertex base) { return ConePoint{s, base}; }

// sqrt(s^2 + t^2 - 2 s t cos(min{pi, d_X})), equivalently
// sqrt((s-t)^2 + 2 s t (1 - cos theta)).  Cusp distance to (s, x) is s.
double cone_distance(const FiniteMetric& X, ConePoint p, ConePoint q);

// Finite materialization of the cone: the cusp at index 0, then
// (radii[i], x_j) at index 1 + i*|X| + j.
struct ConeMetric {
  FiniteMetric metric;
  std::vector<double> radii;
  std::int64_t base_points = 0;

  std::int64_t index_of(std::size_t radius_idx, Vertex x) const {
    return 1 + static_cast<std::int64_t>(radius_idx) * base_points + x;
  }
  ConePoint point(std::int64_t idx) const;
};

// Validated as a metric; a triangle violation is an implementation bug and
// throws logic_error.
ConeMetric cone_metric(const FiniteMetric& X, const std::vector<double>& radii);

// One component of a graph family union: the simplicial metric of a graph,
// its girth, and its graph (vertex-to-vertex) diameter.
struct FamilyComponent {
  FiniteMetric metric;
  double girth = 0.0;
  double graph_diameter = 0.0;
};

struct GraphFamilyMetric {
  FiniteMetric metric;                 // the whole union
  std::vector<std::int64_t> offsets;   // start index of each component
  std::vector<std::int64_t> sizes;     // point count of each component
  double ratio_bound = 0.0;            // R
  double cross_distance = 0.0;         // 2 pi (R + 1)
};

// Components are rescaled by 2 pi / girth; distances across components are
// exactly 2 pi (R + 1).  Every component must satisfy diam(G) <= R girth(G).
GraphFamilyMetric family_union(const std::vector<FamilyComponent>& components, double R);

// (s, x) -> (s, x) if x is in A, otherwise the cusp.
std::function<ConePoint(ConePoint)> cusp_retraction(const FiniteMetric& X,
                                                    const std::vector<Vertex>& A);

struct UnionPoincareOptions {
  std::vector<double> radii = {0.25, 0.5, 1.0, 2.0, 4.0};
  std::int64_t sample_pairs = 100000;
  std::uint64_t seed = 1;
  std::int64_t search_budget = 2'000'000;
  std::int64_t search_restarts = 30;
};

struct UnionPoincareReport {
  double bound = 0.0;      // 216 pi^4 (gamma_a + gamma_b) / beta^4
  double gamma_a = 0.0;    // measured gamma_+ of M against Cone(A)
  double gamma_b = 0.0;
  double lipschitz_worst = 0.0;  // scaled-retraction Lipschitz ratio, <= sqrt(3) pi
  double sum_sq_margin = std::numeric_limits<double>::infinity();
  // min over pairs of (d_A^2 + d_B^2) / ((beta^4 / 72 pi^2) d_X^2); >= 1
  double pi_separated_bound = std::numeric_limits<double>::quiet_NaN();
  // 2 max(gamma_a, gamma_b) when A, B are disjoint and pi-separated
  bool degenerate = false;  // one-piece case: A or B already covers X
  std::int64_t pairs = 0;
};

// Measured right side of the cone-union Poincare bound, with certification of
// the sqrt(3) pi Lipschitz constant and the beta^4 / 72 pi^2 sum-of-squares
// lower bound on stratified sampled pairs.  M is a symmetric stochastic
// matrix, row-major n by n.
UnionPoincareReport union_poincare_report(const std::vector<double>& M, std::int64_t n,
                                          const FiniteMetric& X, const std::vector<Vertex>& A,
                                          const std::vector<Vertex>& B, double beta,
                                          const UnionPoincareOptions& opt = {});

double union_poincare_bound(const std::vector<double>& M, std::int64_t n, const FiniteMetric& X,
                            const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                            double beta, const UnionPoincareOptions& opt = {});

// d_cone / max{|s-t|, max{s,t} sqrt(2 (1 - cos theta))}; in [1/3, sqrt(2)]
// for distinct points, NaN for equal ones.
double cone_comparison_ratio(const FiniteMetric& X, ConePoint p, ConePoint q);

// d_cone >= max{s,t} sin(min{pi/2, d_X}).
bool cone_sinus_bound(const FiniteMetric& X, ConePoint p, ConePoint q);

// sqrt(diam(X)^2 ||f||_Lip^2 + 2 ||f||_inf^2) for f given pointwise; the
// Lipschitz constant of (s, x) -> (f(x) s, x) never exceeds it.
double rescaling_lipschitz_bound(const FiniteMetric& X, const std::vector<double>& f);

// Stratified pair sampler: uniform, near-cusp, antipodal, and equal-radius
// strata with a fixed seed.
std::vector<std::pair<ConePoint, ConePoint>> sample_cone_pairs(const FiniteMetric& X,
                                                               std::int64_t count,
                                                               std::uint64_t seed);

}  // namespace gmg
