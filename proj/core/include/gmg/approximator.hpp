#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gmg/combinators.hpp"
#include "gmg/metric.hpp"
#include "gmg/multigraph.hpp"

namespace gmg {

// Expander templates sorted by size.  size_ratio records M, the largest jump
// between successive member sizes; every n in range then has a member with
// n <= |V| <= M n.
struct TemplateFamily {
  std::vector<Multigraph> members;  // ascending size, each 3-regular
  double size_ratio = 1.0;          // M
};

// Validates members (3-regular, strictly ascending sizes).  size_ratio = 0
// computes M from the successive sizes; an explicit value must dominate them.
TemplateFamily make_template_family(std::vector<Multigraph> members,
                                    double size_ratio = 0.0);

// Best-of-random 3-regular templates at sizes smallest * 2^k, k < levels.
TemplateFamily doubling_template_family(std::int64_t smallest, std::int64_t levels,
                                        std::uint64_t seed);

// Iterated-construction templates: level graphs of the base recipe, sizes
// 9 d^2 n^j.  size_ratio is the base vertex count.
TemplateFamily zigzag_template_family(const Multigraph& base, std::int64_t depth);

// n query points bucketed onto a template expander; edges are the template's
// edges projected to bucket indices, intra-bucket edges kept as loops so the
// projected multiset size equals |E_{G_k}| exactly.
struct UniversalApproximator {
  std::int64_t n = 0;
  std::vector<std::array<std::int64_t, 3>> edges;  // (i, j, mult), i <= j
  std::int64_t edge_total = 0;                     // |E_n| = |E_{G_k}|
  std::int64_t template_index = 0;
  std::int64_t template_size = 0;  // |V_{G_k}|
  double size_ratio = 1.0;         // family M at build time
  std::vector<std::int64_t> bucket_of;    // template vertex -> bucket
  std::vector<std::int64_t> bucket_size;  // sizes in {floor(V/n), floor(V/n)+1}
};

// Smallest member with |V| >= n; requires |V| <= M n.  Buckets are contiguous
// index ranges.  |E_n| <= (3/2) M n is asserted.
UniversalApproximator build_universal(const TemplateFamily& family, std::int64_t n);

// Pairwise distance access with a monotone call counter.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;

  double operator()(std::int64_t i, std::int64_t j) {
    ++count_;
    return query_impl(i, j);
  }
  std::int64_t queries() const { return count_; }
  std::int64_t size() const { return n_; }

 protected:
  explicit DistanceOracle(std::int64_t n) : n_(n) {}
  virtual double query_impl(std::int64_t i, std::int64_t j) = 0;

 private:
  std::int64_t n_ = 0;
  std::int64_t count_ = 0;
};

// Dense matrix oracle; validates symmetry and a zero diagonal on construction.
class MatrixOracle final : public DistanceOracle {
 public:
  explicit MatrixOracle(FiniteMetric metric);

 protected:
  double query_impl(std::int64_t i, std::int64_t j) override {
    return metric_(i, j);
  }

 private:
  FiniteMetric metric_;
};

// Shortest-path metric of a connected graph as an oracle.
MatrixOracle graph_metric_oracle(const Multigraph& g);

// Oracle over tuple positions: d(i, j) = base(tuple[i], tuple[j]).
MatrixOracle tuple_oracle(const FiniteMetric& base, const std::vector<std::int64_t>& tuple);

struct EstimateResult {
  double estimate = 0.0;     // (1/|E_n|) sum over E_n of d^2
  std::int64_t queries = 0;  // exactly |E_n|
  double scale = 1.0;        // calibration constant s, reported not applied
};

// One oracle call per E_n multiset element, loops included.
EstimateResult estimate_avg_sq(const UniversalApproximator& u, DistanceOracle& oracle);

// A = (1/n^2) sum over all ordered pairs of d^2, by symmetry over i < j.
double exact_avg_sq(DistanceOracle& oracle, std::int64_t n);

// Mean d^2 over `pairs` uniformly random ordered pairs (diagonal included);
// unbiased for A.
double sampling_baseline(DistanceOracle& oracle, std::int64_t n, std::int64_t pairs,
                         std::uint64_t seed);

struct RatioRow {
  std::int64_t trial = 0;
  std::int64_t m = 0;
  std::int64_t n = 0;
  double exact = 0.0;
  double estimate = 0.0;
  double ratio = 0.0;  // estimate / exact
  std::int64_t queries = 0;
  std::string tuple_mode;  // "uniform" | "adversarial"
};

struct RatioExperiment {
  std::vector<RatioRow> rows;
  double d_emp_uniform = 0.0;  // sqrt(max ratio / min ratio)
  double d_emp_adversarial = 0.0;
  double best_scale_uniform = 1.0;  // 1/sqrt(max * min): centers the band at 1
  double best_scale_adversarial = 1.0;

  // header trial,m,n,exact,estimate,ratio,queries,tuple_mode
  std::string csv() const;
};

// Per trial: H ~ uniform simple (m, d); tuples of n distinct vertices drawn
// uniformly and as a BFS ball; exact vs approximator estimate through the
// tuple oracle.
RatioExperiment ratio_experiment(std::int64_t m, std::int64_t d, std::int64_t n,
                                 std::int64_t trials, std::uint64_t seed,
                                 const TemplateFamily& family);

struct SlopeCi {
  double slope = 0.0;
  double half_width = 0.0;  // t_{0.975, k-2} * se
  double lo = 0.0;
  double hi = 0.0;
};

// Least-squares slope with a 95% confidence interval; needs >= 3 points.
SlopeCi slope_ci(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace gmg
