#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmg/metric.hpp"
#include "gmg/multigraph.hpp"

namespace gmg {

// Eigenvalues of the normalized adjacency A/d, sorted descending.  Dense
// symmetric solve; n is capped at 4096.
std::vector<double> spectrum(const Multigraph& g);

// Second eigenvalue and eigenvector from the dense solver.
std::pair<double, std::vector<double>> second_eigenpair(const Multigraph& g);

struct IterativeEigEstimate {
  double value = 0.0;     // eigenvalue of A/d
  double residual = 0.0;  // ||A v / d - value * v|| with ||v|| = 1
  std::int64_t matvecs = 0;
  bool converged = false;
};

// Deflated power iteration on (I + A/d)/2 for lambda_2; no size cap.
IterativeEigEstimate lambda2_iterative(const Multigraph& g, double tol = 1e-9,
                                       std::int64_t max_matvecs = 20000,
                                       std::uint64_t seed = 1);
// Power iteration on (I - A/d)/2 for lambda_min.
IterativeEigEstimate lambda_min_iterative(const Multigraph& g, double tol = 1e-9,
                                          std::int64_t max_matvecs = 20000,
                                          std::uint64_t seed = 1);

// Dense when n <= 4096, iterative above.
double lambda2(const Multigraph& g);

double gamma_line(const Multigraph& g);       // 1/(1 - lambda_2)
double gamma_plus_line(const Multigraph& g);  // 1/(1 - max(lambda_2, -lambda_n))

// Maps are arrays vertex -> point index in X.  The gamma denominator follows
// the once-per-edge convention with |E| = (sum of degrees)/2; the gamma_+
// denominator runs over ordered pairs with multiplicity, loops included.
double poincare_ratio(const Multigraph& g, const FiniteMetric& X,
                      const std::vector<std::int64_t>& f);
double ratio_plus(const Multigraph& g, const FiniteMetric& X, const std::vector<std::int64_t>& f,
                  const std::vector<std::int64_t>& g2);

// Real-line specializations, O(n + |E|).
double poincare_ratio_real(const Multigraph& g, const std::vector<double>& f);
double ratio_plus_real(const Multigraph& g, const std::vector<double>& f,
                       const std::vector<double>& g2);

struct PoincareReport {
  double gamma_estimate = 0.0;
  std::vector<std::int64_t> witness_f;
  std::vector<std::int64_t> witness_g;  // empty unless plus
  bool plus = false;
  bool exact = false;
  bool degenerate = false;  // |X| = 1
  std::string mode;         // "exact" or "search"
  std::int64_t iterations = 0;
  std::uint64_t seed = 0;
};

enum class SearchMode { exhaustive, local };

// Exhaustive mode enumerates every map (|X|^n maps, or |X|^{2n} pairs for
// gamma_+) and is exact for the finite target; local mode is steepest-ascent
// single-coordinate reassignment with random restarts, a valid lower bound.
PoincareReport gamma_search(const Multigraph& g, const FiniteMetric& X, SearchMode mode,
                            bool plus = false, std::int64_t budget = 20'000'000,
                            std::uint64_t seed = 1, std::int64_t restarts = 100);

// Same search over an explicit symmetric nonnegative weight matrix w (row
// stochastic in the intended use); the denominator is (1/n) sum w_ij d^2.
PoincareReport matrix_gamma_search(const std::vector<double>& w, std::int64_t n,
                                   const FiniteMetric& X, SearchMode mode, bool plus = false,
                                   std::int64_t budget = 20'000'000, std::uint64_t seed = 1,
                                   std::int64_t restarts = 100);
double matrix_ratio_plus(const std::vector<double>& w, std::int64_t n, const FiniteMetric& X,
                         const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& g2);

// Exact max over all 2^n two-point cuts of the gamma ratio; n <= 24.
// Disconnected graphs give +infinity.
double gamma_cut_exact(const Multigraph& g);

struct CheegerReport {
  bool ok = true;
  double gamma_found = 0.0;  // best search/exact value over X
  std::optional<double> cut_gamma;
  double sqrt_bound = 0.0;  // 1/sqrt(1 - lambda_2)
  double margin = 0.0;      // gamma_found / sqrt_bound, recorded not asserted
  bool exact = false;
};

CheegerReport cheeger_check(const Multigraph& g, const FiniteMetric& X, std::uint64_t seed = 1);

struct ExtrapolationReport {
  std::vector<double> quotients;  // per sampled L1 configuration
  double max_quotient = 0.0;
  double gamma_line_sq = 0.0;  // 1/(1-lambda_2)^2
};

ExtrapolationReport l1_extrapolation_check(const Multigraph& g, std::int64_t configs = 3,
                                           std::uint64_t seed = 1);

}  // namespace gmg
