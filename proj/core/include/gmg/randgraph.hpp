#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmg/multigraph.hpp"

namespace gmg {

// One-sided check outcomes: pass and fail are certified, undetermined means
// the search neither certified nor refuted the property.
enum class Verdict { pass, fail, undetermined };

std::string to_string(Verdict v);

// Uniform perfect matching of {0..n-1} x {0..d-1} projected to a d-regular
// multigraph; the rotation map is the matching itself, so within-vertex pairs
// become loops.  Requires nd even.
Multigraph pairing_sample(std::int64_t n, std::int64_t d, std::uint64_t seed);

struct SimpleSampleResult {
  Multigraph graph;
  std::int64_t rejections = 0;  // pairing draws discarded before the simple one
};

// Rejection-samples the pairing model until the projection is simple, which
// restricts it to the uniform distribution on simple d-regular graphs.
// Requires nd even and d < n; acceptance decays like exp(-(d^2-1)/4).
SimpleSampleResult uniform_simple_sample(std::int64_t n, std::int64_t d, std::uint64_t seed,
                                         std::int64_t max_rejections = 200000);

// Membership check for the class of graphs whose small vertex sets are
// (1+delta)-sparse: |E(S)| < (1+delta)|S| whenever |S| <= n^{1-eps}.
struct SparsityReport {
  Verdict verdict = Verdict::undetermined;
  double max_density = 0.0;          // global max |E(S)|/|S|, exact
  std::vector<Vertex> violator;      // witness set when verdict == fail
  std::int64_t violator_edges = 0;   // |E(violator)|
  std::int64_t size_cap = 0;         // floor(n^{1-eps})
  double delta = 0.0;
  std::string note;
};

// Exact global densest-subgraph bound certifies membership when it is below
// 1+delta; otherwise a violator is searched around short cycles and by
// peeling.  A returned violator is always validated exactly; absence of one
// is reported as undetermined, never as membership.
SparsityReport sparsity_check(const Multigraph& g, double eps, double delta);

// Deletes one representative edge (lexicographically smallest) per cycle of
// length < t.  Requires g simple, connected, t <= 25, and the short cycles
// pairwise vertex-disjoint.
struct SurgeryResult {
  Multigraph surgered;                             // L = (V, E \ I)
  std::vector<std::array<std::int64_t, 2>> deleted;  // I, one edge per cycle
  std::vector<Cycle> cycles;                       // the short cycles
  double t = 0.0;
  bool acyclic_after = false;      // L has no cycle at all
  std::int64_t girth_after = 0;    // 0 when acyclic_after
  bool connected_after = false;
  std::int64_t min_cycle_distance = -1;  // min pairwise d_G(C_i, C_j); -1 if < 2 cycles
  std::int64_t diameter_before = 0;
  std::int64_t diameter_after = 0;       // of L, when connected
  double diameter_bound = 0.0;  // ((t+r-1)/(r+1)) diam(G) + r(t-2)/(r+1) at r = t
  bool diameter_bound_holds = false;
};

SurgeryResult cycle_surgery(const Multigraph& g, double t, std::uint64_t seed = 0);

// Minimum of |E(S, V\S)| / |S| over cuts with 0 < |S| <= n/2.
// Exhaustive (exact) for n <= 24; otherwise a one-sided sweep/descent search
// whose result is only an upper bound on the true minimum.
struct ExpansionReport {
  double best_ratio = 0.0;     // smallest cut ratio found
  bool exact = false;          // exhaustive enumeration ran
  double certified_lower = 0.0;  // spectral lower bound; 0 when unavailable
  std::vector<Vertex> cut;     // the side achieving best_ratio
};

ExpansionReport expansion_search(const Multigraph& g, std::uint64_t seed = 1);

// Property battery mirroring the random-graph structure pipeline: parameter
// choices delta = 21/log_d n (clamped <= 1/4) and t = floor(log_d n / 63)
// (clamped >= 3), cycle census, surgery, diameter and expansion checks on the
// surgered graph, and the finitely decidable good-family sub-checks.
struct PropertyBattery {
  std::int64_t n = 0;
  std::int64_t d = 0;
  bool connected = false;
  std::int64_t diameter = 0;
  double diameter_over_log = 0.0;  // diam(G) / log_d n
  double lambda2 = 0.0;

  double delta = 0.0;
  std::int64_t t = 0;
  bool clamped = false;

  std::int64_t short_cycle_count = 0;  // |C_t(G)|
  bool cycle_budget_ok = false;        // |C_t| <= sqrt(n)
  Verdict sparsity = Verdict::undetermined;  // S_{1/3, delta} membership
  Verdict surgery_ok = Verdict::undetermined;
  std::int64_t deleted_edges = 0;  // |I|
  std::int64_t diam_l = 0;
  bool diam_l_ok = false;  // diam(L) <= K log_d n
  Verdict expansion = Verdict::undetermined;  // min cut ratio of L >= 1/K
  double expansion_found = 0.0;
  bool girth_ok = false;        // girth(L) >= t (vacuous when L acyclic)
  bool f_class_diam_ok = false;  // diam(L) <= K girth(L)
  double measured_c1 = 0.0;  // sqrt-size subset embedding distortion; 0 if skipped
  Verdict overall = Verdict::undetermined;
  std::vector<std::string> notes;
};

PropertyBattery l_class_battery(const Multigraph& h, double K, std::uint64_t seed = 1);

// U = union of the 3r-balls around T and one shortest path from each T vertex
// to the hub; H is the subgraph induced on U.  Requires every S vertex within
// distance r of T.  For a, b in S the induced distance satisfies
// d_G <= d_H <= 2 (diam(G)/r + 1) d_G.
struct HullResult {
  std::vector<Vertex> u_set;    // members of U, ascending host ids
  Multigraph h;                 // induced subgraph, vertices re-indexed by u_set
  std::vector<std::int64_t> host_to_h;  // host vertex -> H index, -1 outside
  std::int64_t size_bound = 0;  // |T| (d (d-1)^{3r-1} + diam(G)), saturated
  std::int64_t diam_h = 0;
  double max_ratio = 0.0;  // max over S pairs of d_H / d_G
};

HullResult geodesic_hull(const Multigraph& g, const std::vector<Vertex>& s,
                         const std::vector<Vertex>& t, std::int64_t r, Vertex hub);

// Two-region cover of the simplicial complex of h driven by the deleted
// short-cycle edges: A1 is the t-neighborhood of the deleted intervals, A2
// the complement of the (t/2)-neighborhood, sigma = 2 pi / girth(L).
struct StructureDecomposition {
  SurgeryResult surgery;
  double sigma = 0.0;
  double t = 0.0;
  std::vector<double> vertex_dist_to_deleted;  // +inf when no deletion
  bool cover_exact = false;   // A1 u A2 = Sigma(h)
  double gap = 0.0;           // d(A1 \ A2, A2 \ A1); +inf when a side is empty
  double gap_bound = 0.0;     // t/2
  double embed_ratio_max = 0.0;  // x -> (1/sqrt2, x) sampled cone/base ratios
  double embed_ratio_min = 0.0;
  double a2_metric_max_ratio = 0.0;  // d_L / d_G over sampled A2 pairs
  Verdict a2_metric = Verdict::undetermined;  // in [1, 3]
  double a1_cone_distortion = 0.0;   // cone embedding of A1 samples; 0 if A1 empty
  double a2_slice_distortion = 0.0;  // cone metric ratio when d_G is replaced by d_L
  std::vector<std::string> notes;
};

// t_override = 0 uses the battery's clamped threshold.
StructureDecomposition structure_decomposition(const Multigraph& h, double K = 15.0,
                                               std::uint64_t seed = 1, double t_override = 0.0);

// One evaluation of the permutation Poincare inequality
//   (1/n^2) sum_{i,j} d_H(pi(i),pi(j))^2  <=  c * (1/n) sum_{E_G} d_H(pi(i),pi(j))^2
// plus the pair-overlap counting criterion with N_H = {pairs at d_H <= log2(n)/16}.
struct KleinbergTrial {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  bool pass = false;   // lhs <= c * rhs
  std::int64_t nh_size = 0;        // |N_H|
  double nh_cap = 0.0;             // (3/2) n^{17/16}, asserted for d = 3
  std::int64_t overlap = 0;        // edges of G whose pi-image lands in N_H
  bool overlap_ok = false;         // overlap <= 4n/3
};

KleinbergTrial kleinberg_trial(const Multigraph& g_left, const Multigraph& g_right,
                               const std::vector<std::int64_t>& pi, double c);

// Swap-descent permutation minimizing the right-hand side of the permutation
// Poincare inequality; the adversarial comparator for kleinberg_trial.
std::vector<std::int64_t> adversarial_permutation(const Multigraph& g_left,
                                                  const Multigraph& g_right,
                                                  std::uint64_t seed,
                                                  std::int64_t sweeps = 4);

// Binomial upper tail (e^{beta-1} / beta^beta)^{pn}; sizes Monte Carlo budgets.
double chernoff_tail(double beta, double p, double n);

}  // namespace gmg
