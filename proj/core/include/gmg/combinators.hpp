#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gmg/multigraph.hpp"

namespace gmg {

// Zigzag product: d2^2-regular on |V1|*|V2| vertices.  Vertex (v,k) has index
// v*|V2|+k; the rotation is the three-step walk (small, big, small).
Multigraph zigzag(const Multigraph& g1, const Multigraph& g2);

// Replacement product: (d2+1)-regular on |V1|*|V2| vertices; each cloud is a
// copy of g2, port k of cloud v is matched through Rot_{g1}(v,k).
Multigraph replacement(const Multigraph& g1, const Multigraph& g2);

// Degree completion: floor(D/d) copies of every edge plus D - d*floor(D/d)
// self-loops per vertex; at least half the half-edge mass is copies of g.
Multigraph edge_completion(const Multigraph& g, std::int64_t D);

// Cesaro average: m d^{m-1}-regular with E(u,v) = sum_t d^{m-1-t} W_t(u,v),
// so the normalized adjacency is the mean of the first m powers.
Multigraph cesaro(const Multigraph& g, std::int64_t m);

using GammaPlusHook = std::function<Multigraph(const Multigraph&)>;

struct StarTransformResult {
  Multigraph graph;  // 3-regular
  std::vector<std::string> notes;
  std::vector<std::int64_t> stage_sizes;  // |conversion|, |zigzag|, |final|
  bool default_hook = false;
};

// Pipeline: gamma -> gamma_+ conversion hook (default: completion to degree
// 4d, vertex count unhalved), zigzag with the looped cycle on 4d vertices,
// replacement with C_9.
StarTransformResult star_transform(const Multigraph& g, std::int64_t d,
                                   GammaPlusHook hook = nullptr);

struct IterationRecipe {
  Multigraph base;  // H, d-regular on n vertices, rotation attached
  std::int64_t d = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;       // floor(log n / (3 log d))
  std::int64_t m_used = 0;  // max(2, m); see notes in zigzag_iteration
  bool degenerate_guard = false;
  std::int64_t depth = 0;
};

IterationRecipe make_recipe(Multigraph base, std::int64_t depth);

struct IterationLevel {
  std::int64_t j = 0;
  Multigraph w;  // W_j: d^2-regular on n^j vertices
  Multigraph g;  // G_j: 3-regular on 9 d^2 n^j vertices
  double lambda2_w = 0.0;
  double lambda_min_w = 0.0;
  double lambda2_g = 0.0;
  double residual_w = 0.0;
  double residual_g = 0.0;
};

struct IterationResult {
  IterationRecipe recipe;
  std::vector<IterationLevel> levels;
};

// W_1 = completion of H to degree d^2; W_{j+1} = (completion to degree n of
// the m_used-th Cesaro average of W_j) zigzag H; G_j = (W_j zigzag looped
// cycle on d^2 vertices) replacement C_9.
//
// At the formula depth m = 1 the Cesaro average is the identity graph, whose
// completion is all loops, and the recursion disconnects from W_2 on; the
// averaging hypothesis the ambient theorem needs is unsatisfiable there, so
// the recursion runs with m_used = max(2, m) and flags the guard.
IterationResult zigzag_iteration(const IterationRecipe& recipe, bool compute_spectra = true,
                                 double tol = 1e-9, std::int64_t max_matvecs = 40000);

// Empirical constant K for the real line in the averaging condition: max over
// samples and depths 2..max_m of gamma_+(cesaro(G,m)) / max(1, gamma_+(G)/m).
// Depth 1 is excluded; its average is the identity graph with infinite
// constant.
double measure_cesaro_K(const std::vector<Multigraph>& samples, std::int64_t max_m);

// Best-of-trials random d-regular base: samples pairing-model graphs, keeps
// the smallest lambda_2 among connected samples with finite gamma_+.
Multigraph best_random_regular(std::int64_t n, std::int64_t d, std::int64_t trials,
                               std::uint64_t seed);

}  // namespace gmg
