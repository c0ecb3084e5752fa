#include "gmg/combinators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "gmg/common.hpp"
#include "gmg/spectral.hpp"

namespace gmg {

namespace {

const RotationMap& rotation_of(const Multigraph& g, const char* who) {
  const std::optional<RotationMap>& r = g.rotation();
  require(r.has_value(), std::string(who) + ": rotation map required");
  return *r;
}

std::int64_t degree_of(const Multigraph& g, const char* who) {
  const std::optional<std::int64_t> d = g.regular_degree();
  require(d.has_value() && *d > 0, std::string(who) + ": input must be regular");
  return *d;
}

}  // namespace

Multigraph zigzag(const Multigraph& g1, const Multigraph& g2) {
  const std::int64_t d1 = degree_of(g1, "zigzag");
  const std::int64_t d2 = degree_of(g2, "zigzag");
  require(g2.n() == d1, "zigzag: |V(g2)| must equal deg(g1)");
  const RotationMap& r1 = rotation_of(g1, "zigzag");
  const RotationMap& r2 = rotation_of(g2, "zigzag");

  const std::int64_t n_out = g1.n() * d1;
  const std::int64_t d_out = d2 * d2;
  std::vector<std::int64_t> table(static_cast<std::size_t>(n_out * d_out));
  for (Vertex v = 0; v < g1.n(); ++v) {
    for (std::int64_t k = 0; k < d1; ++k) {
      const Vertex a = v * d1 + k;
      for (std::int64_t i = 0; i < d2; ++i) {
        const auto [kp, ip] = r2(k, i);
        const auto [w, l] = r1(v, kp);
        for (std::int64_t j = 0; j < d2; ++j) {
          const auto [lp, jp] = r2(l, j);
          const Vertex b = w * d1 + lp;
          table[static_cast<std::size_t>(a * d_out + i * d2 + j)] = b * d_out + jp * d2 + ip;
        }
      }
    }
  }
  return Multigraph::from_rotation(n_out, RotationMap{d_out, std::move(table)});
}

Multigraph replacement(const Multigraph& g1, const Multigraph& g2) {
  const std::int64_t d1 = degree_of(g1, "replacement");
  const std::int64_t d2 = degree_of(g2, "replacement");
  require(g2.n() == d1, "replacement: ports insufficient, |V(g2)| must equal deg(g1)");
  const RotationMap& r1 = rotation_of(g1, "replacement");

  const std::int64_t n_out = g1.n() * d1;
  const std::int64_t d_out = d2 + 1;
  if (const std::optional<RotationMap>& r2o = g2.rotation(); r2o.has_value()) {
    const RotationMap* r2 = &*r2o;
    std::vector<std::int64_t> table(static_cast<std::size_t>(n_out * d_out));
    for (Vertex v = 0; v < g1.n(); ++v) {
      for (std::int64_t k = 0; k < d1; ++k) {
        const Vertex a = v * d1 + k;
        for (std::int64_t i = 0; i < d2; ++i) {
          const auto [kp, ip] = (*r2)(k, i);
          table[static_cast<std::size_t>(a * d_out + i)] = (v * d1 + kp) * d_out + ip;
        }
        const auto [w, l] = r1(v, k);
        table[static_cast<std::size_t>(a * d_out + d2)] = (w * d1 + l) * d_out + d2;
      }
    }
    return Multigraph::from_rotation(n_out, RotationMap{d_out, std::move(table)});
  }

  Multigraph cloud = g2;
  cloud.attach_default_rotation();
  return replacement(g1, cloud);
}

Multigraph edge_completion(const Multigraph& g, std::int64_t D) {
  const std::int64_t d = degree_of(g, "edge_completion");
  require(D >= d, "edge_completion: target degree below input degree");
  if (D == d) return g;
  const std::int64_t c = D / d;
  const std::int64_t r = D - c * d;

  if (const std::optional<RotationMap>& roto = g.rotation(); roto.has_value()) {
    const RotationMap* rot = &*roto;
    std::vector<std::int64_t> table(static_cast<std::size_t>(g.n() * D));
    for (Vertex v = 0; v < g.n(); ++v) {
      for (std::int64_t t = 0; t < c; ++t) {
        for (std::int64_t i = 0; i < d; ++i) {
          const auto [w, j] = (*rot)(v, i);
          table[static_cast<std::size_t>(v * D + t * d + i)] = w * D + t * d + j;
        }
      }
      for (std::int64_t i = c * d; i < D; ++i) {
        table[static_cast<std::size_t>(v * D + i)] = v * D + i;
      }
    }
    return Multigraph::from_rotation(g.n(), RotationMap{D, std::move(table)});
  }

  std::vector<std::array<std::int64_t, 3>> edges;
  for (const auto& e : g.edge_list()) edges.push_back({e[0], e[1], e[2] * c});
  if (r > 0) {
    for (Vertex v = 0; v < g.n(); ++v) edges.push_back({v, v, r});
  }
  return Multigraph::from_edges(g.n(), edges);
}

Multigraph cesaro(const Multigraph& g, std::int64_t m) {
  const std::int64_t d = degree_of(g, "cesaro");
  require(m >= 1, "cesaro: m must be positive");
  require(g.n() <= 4096, "cesaro: input too large");
  const std::int64_t n = g.n();
  const BigInt cap = std::numeric_limits<std::int64_t>::max();

  // W_t rows as sorted sparse maps; counts grow like d^t so they stay small
  // for the m this library ever runs, but the accumulation is checked anyway.
  std::vector<std::map<Vertex, BigInt>> walk(static_cast<std::size_t>(n));
  std::vector<std::map<Vertex, BigInt>> acc(static_cast<std::size_t>(n));
  BigInt scale = 1;
  for (std::int64_t t = 1; t < m; ++t) scale *= d;  // d^{m-1}
  for (Vertex v = 0; v < n; ++v) {
    walk[static_cast<std::size_t>(v)][v] = 1;
    acc[static_cast<std::size_t>(v)][v] = scale;
  }
  for (std::int64_t t = 1; t < m; ++t) {
    scale /= d;
    std::vector<std::map<Vertex, BigInt>> next(static_cast<std::size_t>(n));
    for (Vertex u = 0; u < n; ++u) {
      for (const auto& [mid, cnt] : walk[static_cast<std::size_t>(u)]) {
        for (const auto& [v, mult] : g.row(mid)) {
          next[static_cast<std::size_t>(u)][v] += cnt * mult;
        }
      }
    }
    walk = std::move(next);
    for (Vertex u = 0; u < n; ++u) {
      for (const auto& [v, cnt] : walk[static_cast<std::size_t>(u)]) {
        BigInt& slot = acc[static_cast<std::size_t>(u)][v];
        slot += cnt * scale;
        require(slot <= cap, "cesaro: overflow of walk counts");
      }
    }
  }

  std::vector<std::array<std::int64_t, 3>> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (const auto& [v, total] : acc[static_cast<std::size_t>(u)]) {
      if (v < u) continue;
      require(total <= cap, "cesaro: overflow of walk counts");
      edges.push_back({u, v, static_cast<std::int64_t>(total)});
    }
  }
  Multigraph out = Multigraph::from_edges(n, edges);
  std::int64_t want = m;
  for (std::int64_t t = 1; t < m; ++t) {
    require(want <= std::numeric_limits<std::int64_t>::max() / d,
            "cesaro: overflow of walk counts");
    want *= d;
  }
  require(out.regular_degree() == std::optional<std::int64_t>(want),
          "cesaro: degree bookkeeping failed");
  return out;
}

StarTransformResult star_transform(const Multigraph& g, std::int64_t d, GammaPlusHook hook) {
  require(g.regular_degree() == std::optional<std::int64_t>(d),
          "star_transform: input must be d-regular");
  require(d >= 3, "star_transform: degree must be at least 3");
  require(g.n() >= 6, "star_transform: at least 6 vertices required");
  require(g.n() % 2 == 0, "star_transform: even vertex count required");

  StarTransformResult res;
  const std::int64_t big = 4 * d;
  Multigraph converted = [&] {
    if (hook) {
      res.notes.push_back("conversion: caller-supplied hook");
      return hook(g);
    }
    res.default_hook = true;
    res.notes.push_back("conversion: edge completion to degree " + std::to_string(big) +
                        ", vertex count kept (the halving variant is not applied)");
    Multigraph base = g;
    if (!base.rotation().has_value()) base.attach_default_rotation();
    return edge_completion(base, big);
  }();
  require(converted.regular_degree() == std::optional<std::int64_t>(big),
          "star_transform: conversion stage must be 4d-regular");
  if (!converted.rotation().has_value()) converted.attach_default_rotation();
  res.stage_sizes.push_back(converted.n());

  Multigraph mixed = zigzag(converted, looped_cycle_graph(big));
  res.stage_sizes.push_back(mixed.n());
  res.notes.push_back("zigzag with the looped cycle on " + std::to_string(big) + " vertices");

  res.graph = replacement(mixed, cycle_graph(9));
  res.stage_sizes.push_back(res.graph.n());
  res.notes.push_back("replacement with the 9-cycle");
  require(res.graph.regular_degree() == std::optional<std::int64_t>(3),
          "star_transform: output must be 3-regular");
  return res;
}

IterationRecipe make_recipe(Multigraph base, std::int64_t depth) {
  IterationRecipe rec;
  rec.d = degree_of(base, "make_recipe");
  rec.n = base.n();
  require(rec.d >= 3 && rec.n >= 3, "make_recipe: need n, d >= 3");
  require(depth >= 0, "make_recipe: depth must be nonnegative");
  require(base.rotation().has_value(), "make_recipe: base must carry a rotation map");
  const std::int64_t d3 = rec.d * rec.d * rec.d;
  require(rec.n >= d3, "make_recipe: need n >= d^3");

  // floor(log n / (3 log d)) computed in integers: largest m with d^{3m} <= n.
  std::int64_t m = 0;
  BigInt pow = 1;
  while (pow * d3 <= rec.n) {
    pow *= d3;
    ++m;
  }
  rec.m = m;
  rec.m_used = std::max<std::int64_t>(2, m);
  rec.degenerate_guard = rec.m_used != rec.m;
  rec.depth = depth;
  rec.base = std::move(base);
  return rec;
}

namespace {

struct SpectrumSummary {
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  double residual = 0.0;
};

SpectrumSummary summarize(const Multigraph& g, bool want_min, double tol,
                          std::int64_t max_matvecs) {
  SpectrumSummary s;
  if (g.n() <= 2048) {
    const std::vector<double> ev = spectrum(g);
    s.lambda2 = ev.size() > 1 ? ev[1] : ev[0];
    s.lambda_min = ev.back();
    return s;
  }
  const IterativeEigEstimate top = lambda2_iterative(g, tol, max_matvecs);
  s.lambda2 = top.value;
  s.residual = top.residual;
  if (want_min) {
    const IterativeEigEstimate bot = lambda_min_iterative(g, tol, max_matvecs);
    s.lambda_min = bot.value;
    s.residual = std::max(s.residual, bot.residual);
  }
  return s;
}

}  // namespace

IterationResult zigzag_iteration(const IterationRecipe& recipe, bool compute_spectra,
                                 double tol, std::int64_t max_matvecs) {
  IterationResult res;
  res.recipe = recipe;
  const std::int64_t d = recipe.d;
  const std::int64_t n = recipe.n;
  const std::int64_t d2 = d * d;
  const std::int64_t m = recipe.m_used;
  {
    BigInt lhs = m;
    for (std::int64_t t = 1; t < m; ++t) lhs *= d2;
    require(lhs <= n, "zigzag_iteration: m d^{2(m-1)} > n breaks the completion step");
  }

  const Multigraph small = looped_cycle_graph(d2);
  const Multigraph nine = cycle_graph(9);
  Multigraph w = edge_completion(recipe.base, d2);
  BigInt expect_w = n;
  for (std::int64_t j = 1; j <= recipe.depth; ++j) {
    require(BigInt(w.n()) == expect_w, "zigzag_iteration: |V(W_j)| must be n^j");
    IterationLevel lvl;
    lvl.j = j;
    lvl.g = replacement(zigzag(w, small), nine);
    require(BigInt(lvl.g.n()) == BigInt(9) * d2 * expect_w,
            "zigzag_iteration: |V(G_j)| must be 9 d^2 n^j");
    if (compute_spectra) {
      const SpectrumSummary sw = summarize(w, true, tol, max_matvecs);
      lvl.lambda2_w = sw.lambda2;
      lvl.lambda_min_w = sw.lambda_min;
      lvl.residual_w = sw.residual;
      const SpectrumSummary sg = summarize(lvl.g, false, tol, max_matvecs);
      lvl.lambda2_g = sg.lambda2;
      lvl.residual_g = sg.residual;
    }
    lvl.w = w;
    if (j < recipe.depth) {
      Multigraph averaged = cesaro(w, m);
      averaged.attach_default_rotation();
      w = zigzag(edge_completion(averaged, n), recipe.base);
      expect_w *= n;
    }
    res.levels.push_back(std::move(lvl));
  }
  return res;
}

double measure_cesaro_K(const std::vector<Multigraph>& samples, std::int64_t max_m) {
  // m = 1 is excluded: the depth-1 average is the identity graph, whose line
  // constant is infinite, so the averaging condition starts at m = 2.
  require(max_m >= 2, "measure_cesaro_K: max_m must be at least 2");
  double worst = 0.0;
  for (const Multigraph& g : samples) {
    const double base = gamma_plus_line(g);
    for (std::int64_t m = 2; m <= max_m; ++m) {
      const double averaged = gamma_plus_line(cesaro(g, m));
      const double allowance = std::max(1.0, base / static_cast<double>(m));
      worst = std::max(worst, averaged / allowance);
    }
  }
  return worst;
}

Multigraph best_random_regular(std::int64_t n, std::int64_t d, std::int64_t trials,
                               std::uint64_t seed) {
  require(n >= 2 && d >= 1, "best_random_regular: need n >= 2, d >= 1");
  require(trials >= 1, "best_random_regular: need at least one trial");
  std::mt19937_64 rng = make_rng(seed, 7);

  std::vector<std::int64_t> ports(static_cast<std::size_t>(n * d));
  bool found = false;
  Multigraph best;
  double best_l2 = 2.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::iota(ports.begin(), ports.end(), 0);
    std::shuffle(ports.begin(), ports.end(), rng);
    std::vector<std::int64_t> table(ports.size());
    for (std::size_t i = 0; i + 1 < ports.size(); i += 2) {
      table[static_cast<std::size_t>(ports[i])] = ports[i + 1];
      table[static_cast<std::size_t>(ports[i + 1])] = ports[i];
    }
    // Odd port total leaves one fixed point, i.e. a single self-loop.
    if (ports.size() % 2 == 1) table[static_cast<std::size_t>(ports.back())] = ports.back();
    Multigraph g = Multigraph::from_rotation(n, RotationMap{d, std::move(table)});
    if (!is_connected(g)) continue;
    const std::vector<double> ev = spectrum(g);
    const double l2 = ev.size() > 1 ? ev[1] : ev[0];
    if (std::max(l2, -ev.back()) >= 1.0 - 1e-12) continue;  // gamma_+ must be finite
    if (!found || l2 < best_l2) {
      found = true;
      best_l2 = l2;
      best = std::move(g);
    }
  }
  require(found, "best_random_regular: no connected sample with finite gamma_+");
  return best;
}

}  // namespace gmg
