#include "gmg/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace gmg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd normalized_adjacency(const Multigraph& g) {
  auto reg = g.regular_degree();
  require(reg.has_value(), "non-regular input");
  std::int64_t n = g.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Vertex u = 0; u < n; ++u)
    for (const auto& [v, m] : g.row(u)) a(u, v) = static_cast<double>(m) / static_cast<double>(*reg);
  return a;
}

}  // namespace

std::vector<double> spectrum(const Multigraph& g) {
  require(g.n() <= 4096, "dense spectrum capped at n = 4096");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_adjacency(g),
                                                    Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, "eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + g.n());
  std::reverse(out.begin(), out.end());
  require(std::abs(out.front() - 1.0) <= 1e-9, "top eigenvalue must be 1");
  for (double& x : out) x = std::clamp(x, -1.0, 1.0);
  return out;
}

std::pair<double, std::vector<double>> second_eigenpair(const Multigraph& g) {
  require(g.n() <= 4096, "dense spectrum capped at n = 4096");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_adjacency(g));
  require(es.info() == Eigen::Success, "eigensolver failed");
  std::int64_t n = g.n();
  double lam2 = es.eigenvalues()(n - 2);
  Eigen::VectorXd v = es.eigenvectors().col(n - 2);
  return {std::clamp(lam2, -1.0, 1.0), std::vector<double>(v.data(), v.data() + n)};
}

namespace {

// One power step of 0.5*(I + s*A/d); ones-deflation optional.
struct PowerContext {
  const Multigraph& g;
  double sign;  // +1 targets lambda_2, -1 targets lambda_min
  bool deflate;
  double d;

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    std::int64_t n = g.n();
    for (Vertex u = 0; u < n; ++u) {
      double s = 0.0;
      for (const auto& [v, m] : g.row(u)) s += static_cast<double>(m) * x[v];
      y[u] = 0.5 * (x[u] + sign * s / d);
    }
    if (deflate) {
      double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
      for (double& t : y) t -= mean;
    }
  }
};

IterativeEigEstimate run_power(const Multigraph& g, double sign, bool deflate, double tol,
                               std::int64_t max_matvecs, std::uint64_t seed) {
  auto reg = g.regular_degree();
  require(reg.has_value(), "non-regular input");
  std::int64_t n = g.n();
  PowerContext ctx{g, sign, deflate, static_cast<double>(*reg)};
  auto rng = make_rng(seed, 0x9e1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x(n), y(n);
  for (double& t : x) t = unit(rng);
  if (deflate) {
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (double& t : x) t -= mean;
  }
  double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  require(norm > 0, "degenerate start vector");
  for (double& t : x) t /= norm;

  IterativeEigEstimate est;
  double theta = 0.0;
  for (std::int64_t it = 0; it < max_matvecs; ++it) {
    ctx.apply(x, y);
    est.matvecs += 1;
    theta = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    double res2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      double r = y[i] - theta * x[i];
      res2 += r * r;
    }
    double res = std::sqrt(res2);
    est.residual = 2.0 * res;  // back on the A/d scale
    if (est.residual <= tol) {
      est.converged = true;
      break;
    }
    double ny = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    if (ny == 0.0) break;
    for (std::int64_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  est.value = sign * (2.0 * theta - 1.0);
  return est;
}

}  // namespace

IterativeEigEstimate lambda2_iterative(const Multigraph& g, double tol, std::int64_t max_matvecs,
                                       std::uint64_t seed) {
  return run_power(g, +1.0, true, tol, max_matvecs, seed);
}

IterativeEigEstimate lambda_min_iterative(const Multigraph& g, double tol,
                                          std::int64_t max_matvecs, std::uint64_t seed) {
  // (I - A/d)/2 has top eigenvalue (1 - lambda_min)/2; ones lies in its kernel.
  return run_power(g, -1.0, false, tol, max_matvecs, seed);
}

double lambda2(const Multigraph& g) {
  if (g.n() <= 4096) return spectrum(g)[1];
  return lambda2_iterative(g).value;
}

double gamma_line(const Multigraph& g) {
  require(is_connected(g), "disconnected input (lambda_2 = 1)");
  double l2 = lambda2(g);
  require(l2 < 1.0 - 1e-12, "disconnected input (lambda_2 = 1)");
  return 1.0 / (1.0 - l2);
}

double gamma_plus_line(const Multigraph& g) {
  require(is_connected(g), "disconnected input (lambda_2 = 1)");
  double l2, ln;
  if (g.n() <= 4096) {
    auto ev = spectrum(g);
    l2 = ev[1];
    ln = ev.back();
  } else {
    l2 = lambda2_iterative(g).value;
    ln = lambda_min_iterative(g).value;
  }
  double m = std::max(l2, -ln);
  require(m < 1.0 - 1e-12, "degenerate input (max(lambda_2, -lambda_n) = 1)");
  return 1.0 / (1.0 - m);
}

namespace {

// Ordered weighted pair list; the denominator of both Poincare ratios is
// norm * sum_{entries} w * d(fL(u), fR(v))^2.  Graph entries carry w = mult
// with norm 1/(nd); explicit matrices carry their own weights with norm 1/n.
struct PairWeights {
  std::int64_t n = 0;
  std::vector<std::vector<std::pair<std::int64_t, double>>> rows;
  double norm = 0.0;
};

PairWeights graph_weights(const Multigraph& g) {
  auto reg = g.regular_degree();
  require(reg.has_value(), "non-regular input");
  PairWeights w;
  w.n = g.n();
  w.norm = 1.0 / (static_cast<double>(g.n()) * static_cast<double>(*reg));
  w.rows.resize(static_cast<std::size_t>(g.n()));
  for (Vertex u = 0; u < g.n(); ++u)
    for (const auto& [v, m] : g.row(u))
      w.rows[static_cast<std::size_t>(u)].push_back({v, static_cast<double>(m)});
  return w;
}

PairWeights matrix_weights(const std::vector<double>& m, std::int64_t n) {
  require(static_cast<std::int64_t>(m.size()) == n * n, "weight matrix size mismatch");
  PairWeights w;
  w.n = n;
  w.norm = 1.0 / static_cast<double>(n);
  w.rows.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) {
      double x = m[static_cast<std::size_t>(i * n + j)];
      require(x >= 0.0, "negative weight");
      require(std::abs(x - m[static_cast<std::size_t>(j * n + i)]) <= 1e-12,
              "asymmetric weight matrix");
      if (x != 0.0) w.rows[static_cast<std::size_t>(i)].push_back({j, x});
    }
  return w;
}

// Ratio state for maps into a finite metric; supports O(|X| + deg) move
// deltas.  For gamma (shared == true) fR aliases fL.
struct RatioState {
  const PairWeights& w;
  const FiniteMetric& X;
  bool shared;
  std::vector<std::int64_t> fL, fR;
  std::vector<double> cntL, cntR;
  double num_n2 = 0.0;  // n^2 * numerator
  double den_raw = 0.0;  // denominator / norm

  RatioState(const PairWeights& w_, const FiniteMetric& X_, bool shared_)
      : w(w_), X(X_), shared(shared_) {}

  double d2(std::int64_t i, std::int64_t j) const {
    double d = X(i, j);
    return d * d;
  }

  void assign(std::vector<std::int64_t> f, std::vector<std::int64_t> g2) {
    fL = std::move(f);
    fR = shared ? fL : std::move(g2);
    cntL.assign(static_cast<std::size_t>(X.n), 0.0);
    for (auto i : fL) cntL[static_cast<std::size_t>(i)] += 1.0;
    if (shared) {
      cntR = cntL;
    } else {
      cntR.assign(static_cast<std::size_t>(X.n), 0.0);
      for (auto i : fR) cntR[static_cast<std::size_t>(i)] += 1.0;
    }
    num_n2 = 0.0;
    for (std::int64_t i = 0; i < X.n; ++i)
      for (std::int64_t j = 0; j < X.n; ++j)
        num_n2 += cntL[static_cast<std::size_t>(i)] * cntR[static_cast<std::size_t>(j)] * d2(i, j);
    den_raw = 0.0;
    for (std::int64_t u = 0; u < w.n; ++u)
      for (const auto& [v, wt] : w.rows[static_cast<std::size_t>(u)])
        den_raw += wt * d2(fL[static_cast<std::size_t>(u)], fR[static_cast<std::size_t>(v)]);
  }

  double ratio() const {
    double num = num_n2 / (static_cast<double>(w.n) * static_cast<double>(w.n));
    double den = den_raw * w.norm;
    if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
    return num / den;
  }

  // coord < n moves fL; coord >= n moves fR (only when !shared).
  std::pair<double, double> move_delta(std::int64_t coord, std::int64_t c) const {
    bool left = coord < w.n;
    std::int64_t u = left ? coord : coord - w.n;
    std::int64_t old = left ? fL[static_cast<std::size_t>(u)] : fR[static_cast<std::size_t>(u)];
    if (c == old) return {0.0, 0.0};
    double dn = 0.0;
    if (shared) {
      for (std::int64_t j = 0; j < X.n; ++j)
        dn += 2.0 * cntL[static_cast<std::size_t>(j)] * (d2(c, j) - d2(old, j));
      dn -= 2.0 * d2(c, old);
    } else if (left) {
      for (std::int64_t j = 0; j < X.n; ++j)
        dn += cntR[static_cast<std::size_t>(j)] * (d2(c, j) - d2(old, j));
    } else {
      for (std::int64_t j = 0; j < X.n; ++j)
        dn += cntL[static_cast<std::size_t>(j)] * (d2(j, c) - d2(j, old));
    }
    double dd = 0.0;
    if (shared) {
      for (const auto& [v, wt] : w.rows[static_cast<std::size_t>(u)]) {
        if (v == u) continue;  // d(f(u), f(u)) = 0 on both sides of the move
        dd += 2.0 * wt * (d2(c, fL[static_cast<std::size_t>(v)]) -
                          d2(old, fL[static_cast<std::size_t>(v)]));
      }
    } else if (left) {
      // Column entries (x, u) keep both labels; only row u changes.
      for (const auto& [v, wt] : w.rows[static_cast<std::size_t>(u)])
        dd += wt *
              (d2(c, fR[static_cast<std::size_t>(v)]) - d2(old, fR[static_cast<std::size_t>(v)]));
    } else {
      for (const auto& [v, wt] : w.rows[static_cast<std::size_t>(u)])
        dd += wt *
              (d2(fL[static_cast<std::size_t>(v)], c) - d2(fL[static_cast<std::size_t>(v)], old));
    }
    return {dn, dd};
  }

  void apply_move(std::int64_t coord, std::int64_t c) {
    auto [dn, dd] = move_delta(coord, c);
    num_n2 += dn;
    den_raw += dd;
    bool left = coord < w.n;
    std::int64_t u = left ? coord : coord - w.n;
    if (shared) {
      cntL[static_cast<std::size_t>(fL[static_cast<std::size_t>(u)])] -= 1.0;
      cntL[static_cast<std::size_t>(c)] += 1.0;
      fL[static_cast<std::size_t>(u)] = c;
      cntR = cntL;
      fR = fL;
    } else if (left) {
      cntL[static_cast<std::size_t>(fL[static_cast<std::size_t>(u)])] -= 1.0;
      cntL[static_cast<std::size_t>(c)] += 1.0;
      fL[static_cast<std::size_t>(u)] = c;
    } else {
      cntR[static_cast<std::size_t>(fR[static_cast<std::size_t>(u)])] -= 1.0;
      cntR[static_cast<std::size_t>(c)] += 1.0;
      fR[static_cast<std::size_t>(u)] = c;
    }
  }
};

double evaluate_ratio(const PairWeights& w, const FiniteMetric& X,
                      const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& g2,
                      bool shared) {
  RatioState st(w, X, shared);
  st.assign(f, shared ? std::vector<std::int64_t>{} : g2);
  return st.ratio();
}

PoincareReport search_impl(const PairWeights& w, const FiniteMetric& X, SearchMode mode,
                           bool plus, std::int64_t budget, std::uint64_t seed,
                           std::int64_t restarts) {
  X.check(1e-9);
  PoincareReport rep;
  rep.plus = plus;
  rep.seed = seed;
  std::int64_t n = w.n;
  std::int64_t k = X.n;
  if (k == 1) {
    rep.gamma_estimate = 0.0;
    rep.degenerate = true;
    rep.exact = true;
    rep.mode = "exact";
    rep.witness_f.assign(static_cast<std::size_t>(n), 0);
    if (plus) rep.witness_g.assign(static_cast<std::size_t>(n), 0);
    return rep;
  }
  std::int64_t coords = plus ? 2 * n : n;

  if (mode == SearchMode::exhaustive) {
    double total = std::pow(static_cast<double>(k), static_cast<double>(coords));
    require(total <= 1e7 + 0.5, "exhaustive enumeration too large");
    std::vector<std::int64_t> digits(static_cast<std::size_t>(coords), 0);
    RatioState st(w, X, !plus);
    double best = -1.0;
    std::int64_t count = 0;
    while (true) {
      std::vector<std::int64_t> f(digits.begin(), digits.begin() + n);
      std::vector<std::int64_t> g2(digits.begin() + n, digits.end());
      st.assign(f, g2);
      double r = st.ratio();
      count += 1;
      if (r > best) {
        best = r;
        rep.witness_f = f;
        rep.witness_g = g2;
      }
      std::int64_t pos = coords - 1;
      while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == k - 1) {
        digits[static_cast<std::size_t>(pos)] = 0;
        pos -= 1;
      }
      if (pos < 0) break;
      digits[static_cast<std::size_t>(pos)] += 1;
    }
    rep.gamma_estimate = best;
    rep.exact = true;
    rep.mode = "exact";
    rep.iterations = count;
    return rep;
  }

  // Local mode: steepest-ascent single-coordinate reassignment.
  double best = -1.0;
  std::int64_t evals = 0;
  bool exhausted = false;
  for (std::int64_t r0 = 0; r0 < restarts && !exhausted; ++r0) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(r0) + 17);
    std::uniform_int_distribution<std::int64_t> label(0, k - 1);
    std::vector<std::int64_t> f(static_cast<std::size_t>(n)), g2;
    for (auto& x : f) x = label(rng);
    if (plus) {
      g2.resize(static_cast<std::size_t>(n));
      for (auto& x : g2) x = label(rng);
    }
    RatioState st(w, X, !plus);
    st.assign(f, g2);
    while (true) {
      double cur = st.ratio();
      if (std::isinf(cur)) break;
      double best_gain = 0.0;
      std::int64_t best_coord = -1, best_label = -1;
      for (std::int64_t coord = 0; coord < coords; ++coord) {
        for (std::int64_t c = 0; c < k; ++c) {
          evals += 1;
          auto [dn, dd] = st.move_delta(coord, c);
          double nn = st.num_n2 + dn;
          double nd = st.den_raw + dd;
          double num = nn / (static_cast<double>(n) * static_cast<double>(n));
          double den = nd * w.norm;
          double r2 = den <= 0.0 ? (num <= 1e-15 ? 0.0 : kInf) : num / den;
          if (r2 - cur > best_gain + 1e-15) {
            best_gain = r2 - cur;
            best_coord = coord;
            best_label = c;
          }
        }
        if (evals > budget) break;
      }
      if (best_coord < 0) break;
      st.apply_move(best_coord, best_label);
      rep.iterations += 1;
      if (evals > budget) {
        exhausted = true;
        break;
      }
    }
    // Re-evaluate from scratch so accumulated move deltas cannot drift.
    st.assign(st.fL, plus ? st.fR : std::vector<std::int64_t>{});
    double r = st.ratio();
    if (r > best) {
      best = r;
      rep.witness_f = st.fL;
      rep.witness_g = plus ? st.fR : std::vector<std::int64_t>{};
    }
  }
  rep.gamma_estimate = best;
  rep.exact = false;
  rep.mode = "search";
  return rep;
}

}  // namespace

double poincare_ratio(const Multigraph& g, const FiniteMetric& X,
                      const std::vector<std::int64_t>& f) {
  require(static_cast<std::int64_t>(f.size()) == g.n(), "map must be total on V");
  return evaluate_ratio(graph_weights(g), X, f, {}, true);
}

double ratio_plus(const Multigraph& g, const FiniteMetric& X, const std::vector<std::int64_t>& f,
                  const std::vector<std::int64_t>& g2) {
  require(static_cast<std::int64_t>(f.size()) == g.n() &&
              static_cast<std::int64_t>(g2.size()) == g.n(),
          "maps must be total on V");
  return evaluate_ratio(graph_weights(g), X, f, g2, false);
}

double matrix_ratio_plus(const std::vector<double>& w, std::int64_t n, const FiniteMetric& X,
                         const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& g2) {
  return evaluate_ratio(matrix_weights(w, n), X, f, g2, false);
}

double poincare_ratio_real(const Multigraph& g, const std::vector<double>& f) {
  auto reg = g.regular_degree();
  require(reg.has_value(), "non-regular input");
  std::int64_t n = g.n();
  require(static_cast<std::int64_t>(f.size()) == n, "map must be total on V");
  double sum = std::accumulate(f.begin(), f.end(), 0.0);
  double sq = std::inner_product(f.begin(), f.end(), f.begin(), 0.0);
  double num = 2.0 * sq / static_cast<double>(n) -
               2.0 * (sum / static_cast<double>(n)) * (sum / static_cast<double>(n));
  double den = 0.0;
  for (Vertex u = 0; u < n; ++u)
    for (const auto& [v, m] : g.row(u)) {
      if (v == u) continue;
      double d = f[static_cast<std::size_t>(u)] - f[static_cast<std::size_t>(v)];
      den += static_cast<double>(m) * d * d;
    }
  den /= static_cast<double>(n) * static_cast<double>(*reg);
  if (den == 0.0) return num <= 1e-15 ? 0.0 : kInf;
  return num / den;
}

double ratio_plus_real(const Multigraph& g, const std::vector<double>& f,
                       const std::vector<double>& g2) {
  auto reg = g.regular_degree();
  require(reg.has_value(), "non-regular input");
  std::int64_t n = g.n();
  require(static_cast<std::int64_t>(f.size()) == n && static_cast<std::int64_t>(g2.size()) == n,
          "maps must be total on V");
  double sf = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(n);
  double sg = std::accumulate(g2.begin(), g2.end(), 0.0) / static_cast<double>(n);
  double qf = std::inner_product(f.begin(), f.end(), f.begin(), 0.0) / static_cast<double>(n);
  double qg = std::inner_product(g2.begin(), g2.end(), g2.begin(), 0.0) / static_cast<double>(n);
  double num = qf + qg - 2.0 * sf * sg;
  double den = 0.0;
  for (Vertex u = 0; u < n; ++u)
    for (const auto& [v, m] : g.row(u)) {
      double d = f[static_cast<std::size_t>(u)] - g2[static_cast<std::size_t>(v)];
      den += static_cast<double>(m) * d * d;
    }
  den /= static_cast<double>(n) * static_cast<double>(*reg);
  if (den == 0.0) return num <= 1e-15 ? 0.0 : kInf;
  return num / den;
}

PoincareReport gamma_search(const Multigraph& g, const FiniteMetric& X, SearchMode mode, bool plus,
                            std::int64_t budget, std::uint64_t seed, std::int64_t restarts) {
  auto rep = search_impl(graph_weights(g), X, mode, plus, budget, seed, restarts);
  // Soundness: the witness must recompute to the reported value.
  if (!rep.degenerate && !std::isinf(rep.gamma_estimate) && rep.gamma_estimate >= 0.0) {
    double check = plus ? ratio_plus(g, X, rep.witness_f, rep.witness_g)
                        : poincare_ratio(g, X, rep.witness_f);
    require(std::abs(check - rep.gamma_estimate) <= 1e-9 * std::max(1.0, rep.gamma_estimate),
            "witness recomputation mismatch");
    rep.gamma_estimate = check;
  }
  return rep;
}

PoincareReport matrix_gamma_search(const std::vector<double>& w, std::int64_t n,
                                   const FiniteMetric& X, SearchMode mode, bool plus,
                                   std::int64_t budget, std::uint64_t seed,
                                   std::int64_t restarts) {
  return search_impl(matrix_weights(w, n), X, mode, plus, budget, seed, restarts);
}

double gamma_cut_exact(const Multigraph& g) {
  std::int64_t n = g.n();
  require(n <= 24, "cut enumeration capped at n = 24");
  require(n >= 2, "need at least two vertices");
  double e_norm = g.edge_normalization();
  std::vector<std::array<std::int64_t, 3>> edges;
  for (const auto& e : g.edge_list())
    if (e[0] != e[1]) edges.push_back(e);
  double best = 0.0;
  double nn = static_cast<double>(n) * static_cast<double>(n);
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    if (mask & 1u) continue;  // keep vertex 0 outside S: each cut visited once
    std::int64_t s = std::popcount(mask);
    double num = 2.0 * static_cast<double>(s) * static_cast<double>(n - s) / nn;
    std::int64_t cut = 0;
    for (const auto& [u, v, m] : edges)
      if (((mask >> u) ^ (mask >> v)) & 1u) cut += m;
    if (cut == 0) return kInf;
    double den = static_cast<double>(cut) / e_norm;
    best = std::max(best, num / den);
  }
  return best;
}

CheegerReport cheeger_check(const Multigraph& g, const FiniteMetric& X, std::uint64_t seed) {
  require(X.n >= 2, "metric must have at least 2 points");
  require(is_connected(g), "disconnected input");
  CheegerReport out;
  double maps = std::pow(static_cast<double>(X.n), static_cast<double>(g.n()));
  PoincareReport rep;
  if (maps <= 1e7) {
    rep = gamma_search(g, X, SearchMode::exhaustive);
    out.exact = true;
  } else {
    rep = gamma_search(g, X, SearchMode::local, false, 5'000'000, seed, 30);
  }
  out.gamma_found = rep.gamma_estimate;
  if (g.n() <= 24) out.cut_gamma = gamma_cut_exact(g);
  double l2 = lambda2(g);
  out.sqrt_bound = 1.0 / std::sqrt(std::max(1e-300, 1.0 - l2));
  out.margin = out.gamma_found / out.sqrt_bound;
  // Two-point maps into any pair of distinct points of X give exactly the cut
  // ratio (scale cancels), so an exact gamma below the cut oracle is a defect.
  if (out.exact && out.cut_gamma.has_value())
    out.ok = out.gamma_found + 1e-9 >= *out.cut_gamma;
  return out;
}

ExtrapolationReport l1_extrapolation_check(const Multigraph& g, std::int64_t configs,
                                           std::uint64_t seed) {
  require(is_connected(g), "disconnected input");
  ExtrapolationReport out;
  double gl = gamma_line(g);
  out.gamma_line_sq = gl * gl;
  for (std::int64_t c = 0; c < configs; ++c) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(c) + 211);
    std::uniform_int_distribution<int> coord(0, 4);
    std::vector<std::vector<double>> pts(5, std::vector<double>(3));
    for (auto& p : pts)
      for (auto& x : p) x = coord(rng);
    auto X = FiniteMetric::from_points_l1(pts);
    if (X.min_positive_distance() < 0.0) continue;  // all points collided
    auto rep = gamma_search(g, X, SearchMode::local, false, 2'000'000,
                            seed + static_cast<std::uint64_t>(c), 30);
    out.quotients.push_back(rep.gamma_estimate / out.gamma_line_sq);
  }
  for (double q : out.quotients) out.max_quotient = std::max(out.max_quotient, q);
  return out;
}

}  // namespace gmg
