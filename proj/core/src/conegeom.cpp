#include "gmg/conegeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gmg/common.hpp"
#include "gmg/spectral.hpp"

namespace gmg {

namespace {

constexpr double kPi = std::numbers::pi;

double angle(const FiniteMetric& X, ConePoint p, ConePoint q) {
  if (p.s == 0.0 || q.s == 0.0) return 0.0;
  require(p.base >= 0 && p.base < X.n && q.base >= 0 && q.base < X.n,
          "cone point base index out of range");
  return std::min(kPi, X(p.base, q.base));
}

}  // namespace

double cone_distance(const FiniteMetric& X, ConePoint p, ConePoint q) {
  require(p.s >= 0.0 && q.s >= 0.0, "negative radius");
  const double th = angle(X, p, q);
  const double sq = (p.s - q.s) * (p.s - q.s) + 2.0 * p.s * q.s * (1.0 - std::cos(th));
  return std::sqrt(std::max(0.0, sq));
}

ConePoint ConeMetric::point(std::int64_t idx) const {
  if (idx == 0) return cone_cusp();
  const std::int64_t k = idx - 1;
  const std::size_t ri = static_cast<std::size_t>(k / base_points);
  return ConePoint{radii[ri], k % base_points};
}

ConeMetric cone_metric(const FiniteMetric& X, const std::vector<double>& radii) {
  require(X.n >= 1, "cone base must be nonempty");
  require(!radii.empty(), "cone radii must be nonempty");
  for (double r : radii) require(r > 0.0, "cone radii must be positive");

  ConeMetric cone;
  cone.radii = radii;
  cone.base_points = X.n;
  const std::int64_t m = 1 + static_cast<std::int64_t>(radii.size()) * X.n;
  cone.metric.n = m;
  cone.metric.d.assign(static_cast<std::size_t>(m * m), 0.0);
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = i + 1; j < m; ++j) {
      const double dist = cone_distance(X, cone.point(i), cone.point(j));
      cone.metric.at(i, j) = dist;
      cone.metric.at(j, i) = dist;
    }
  }
  try {
    cone.metric.check(1e-9);
  } catch (const std::exception& e) {
    throw std::logic_error(std::string("cone metric failed validation: ") + e.what());
  }
  return cone;
}

GraphFamilyMetric family_union(const std::vector<FamilyComponent>& components, double R) {
  require(!components.empty(), "family must be nonempty");
  require(R > 0.0, "ratio bound must be positive");

  GraphFamilyMetric fam;
  fam.ratio_bound = R;
  fam.cross_distance = 2.0 * kPi * (R + 1.0);
  std::int64_t total = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const FamilyComponent& comp = components[c];
    require(comp.girth > 0.0, "component girth must be positive");
    require(comp.graph_diameter <= R * comp.girth + 1e-12,
            "diameter/girth ratio bound violated by component " + std::to_string(c));
    fam.offsets.push_back(total);
    fam.sizes.push_back(comp.metric.n);
    total += comp.metric.n;
  }

  fam.metric.n = total;
  fam.metric.d.assign(static_cast<std::size_t>(total * total), fam.cross_distance);
  for (std::int64_t i = 0; i < total; ++i) fam.metric.at(i, i) = 0.0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const FamilyComponent& comp = components[c];
    const double scale = 2.0 * kPi / comp.girth;
    const std::int64_t off = fam.offsets[c];
    for (std::int64_t i = 0; i < comp.metric.n; ++i) {
      for (std::int64_t j = 0; j < comp.metric.n; ++j) {
        const double dist = scale * comp.metric(i, j);
        require(dist <= fam.cross_distance + 1e-9,
                "component exceeds the rescaled diameter bound");
        fam.metric.at(off + i, off + j) = dist;
      }
    }
  }
  fam.metric.check(1e-9);
  return fam;
}

std::function<ConePoint(ConePoint)> cusp_retraction(const FiniteMetric& X,
                                                    const std::vector<Vertex>& A) {
  std::vector<char> in(static_cast<std::size_t>(X.n), 0);
  for (Vertex a : A) {
    require(a >= 0 && a < X.n, "subset index out of range");
    in[static_cast<std::size_t>(a)] = 1;
  }
  return [in = std::move(in)](ConePoint p) {
    if (p.s == 0.0) return cone_cusp();
    return in[static_cast<std::size_t>(p.base)] ? p : cone_cusp();
  };
}

double cone_comparison_ratio(const FiniteMetric& X, ConePoint p, ConePoint q) {
  const double th = angle(X, p, q);
  const double denom =
      std::max(std::abs(p.s - q.s), std::max(p.s, q.s) * std::sqrt(2.0 * (1.0 - std::cos(th))));
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return cone_distance(X, p, q) / denom;
}

bool cone_sinus_bound(const FiniteMetric& X, ConePoint p, ConePoint q) {
  if (p.s == 0.0 || q.s == 0.0) return true;
  const double rhs =
      std::max(p.s, q.s) * std::sin(std::min(kPi / 2.0, X(p.base, q.base)));
  return cone_distance(X, p, q) + 1e-12 * (1.0 + rhs) >= rhs;
}

double rescaling_lipschitz_bound(const FiniteMetric& X, const std::vector<double>& f) {
  require(static_cast<std::int64_t>(f.size()) == X.n, "function size mismatch");
  double sup = 0.0;
  for (double v : f) {
    require(v > 0.0, "rescaling function must be positive");
    sup = std::max(sup, v);
  }
  double lip = 0.0;
  for (std::int64_t i = 0; i < X.n; ++i) {
    for (std::int64_t j = i + 1; j < X.n; ++j) {
      const double gap = std::abs(f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(j)]);
      if (gap == 0.0) continue;
      const double dist = X(i, j);
      if (dist == 0.0) return std::numeric_limits<double>::infinity();
      lip = std::max(lip, gap / dist);
    }
  }
  const double diam = X.diameter();
  return std::sqrt(diam * diam * lip * lip + 2.0 * sup * sup);
}

std::vector<std::pair<ConePoint, ConePoint>> sample_cone_pairs(const FiniteMetric& X,
                                                               std::int64_t count,
                                                               std::uint64_t seed) {
  require(X.n >= 1, "metric must be nonempty");
  require(count >= 0, "pair count must be nonnegative");
  std::mt19937_64 rng = make_rng(seed, 33);
  std::uniform_int_distribution<Vertex> pick(0, X.n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Pairs at angle >= pi realize the antipodal stratum; fall back to the
  // farthest pair when none exists.
  std::vector<std::pair<Vertex, Vertex>> far;
  std::pair<Vertex, Vertex> extreme{0, 0};
  double best = -1.0;
  for (Vertex i = 0; i < X.n; ++i) {
    for (Vertex j = i + 1; j < X.n; ++j) {
      if (X(i, j) >= kPi) far.emplace_back(i, j);
      if (X(i, j) > best) {
        best = X(i, j);
        extreme = {i, j};
      }
    }
  }
  if (far.empty()) far.push_back(extreme);
  std::uniform_int_distribution<std::size_t> pick_far(0, far.size() - 1);

  const auto radius = [&](double lo, double hi) { return std::exp2(lo + (hi - lo) * unit(rng)); };
  std::vector<std::pair<ConePoint, ConePoint>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const int stratum = static_cast<int>(i % 10);
    ConePoint p, q;
    if (stratum < 4) {
      p = ConePoint{radius(-3.0, 2.0), pick(rng)};
      q = ConePoint{radius(-3.0, 2.0), pick(rng)};
    } else if (stratum < 6) {
      p = (i % 20 == 4) ? cone_cusp() : ConePoint{radius(-20.0, -7.0), pick(rng)};
      q = ConePoint{radius(-3.0, 2.0), pick(rng)};
    } else if (stratum < 8) {
      const auto [a, b] = far[pick_far(rng)];
      p = ConePoint{radius(-3.0, 2.0), a};
      q = ConePoint{radius(-3.0, 2.0), b};
    } else {
      const double s = radius(-3.0, 2.0);
      p = ConePoint{s, pick(rng)};
      q = ConePoint{s, pick(rng)};
    }
    out.emplace_back(p, q);
  }
  return out;
}

namespace {

FiniteMetric restrict_metric(const FiniteMetric& X, const std::vector<Vertex>& idx) {
  FiniteMetric sub;
  sub.n = static_cast<std::int64_t>(idx.size());
  sub.d.assign(static_cast<std::size_t>(sub.n * sub.n), 0.0);
  for (std::int64_t i = 0; i < sub.n; ++i) {
    for (std::int64_t j = 0; j < sub.n; ++j) {
      sub.at(i, j) = X(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return sub;
}

double measured_gamma_plus(const std::vector<double>& M, std::int64_t n,
                           const FiniteMetric& cone, const UnionPoincareOptions& opt,
                           std::uint64_t stream) {
  const PoincareReport rep =
      matrix_gamma_search(M, n, cone, SearchMode::local, true, opt.search_budget,
                          opt.seed + stream, opt.search_restarts);
  return rep.gamma_estimate;
}

}  // namespace

UnionPoincareReport union_poincare_report(const std::vector<double>& M, std::int64_t n,
                                          const FiniteMetric& X, const std::vector<Vertex>& A,
                                          const std::vector<Vertex>& B, double beta,
                                          const UnionPoincareOptions& opt) {
  require(beta > 0.0 && beta <= kPi + 1e-12, "beta must lie in (0, pi]");
  std::vector<char> inA(static_cast<std::size_t>(X.n), 0);
  std::vector<char> inB(static_cast<std::size_t>(X.n), 0);
  for (Vertex a : A) {
    require(a >= 0 && a < X.n, "subset index out of range");
    inA[static_cast<std::size_t>(a)] = 1;
  }
  for (Vertex b : B) {
    require(b >= 0 && b < X.n, "subset index out of range");
    inB[static_cast<std::size_t>(b)] = 1;
  }
  for (Vertex x = 0; x < X.n; ++x) {
    require(inA[static_cast<std::size_t>(x)] || inB[static_cast<std::size_t>(x)],
            "A and B must cover X");
  }

  std::vector<Vertex> a_only, b_only, a_all, b_all;
  for (Vertex x = 0; x < X.n; ++x) {
    if (inA[static_cast<std::size_t>(x)]) a_all.push_back(x);
    if (inB[static_cast<std::size_t>(x)]) b_all.push_back(x);
    if (inA[static_cast<std::size_t>(x)] && !inB[static_cast<std::size_t>(x)]) a_only.push_back(x);
    if (inB[static_cast<std::size_t>(x)] && !inA[static_cast<std::size_t>(x)]) b_only.push_back(x);
  }

  UnionPoincareReport rep;
  if (a_only.empty() || b_only.empty()) {
    // One piece already covers X and the union bound degenerates.
    rep.degenerate = true;
    const ConeMetric cone = cone_metric(X, opt.radii);
    rep.gamma_a = rep.gamma_b = measured_gamma_plus(M, n, cone.metric, opt, 11);
    rep.bound = rep.gamma_a;
    return rep;
  }

  double separation = std::numeric_limits<double>::infinity();
  for (Vertex a : a_only) {
    for (Vertex b : b_only) separation = std::min(separation, X(a, b));
  }
  require(separation + 1e-12 >= beta, "separation precondition violated");

  const ConeMetric coneA = cone_metric(restrict_metric(X, a_all), opt.radii);
  const ConeMetric coneB = cone_metric(restrict_metric(X, b_all), opt.radii);
  rep.gamma_a = measured_gamma_plus(M, n, coneA.metric, opt, 12);
  rep.gamma_b = measured_gamma_plus(M, n, coneB.metric, opt, 13);
  rep.bound = 216.0 * kPi * kPi * kPi * kPi * (rep.gamma_a + rep.gamma_b) / std::pow(beta, 4.0);

  // The proof works with the pi-truncated metric; the scaled retractions use
  // truncated distances to the far side so their Lipschitz constant obeys the
  // sqrt(3) pi bound.
  std::vector<double> to_b_only(static_cast<std::size_t>(X.n));
  std::vector<double> to_a_only(static_cast<std::size_t>(X.n));
  for (Vertex x = 0; x < X.n; ++x) {
    double da = std::numeric_limits<double>::infinity();
    double db = std::numeric_limits<double>::infinity();
    for (Vertex a : a_only) da = std::min(da, X(x, a));
    for (Vertex b : b_only) db = std::min(db, X(x, b));
    to_a_only[static_cast<std::size_t>(x)] = std::min(kPi, da);
    to_b_only[static_cast<std::size_t>(x)] = std::min(kPi, db);
  }

  const double floor_const = std::pow(beta, 4.0) / (72.0 * kPi * kPi);
  for (const auto& [p, q] : sample_cone_pairs(X, opt.sample_pairs, opt.seed + 2)) {
    const double dx = cone_distance(X, p, q);
    if (dx <= 0.0) continue;
    const ConePoint ap{to_b_only[static_cast<std::size_t>(p.base)] * p.s, p.base};
    const ConePoint aq{to_b_only[static_cast<std::size_t>(q.base)] * q.s, q.base};
    const ConePoint bp{to_a_only[static_cast<std::size_t>(p.base)] * p.s, p.base};
    const ConePoint bq{to_a_only[static_cast<std::size_t>(q.base)] * q.s, q.base};
    const double da = cone_distance(X, ap, aq);
    const double db = cone_distance(X, bp, bq);
    rep.lipschitz_worst = std::max({rep.lipschitz_worst, da / dx, db / dx});
    rep.sum_sq_margin = std::min(rep.sum_sq_margin, (da * da + db * db) / (floor_const * dx * dx));
    ++rep.pairs;
  }

  bool disjoint = true;
  for (Vertex x = 0; x < X.n; ++x) {
    if (inA[static_cast<std::size_t>(x)] && inB[static_cast<std::size_t>(x)]) disjoint = false;
  }
  if (disjoint && separation + 1e-12 >= kPi) {
    rep.pi_separated_bound = 2.0 * std::max(rep.gamma_a, rep.gamma_b);
  }
  return rep;
}

double union_poincare_bound(const std::vector<double>& M, std::int64_t n, const FiniteMetric& X,
                            const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                            double beta, const UnionPoincareOptions& opt) {
  return union_poincare_report(M, n, X, A, B, beta, opt).bound;
}

}  // namespace gmg
