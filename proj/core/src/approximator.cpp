#include "gmg/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gmg/randgraph.hpp"
#include "gmg/spectral.hpp"

namespace gmg {

namespace {

// two-sided 95% Student t quantiles by degrees of freedom
double t_quantile(std::int64_t df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                 2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                 2.131,  2.120, 2.110, 2.101, 2.093, 2.086};
  if (df <= 0) fail("slope needs positive degrees of freedom");
  if (df <= 20) return table[df - 1];
  return 2.0;
}

}  // namespace

TemplateFamily make_template_family(std::vector<Multigraph> members, double size_ratio) {
  require(!members.empty(), "template family is empty");
  double max_jump = 1.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    require(members[k].regular_degree() == 3, "template members must be 3-regular");
    if (k > 0) {
      require(members[k].n() > members[k - 1].n(),
              "template sizes must be strictly ascending");
      max_jump = std::max(max_jump, static_cast<double>(members[k].n()) /
                                        static_cast<double>(members[k - 1].n()));
    }
  }
  TemplateFamily fam;
  fam.members = std::move(members);
  if (size_ratio == 0.0) {
    fam.size_ratio = max_jump;
  } else {
    require(size_ratio >= max_jump, "recorded size ratio below the actual jumps");
    fam.size_ratio = size_ratio;
  }
  return fam;
}

TemplateFamily doubling_template_family(std::int64_t smallest, std::int64_t levels,
                                        std::uint64_t seed) {
  require(smallest >= 6 && smallest % 2 == 0, "smallest template size must be even and >= 6");
  require(levels >= 1, "family needs at least one level");
  std::vector<Multigraph> members;
  std::int64_t size = smallest;
  for (std::int64_t k = 0; k < levels; ++k) {
    // simple members keep |E| = (3/2)|V| exact; best of three spectral gaps
    Multigraph best;
    double best_l2 = 2.0;
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      Multigraph g =
          uniform_simple_sample(size, 3, seed + 1000 * static_cast<std::uint64_t>(k) + rep)
              .graph;
      if (!is_connected(g)) continue;
      const double l2 = lambda2_iterative(g, 1e-7, 6000, 1).value;
      if (l2 < best_l2) {
        best_l2 = l2;
        best = std::move(g);
      }
    }
    require(best.n() == size, "no connected simple template found");
    members.push_back(std::move(best));
    size *= 2;
  }
  return make_template_family(std::move(members), 2.0);
}

TemplateFamily zigzag_template_family(const Multigraph& base, std::int64_t depth) {
  IterationRecipe recipe = make_recipe(base, depth);
  IterationResult res = zigzag_iteration(recipe, false);
  std::vector<Multigraph> members;
  for (auto& level : res.levels) members.push_back(std::move(level.g));
  return make_template_family(std::move(members), static_cast<double>(recipe.n));
}

UniversalApproximator build_universal(const TemplateFamily& family, std::int64_t n) {
  require(n >= 1, "point count must be positive");
  std::int64_t idx = -1;
  for (std::size_t k = 0; k < family.members.size(); ++k)
    if (family.members[k].n() >= n) {
      idx = static_cast<std::int64_t>(k);
      break;
    }
  if (idx < 0 || static_cast<double>(family.members[static_cast<std::size_t>(idx)].n()) >
                     family.size_ratio * static_cast<double>(n))
    fail("no suitable template in family range");

  const Multigraph& g = family.members[static_cast<std::size_t>(idx)];
  const std::int64_t big = g.n();

  UniversalApproximator u;
  u.n = n;
  u.template_index = idx;
  u.template_size = big;
  u.size_ratio = family.size_ratio;
  u.bucket_of.resize(static_cast<std::size_t>(big));
  u.bucket_size.assign(static_cast<std::size_t>(n), 0);
  const std::int64_t b = big / n, rem = big % n;
  std::int64_t v = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t sz = b + (i < rem ? 1 : 0);
    u.bucket_size[static_cast<std::size_t>(i)] = sz;
    for (std::int64_t k = 0; k < sz; ++k) u.bucket_of[static_cast<std::size_t>(v++)] = i;
  }

  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> proj;
  std::int64_t template_edges = 0, template_loops = 0;
  for (const auto& e : g.edge_list()) {
    template_edges += e[2];
    if (e[0] == e[1]) template_loops += e[2];
    std::int64_t i = u.bucket_of[static_cast<std::size_t>(e[0])];
    std::int64_t j = u.bucket_of[static_cast<std::size_t>(e[1])];
    if (i > j) std::swap(i, j);
    proj[{i, j}] += e[2];
  }
  for (const auto& [key, mult] : proj) {
    u.edges.push_back({key.first, key.second, mult});
    u.edge_total += mult;
  }

  if (u.edge_total != template_edges)
    throw std::logic_error("bucket projection changed the edge count");
  // |E| = (3|V| + loops)/2 under the loop-counts-one convention; loop-free
  // templates recover the plain (3/2) M n budget
  if (static_cast<double>(u.edge_total) >
      1.5 * family.size_ratio * static_cast<double>(n) +
          0.5 * static_cast<double>(template_loops) + 1e-9)
    throw std::logic_error("projected edge count exceeds (3/2) M n");
  return u;
}

MatrixOracle::MatrixOracle(FiniteMetric metric)
    : DistanceOracle(metric.n), metric_(std::move(metric)) {
  for (std::int64_t i = 0; i < metric_.n; ++i) {
    require(metric_(i, i) == 0.0, "oracle diagonal must be zero");
    for (std::int64_t j = i + 1; j < metric_.n; ++j)
      require(metric_(i, j) == metric_(j, i), "oracle matrix must be symmetric");
  }
}

MatrixOracle graph_metric_oracle(const Multigraph& g) {
  const BfsMetrics bm = bfs_metrics(g);
  require(bm.connected, "graph metric oracle needs a connected graph");
  const std::int64_t n = g.n();
  std::vector<double> d(static_cast<std::size_t>(n * n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      d[static_cast<std::size_t>(i * n + j)] =
          static_cast<double>(bm.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return MatrixOracle(FiniteMetric::from_matrix(n, std::move(d)));
}

MatrixOracle tuple_oracle(const FiniteMetric& base, const std::vector<std::int64_t>& tuple) {
  const std::int64_t n = static_cast<std::int64_t>(tuple.size());
  for (std::int64_t x : tuple)
    require(x >= 0 && x < base.n, "tuple index out of oracle range");
  std::vector<double> d(static_cast<std::size_t>(n * n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      d[static_cast<std::size_t>(i * n + j)] =
          base(tuple[static_cast<std::size_t>(i)], tuple[static_cast<std::size_t>(j)]);
  return MatrixOracle(FiniteMetric::from_matrix(n, std::move(d)));
}

EstimateResult estimate_avg_sq(const UniversalApproximator& u, DistanceOracle& oracle) {
  require(oracle.size() >= u.n, "oracle must cover the point set");
  const std::int64_t before = oracle.queries();
  double sum = 0.0;
  for (const auto& e : u.edges)
    for (std::int64_t k = 0; k < e[2]; ++k) {
      const double d = oracle(e[0], e[1]);
      sum += d * d;
    }
  EstimateResult out;
  out.queries = oracle.queries() - before;
  if (out.queries != u.edge_total)
    throw std::logic_error("estimator query count drifted from |E_n|");
  out.estimate = u.edge_total > 0 ? sum / static_cast<double>(u.edge_total) : 0.0;
  return out;
}

double exact_avg_sq(DistanceOracle& oracle, std::int64_t n) {
  require(n >= 1 && n <= oracle.size(), "point count outside oracle range");
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double d = oracle(i, j);
      sum += 2.0 * d * d;
    }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

double sampling_baseline(DistanceOracle& oracle, std::int64_t n, std::int64_t pairs,
                         std::uint64_t seed) {
  require(n >= 1 && n <= oracle.size(), "point count outside oracle range");
  require(pairs >= 1, "baseline needs at least one pair");
  auto rng = make_rng(seed, 23);
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  double sum = 0.0;
  for (std::int64_t k = 0; k < pairs; ++k) {
    const double d = oracle(pick(rng), pick(rng));
    sum += d * d;
  }
  return sum / static_cast<double>(pairs);
}

std::string RatioExperiment::csv() const {
  std::ostringstream os;
  os << "trial,m,n,exact,estimate,ratio,queries,tuple_mode\n";
  os.precision(12);
  for (const auto& r : rows)
    os << r.trial << ',' << r.m << ',' << r.n << ',' << r.exact << ',' << r.estimate
       << ',' << r.ratio << ',' << r.queries << ',' << r.tuple_mode << '\n';
  return os.str();
}

RatioExperiment ratio_experiment(std::int64_t m, std::int64_t d, std::int64_t n,
                                 std::int64_t trials, std::uint64_t seed,
                                 const TemplateFamily& family) {
  require(m >= n, "host graph must have at least n vertices");
  require(d >= 3, "host degree must be at least 3");
  require(trials >= 1, "need at least one trial");
  const UniversalApproximator u = build_universal(family, n);

  RatioExperiment out;
  double umax = 0.0, umin = std::numeric_limits<double>::infinity();
  double amax = 0.0, amin = std::numeric_limits<double>::infinity();
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    std::uint64_t ctr =
        seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
    const std::uint64_t ts = splitmix64(ctr);
    Multigraph h = uniform_simple_sample(m, d, ts).graph;
    for (std::uint64_t extra = 1; !is_connected(h); ++extra)
      h = uniform_simple_sample(m, d, ts + extra).graph;
    const BfsMetrics bm = bfs_metrics(h);
    std::vector<double> mat(static_cast<std::size_t>(m * m));
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t j = 0; j < m; ++j)
        mat[static_cast<std::size_t>(i * m + j)] = static_cast<double>(
            bm.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    const FiniteMetric base = FiniteMetric::from_matrix(m, std::move(mat));

    auto rng = make_rng(ts, 5);
    std::vector<std::int64_t> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::int64_t> uniform_tuple(all.begin(), all.begin() + n);

    std::uniform_int_distribution<std::int64_t> pick(0, m - 1);
    const std::int64_t root = pick(rng);
    std::vector<std::int64_t> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
      return bm.dist[static_cast<std::size_t>(root)][static_cast<std::size_t>(a)] <
             bm.dist[static_cast<std::size_t>(root)][static_cast<std::size_t>(b)];
    });
    std::vector<std::int64_t> ball_tuple(order.begin(), order.begin() + n);

    for (int mode = 0; mode < 2; ++mode) {
      const auto& tuple = mode == 0 ? uniform_tuple : ball_tuple;
      MatrixOracle oracle = tuple_oracle(base, tuple);
      const double exact = exact_avg_sq(oracle, n);
      const EstimateResult est = estimate_avg_sq(u, oracle);
      RatioRow row;
      row.trial = trial;
      row.m = m;
      row.n = n;
      row.exact = exact;
      row.estimate = est.estimate;
      row.ratio = exact > 0.0 ? est.estimate / exact
                              : std::numeric_limits<double>::quiet_NaN();
      row.queries = est.queries;
      row.tuple_mode = mode == 0 ? "uniform" : "adversarial";
      if (exact > 0.0) {
        if (mode == 0) {
          umax = std::max(umax, row.ratio);
          umin = std::min(umin, row.ratio);
        } else {
          amax = std::max(amax, row.ratio);
          amin = std::min(amin, row.ratio);
        }
      }
      out.rows.push_back(std::move(row));
    }
  }
  if (umin <= umax && umin > 0.0) {
    out.d_emp_uniform = std::sqrt(umax / umin);
    out.best_scale_uniform = 1.0 / std::sqrt(umax * umin);
  }
  if (amin <= amax && amin > 0.0) {
    out.d_emp_adversarial = std::sqrt(amax / amin);
    out.best_scale_adversarial = 1.0 / std::sqrt(amax * amin);
  }
  return out;
}

SlopeCi slope_ci(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::int64_t k = static_cast<std::int64_t>(xs.size());
  require(k == static_cast<std::int64_t>(ys.size()), "slope needs matched samples");
  require(k >= 3, "slope needs at least three points");
  const double kx = static_cast<double>(k);
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / kx;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / kx;
  double sxx = 0.0, sxy = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    sxx += (xs[static_cast<std::size_t>(i)] - mx) * (xs[static_cast<std::size_t>(i)] - mx);
    sxy += (xs[static_cast<std::size_t>(i)] - mx) * (ys[static_cast<std::size_t>(i)] - my);
  }
  require(sxx > 0.0, "slope needs distinct x values");
  SlopeCi out;
  out.slope = sxy / sxx;
  double rss = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    const double fit = my + out.slope * (xs[static_cast<std::size_t>(i)] - mx);
    rss += (ys[static_cast<std::size_t>(i)] - fit) * (ys[static_cast<std::size_t>(i)] - fit);
  }
  const double se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  out.half_width = t_quantile(k - 2) * se;
  out.lo = out.slope - out.half_width;
  out.hi = out.slope + out.half_width;
  return out;
}

}  // namespace gmg
