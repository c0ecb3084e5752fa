#include "gmg/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace gmg {

bool RotationMap::is_involution() const {
  std::int64_t m = static_cast<std::int64_t>(table.size());
  for (std::int64_t e = 0; e < m; ++e) {
    std::int64_t f = table[static_cast<std::size_t>(e)];
    if (f < 0 || f >= m) return false;
    if (table[static_cast<std::size_t>(f)] != e) return false;
  }
  return true;
}

Multigraph Multigraph::from_edges(std::int64_t n,
                                  const std::vector<std::array<std::int64_t, 3>>& edges) {
  require(n >= 1, "vertex count must be positive");
  std::vector<std::map<Vertex, std::int64_t>> rows(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    auto [u, v, m] = e;
    require(u >= 0 && u < n && v >= 0 && v < n, "edge endpoint out of range");
    require(m >= 0, "negative multiplicity");
    if (m == 0) continue;
    rows[static_cast<std::size_t>(u)][v] += m;
    if (u != v) rows[static_cast<std::size_t>(v)][u] += m;
  }
  Multigraph g;
  g.n_ = n;
  g.adj_.resize(static_cast<std::size_t>(n));
  g.deg_.assign(static_cast<std::size_t>(n), 0);
  for (std::int64_t u = 0; u < n; ++u) {
    auto& row = g.adj_[static_cast<std::size_t>(u)];
    row.assign(rows[static_cast<std::size_t>(u)].begin(), rows[static_cast<std::size_t>(u)].end());
    std::int64_t d = 0;
    for (auto& [v, m] : row) d += m;
    g.deg_[static_cast<std::size_t>(u)] = d;
  }
  return g;
}

Multigraph Multigraph::from_rotation(std::int64_t n, RotationMap rot) {
  require(n >= 1, "vertex count must be positive");
  require(rot.d >= 1, "rotation degree must be positive");
  require(static_cast<std::int64_t>(rot.table.size()) == n * rot.d,
          "rotation table size mismatch");
  require(rot.is_involution(), "rotation is not an involution");
  std::vector<std::array<std::int64_t, 3>> edges;
  edges.reserve(static_cast<std::size_t>(n * rot.d));
  for (Vertex v = 0; v < n; ++v) {
    for (std::int64_t i = 0; i < rot.d; ++i) {
      auto [w, j] = rot(v, i);
      // Count each port once: mult(u,v) = #ports of u landing at v.
      if (std::make_pair(v, i) <= std::make_pair(w, j)) {
        if (v == w) {
          // Fixed point = one loop; a paired within-vertex port pair = two loops.
          edges.push_back({v, v, i == j ? 1 : 2});
        } else {
          edges.push_back({v, w, 1});
        }
      }
    }
  }
  Multigraph g = from_edges(n, edges);
  g.rot_ = std::move(rot);
  return g;
}

Multigraph Multigraph::from_rows_unchecked(
    std::int64_t n, std::vector<std::vector<std::pair<Vertex, std::int64_t>>> rows) {
  Multigraph g;
  g.n_ = n;
  g.adj_ = std::move(rows);
  g.adj_.resize(static_cast<std::size_t>(n));
  g.deg_.assign(static_cast<std::size_t>(n), 0);
  for (std::int64_t u = 0; u < n; ++u) {
    auto& row = g.adj_[static_cast<std::size_t>(u)];
    std::sort(row.begin(), row.end());
    std::int64_t d = 0;
    for (auto& [v, m] : row) d += m;
    g.deg_[static_cast<std::size_t>(u)] = d;
  }
  return g;
}

std::int64_t Multigraph::multiplicity(Vertex u, Vertex v) const {
  const auto& row = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(v, std::int64_t{0}));
  if (it != row.end() && it->first == v) return it->second;
  return 0;
}

std::int64_t Multigraph::half_edge_count() const {
  std::int64_t s = 0;
  for (auto d : deg_) s += d;
  return s;
}

std::int64_t Multigraph::loop_count() const {
  std::int64_t s = 0;
  for (Vertex u = 0; u < n_; ++u) s += multiplicity(u, u);
  return s;
}

std::optional<std::int64_t> Multigraph::regular_degree() const {
  if (n_ == 0) return std::nullopt;
  std::int64_t d = deg_[0];
  for (auto x : deg_)
    if (x != d) return std::nullopt;
  return d;
}

RotationMap& Multigraph::mutable_rotation() {
  require(rot_.has_value(), "graph has no rotation map");
  return *rot_;
}

void Multigraph::attach_rotation(RotationMap rot) {
  auto reg = regular_degree();
  require(reg.has_value(), "rotation requires a regular graph");
  require(rot.d == *reg, "rotation degree mismatch");
  require(static_cast<std::int64_t>(rot.table.size()) == n_ * rot.d,
          "rotation table size mismatch");
  require(rot.is_involution(), "rotation is not an involution");
  for (Vertex v = 0; v < n_; ++v) {
    std::map<Vertex, std::int64_t> counts;
    for (std::int64_t i = 0; i < rot.d; ++i) counts[rot(v, i).first] += 1;
    for (const auto& [w, m] : row(v)) {
      auto it = counts.find(w);
      std::int64_t c = it == counts.end() ? 0 : it->second;
      require(c == m, "rotation inconsistent with multiplicities");
      if (it != counts.end()) counts.erase(it);
    }
    require(counts.empty(), "rotation inconsistent with multiplicities");
  }
  rot_ = std::move(rot);
}

void Multigraph::attach_default_rotation() {
  auto reg = regular_degree();
  require(reg.has_value(), "rotation requires a regular graph");
  std::int64_t d = *reg;
  RotationMap rot;
  rot.d = d;
  rot.table.assign(static_cast<std::size_t>(n_ * d), -1);
  std::vector<std::int64_t> next(static_cast<std::size_t>(n_), 0);
  auto take_port = [&](Vertex v) {
    std::int64_t i = next[static_cast<std::size_t>(v)]++;
    require(i < d, "internal: port overflow");
    return v * d + i;
  };
  for (Vertex u = 0; u < n_; ++u) {
    for (const auto& [v, m] : row(u)) {
      if (v < u) continue;
      if (v == u) {
        for (std::int64_t k = 0; k < m; ++k) {
          std::int64_t p = take_port(u);
          rot.table[static_cast<std::size_t>(p)] = p;
        }
      } else {
        for (std::int64_t k = 0; k < m; ++k) {
          std::int64_t p = take_port(u);
          std::int64_t q = take_port(v);
          rot.table[static_cast<std::size_t>(p)] = q;
          rot.table[static_cast<std::size_t>(q)] = p;
        }
      }
    }
  }
  rot_ = std::move(rot);
}

std::vector<std::array<std::int64_t, 3>> Multigraph::edge_list() const {
  std::vector<std::array<std::int64_t, 3>> out;
  for (Vertex u = 0; u < n_; ++u)
    for (const auto& [v, m] : row(u))
      if (u <= v) out.push_back({u, v, m});
  return out;
}

ValidationReport validate(const Multigraph& g, std::optional<std::int64_t> expect_degree) {
  ValidationReport rep;
  auto flag = [&](const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.error = msg;
    }
  };
  if (g.n() < 1) {
    flag("empty graph");
    return rep;
  }
  for (Vertex u = 0; u < g.n() && rep.ok; ++u) {
    for (const auto& [v, m] : g.row(u)) {
      if (v < 0 || v >= g.n()) {
        flag("neighbor out of range");
        break;
      }
      if (m < 0) {
        flag("negative multiplicity");
        break;
      }
      if (g.multiplicity(v, u) != m) {
        flag("asymmetric multiplicity");
        break;
      }
    }
  }
  if (!rep.ok) return rep;
  rep.regular_degree = g.regular_degree();
  if (expect_degree && rep.regular_degree != expect_degree) flag("degree mismatch");
  if (!rep.ok) return rep;
  if (g.rotation()) {
    const auto& rot = *g.rotation();
    if (!rep.regular_degree) {
      flag("rotation on a non-regular graph");
    } else if (rot.d != *rep.regular_degree ||
               static_cast<std::int64_t>(rot.table.size()) != g.n() * rot.d) {
      flag("rotation table size mismatch");
    } else if (!rot.is_involution()) {
      flag("rotation is not an involution");
    } else {
      for (Vertex v = 0; v < g.n() && rep.ok; ++v) {
        std::map<Vertex, std::int64_t> counts;
        for (std::int64_t i = 0; i < rot.d; ++i) counts[rot(v, i).first] += 1;
        std::int64_t covered = 0;
        for (const auto& [w, m] : g.row(v)) {
          auto it = counts.find(w);
          if ((it == counts.end() ? 0 : it->second) != m) {
            flag("rotation inconsistent with multiplicities");
            break;
          }
          covered += 1;
        }
        if (rep.ok && covered != static_cast<std::int64_t>(counts.size()))
          flag("rotation inconsistent with multiplicities");
      }
    }
  }
  return rep;
}

std::vector<std::int32_t> bfs_from(const Multigraph& g, Vertex source) {
  std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n()), -1);
  std::deque<Vertex> queue;
  dist[static_cast<std::size_t>(source)] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    std::int32_t du = dist[static_cast<std::size_t>(u)];
    for (const auto& [v, m] : g.row(u)) {
      (void)m;
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = du + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

BfsMetrics bfs_metrics(const Multigraph& g) {
  require(g.n() <= 16384, "all-pairs matrix too large");
  BfsMetrics out;
  out.dist.reserve(static_cast<std::size_t>(g.n()));
  for (Vertex u = 0; u < g.n(); ++u) {
    out.dist.push_back(bfs_from(g, u));
    for (auto d : out.dist.back()) {
      if (d < 0)
        out.connected = false;
      else
        out.diameter = std::max<std::int64_t>(out.diameter, d);
    }
  }
  return out;
}

bool is_connected(const Multigraph& g) {
  if (g.n() == 0) return false;
  auto dist = bfs_from(g, 0);
  return std::all_of(dist.begin(), dist.end(), [](std::int32_t d) { return d >= 0; });
}

namespace {

// Shortest cycle through simple edges, assuming no loops and no parallel
// pairs: min over edges {u,v} of dist(u,v) in G - {u,v} plus 1.
std::int64_t simple_girth(const Multigraph& g) {
  std::int64_t best = -1;
  for (Vertex u = 0; u < g.n(); ++u) {
    for (const auto& [v, m] : g.row(u)) {
      (void)m;
      if (v <= u) continue;
      std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n()), -1);
      std::deque<Vertex> queue;
      dist[static_cast<std::size_t>(u)] = 0;
      queue.push_back(u);
      while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        std::int32_t dx = dist[static_cast<std::size_t>(x)];
        if (best >= 0 && dx + 1 >= best) break;
        for (const auto& [y, my] : g.row(x)) {
          (void)my;
          if (x == u && y == v) continue;
          if (x == v && y == u) continue;
          if (dist[static_cast<std::size_t>(y)] < 0) {
            dist[static_cast<std::size_t>(y)] = dx + 1;
            queue.push_back(y);
          }
        }
      }
      if (dist[static_cast<std::size_t>(v)] >= 0) {
        std::int64_t cyc = dist[static_cast<std::size_t>(v)] + 1;
        if (best < 0 || cyc < best) best = cyc;
      }
    }
  }
  return best;
}

}  // namespace

std::int64_t girth(const Multigraph& g) {
  for (Vertex u = 0; u < g.n(); ++u)
    if (g.loops(u) > 0) return 1;
  for (Vertex u = 0; u < g.n(); ++u)
    for (const auto& [v, m] : g.row(u))
      if (v > u && m >= 2) return 2;
  std::int64_t best = simple_girth(g);
  if (best >= 0) return best;
  // Acyclic: 2 * diam, the degenerate-girth convention.
  std::int64_t diam = 0;
  for (Vertex u = 0; u < g.n(); ++u)
    for (auto d : bfs_from(g, u)) diam = std::max<std::int64_t>(diam, d);
  return 2 * diam;
}

std::vector<Cycle> short_cycles(const Multigraph& g, double t) {
  require(t >= 1.0, "threshold must be at least 1");
  std::int64_t len_max = static_cast<std::int64_t>(std::ceil(t)) - 1;  // |C| < t
  require(len_max <= 24, "cycle length cap 24 exceeded");
  std::vector<Cycle> out;
  if (len_max < 1) return out;

  auto internal_edges = [&](const std::vector<Vertex>& verts) {
    std::int64_t s = 0;
    for (std::size_t a = 0; a < verts.size(); ++a) {
      s += g.loops(verts[a]);
      for (std::size_t b = a + 1; b < verts.size(); ++b)
        s += g.multiplicity(verts[a], verts[b]);
    }
    return s;
  };

  for (Vertex v = 0; v < g.n(); ++v)
    if (g.loops(v) > 0)
      out.push_back({{v}, internal_edges({v}) == 1});
  if (len_max >= 2) {
    for (Vertex u = 0; u < g.n(); ++u)
      for (const auto& [v, m] : g.row(u))
        if (v > u && m >= 2) out.push_back({{u, v}, internal_edges({u, v}) == 2});
  }
  if (len_max >= 3) {
    std::vector<char> onpath(static_cast<std::size_t>(g.n()), 0);
    std::vector<Vertex> path;
    // Canonical form: least vertex first, second vertex below the last one.
    std::function<void(Vertex, Vertex)> extend = [&](Vertex s, Vertex u) {
      for (const auto& [w, m] : g.row(u)) {
        (void)m;
        if (w == s && path.size() >= 3 && path[1] < path.back())
          out.push_back({path, internal_edges(path) == static_cast<std::int64_t>(path.size())});
        if (w <= s || onpath[static_cast<std::size_t>(w)]) continue;
        if (static_cast<std::int64_t>(path.size()) >= len_max) continue;
        path.push_back(w);
        onpath[static_cast<std::size_t>(w)] = 1;
        extend(s, w);
        onpath[static_cast<std::size_t>(w)] = 0;
        path.pop_back();
      }
    };
    for (Vertex s = 0; s < g.n(); ++s) {
      path.assign(1, s);
      onpath[static_cast<std::size_t>(s)] = 1;
      extend(s, s);
      onpath[static_cast<std::size_t>(s)] = 0;
    }
  }
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
    return a.verts < b.verts;
  });
  return out;
}

SimplicialPoint SimplicialPoint::edge_point(Vertex a, Vertex b, std::int64_t instance,
                                            std::int64_t off_units) {
  require(off_units > 0 && off_units < kGrid, "edge offset must lie strictly inside (0,1)");
  require(instance >= 0, "negative edge instance");
  SimplicialPoint p;
  p.instance = instance;
  if (a > b) {
    p.u = b;
    p.v = a;
    p.off = kGrid - off_units;
  } else {
    p.u = a;
    p.v = b;
    p.off = off_units;
  }
  if (p.u == p.v) p.off = std::min(p.off, kGrid - p.off);
  return p;
}

namespace {

struct Anchor {
  Vertex vert;
  std::int64_t off;
  bool from_u;  // which BFS row covers this anchor
};

void check_point(const Multigraph& g, const SimplicialPoint& p) {
  require(p.u >= 0 && p.u < g.n() && p.v >= 0 && p.v < g.n(), "point vertex out of range");
  if (!p.is_vertex())
    require(p.instance < g.multiplicity(p.u, p.v), "edge instance out of range");
}

std::vector<Anchor> anchors_of(const SimplicialPoint& p) {
  if (p.is_vertex()) return {{p.u, 0, true}};
  if (p.u == p.v) return {{p.u, p.off, true}};
  return {{p.u, p.off, true}, {p.v, kGrid - p.off, false}};
}

}  // namespace

std::int64_t simplicial_distance_units(const Multigraph& g, const SimplicialPoint& p,
                                       const SimplicialPoint& q,
                                       const std::vector<std::int32_t>& dist_from_u,
                                       const std::vector<std::int32_t>& dist_from_v) {
  check_point(g, p);
  check_point(g, q);
  std::int64_t best = -1;
  auto consider = [&](std::int64_t c) {
    if (best < 0 || c < best) best = c;
  };
  bool same_instance = !p.is_vertex() && !q.is_vertex() && p.u == q.u && p.v == q.v &&
                       p.instance == q.instance;
  if (same_instance) {
    if (p.u == p.v)
      consider(std::min(std::abs(p.off - q.off), p.off + q.off));
    else
      consider(std::abs(p.off - q.off));
  }
  for (const Anchor& a : anchors_of(p)) {
    const auto& row = a.from_u ? dist_from_u : dist_from_v;
    for (const Anchor& b : anchors_of(q)) {
      std::int32_t d = row[static_cast<std::size_t>(b.vert)];
      if (d < 0) continue;
      consider(a.off + static_cast<std::int64_t>(d) * kGrid + b.off);
    }
  }
  require(best >= 0, "points lie in different components");
  return best;
}

double simplicial_distance(const Multigraph& g, const SimplicialPoint& p,
                           const SimplicialPoint& q) {
  auto du = bfs_from(g, p.u);
  auto dv = p.v == p.u ? du : bfs_from(g, p.v);
  return static_cast<double>(simplicial_distance_units(g, p, q, du, dv)) /
         static_cast<double>(kGrid);
}

double edge_sum(const Multigraph& g, const std::function<double(Vertex, Vertex)>& kernel) {
  for (Vertex u = 0; u < g.n(); ++u)
    require(kernel(u, u) == 0.0, "kernel diagonal must vanish");
  double s = 0.0;
  for (Vertex u = 0; u < g.n(); ++u)
    for (const auto& [v, m] : g.row(u))
      if (v > u) s += static_cast<double>(m) * kernel(u, v);
  return s;
}

Multigraph cycle_graph(std::int64_t k) {
  require(k >= 3, "cycle needs at least 3 vertices");
  std::vector<std::array<std::int64_t, 3>> edges;
  for (std::int64_t i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k, 1});
  Multigraph g = Multigraph::from_edges(k, edges);
  g.attach_default_rotation();
  return g;
}

Multigraph looped_cycle_graph(std::int64_t k) {
  require(k >= 3, "cycle needs at least 3 vertices");
  std::vector<std::array<std::int64_t, 3>> edges;
  for (std::int64_t i = 0; i < k; ++i) {
    edges.push_back({i, (i + 1) % k, 1});
    edges.push_back({i, i, 1});
  }
  Multigraph g = Multigraph::from_edges(k, edges);
  g.attach_default_rotation();
  return g;
}

Multigraph complete_graph(std::int64_t k) {
  require(k >= 2, "complete graph needs at least 2 vertices");
  std::vector<std::array<std::int64_t, 3>> edges;
  for (std::int64_t i = 0; i < k; ++i)
    for (std::int64_t j = i + 1; j < k; ++j) edges.push_back({i, j, 1});
  Multigraph g = Multigraph::from_edges(k, edges);
  g.attach_default_rotation();
  return g;
}

Multigraph all_loops_graph(std::int64_t n, std::int64_t d) {
  require(n >= 1 && d >= 1, "need positive size and degree");
  std::vector<std::array<std::int64_t, 3>> edges;
  for (std::int64_t i = 0; i < n; ++i) edges.push_back({i, i, d});
  Multigraph g = Multigraph::from_edges(n, edges);
  g.attach_default_rotation();
  return g;
}

std::string graph_to_json(const Multigraph& g) {
  nlohmann::json j;
  j["n"] = g.n();
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& [u, v, m] : g.edge_list()) edges.push_back({u, v, m});
  if (g.rotation()) {
    const auto& rot = *g.rotation();
    auto& rows = j["rotation"] = nlohmann::json::array();
    for (Vertex v = 0; v < g.n(); ++v)
      for (std::int64_t i = 0; i < rot.d; ++i) {
        auto [w, jj] = rot(v, i);
        if (std::make_pair(v, i) <= std::make_pair(w, jj)) rows.push_back({v, i, w, jj});
      }
  }
  return j.dump();
}

Multigraph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  require(j.contains("n") && j.contains("edges"), "graph json needs n and edges");
  std::int64_t n = j["n"].get<std::int64_t>();
  std::vector<std::array<std::int64_t, 3>> edges;
  for (const auto& row : j["edges"]) {
    require(row.size() == 3, "edge row must be [u,v,mult]");
    edges.push_back({row[0].get<std::int64_t>(), row[1].get<std::int64_t>(),
                     row[2].get<std::int64_t>()});
  }
  Multigraph g = Multigraph::from_edges(n, edges);
  if (j.contains("rotation") && !j["rotation"].is_null()) {
    auto reg = g.regular_degree();
    require(reg.has_value(), "rotation requires a regular graph");
    std::int64_t d = *reg;
    RotationMap rot;
    rot.d = d;
    rot.table.assign(static_cast<std::size_t>(n * d), -1);
    for (const auto& row : j["rotation"]) {
      require(row.size() == 4, "rotation row must be [v,i,w,j]");
      std::int64_t v = row[0].get<std::int64_t>();
      std::int64_t i = row[1].get<std::int64_t>();
      std::int64_t w = row[2].get<std::int64_t>();
      std::int64_t jj = row[3].get<std::int64_t>();
      require(v >= 0 && v < n && w >= 0 && w < n && i >= 0 && i < d && jj >= 0 && jj < d,
              "rotation row out of range");
      rot.table[static_cast<std::size_t>(v * d + i)] = w * d + jj;
      rot.table[static_cast<std::size_t>(w * d + jj)] = v * d + i;
    }
    for (auto e : rot.table) require(e >= 0, "rotation table incomplete");
    g.attach_rotation(std::move(rot));
  }
  return g;
}

void save_graph(const Multigraph& g, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open " + path);
  out << graph_to_json(g) << "\n";
}

Multigraph load_graph(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

}  // namespace gmg
