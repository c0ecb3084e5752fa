#include "gmg/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gmg {

double FiniteMetric::diameter() const {
  double m = 0.0;
  for (double x : d) m = std::max(m, x);
  return m;
}

double FiniteMetric::min_positive_distance() const {
  double m = -1.0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) {
      double x = (*this)(i, j);
      if (x > 0.0 && (m < 0.0 || x < m)) m = x;
    }
  return m;
}

void FiniteMetric::check(double tol) const {
  require(n >= 1, "metric needs at least one point");
  require(static_cast<std::int64_t>(d.size()) == n * n, "matrix size mismatch");
  for (std::int64_t i = 0; i < n; ++i) {
    require(std::abs((*this)(i, i)) <= tol, "nonzero diagonal");
    for (std::int64_t j = 0; j < n; ++j) {
      require((*this)(i, j) >= -tol, "negative distance");
      require(std::abs((*this)(i, j) - (*this)(j, i)) <= tol, "asymmetric distance");
    }
  }
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      for (std::int64_t k = 0; k < n; ++k)
        require((*this)(i, j) <= (*this)(i, k) + (*this)(k, j) + tol,
                "triangle inequality violated");
}

FiniteMetric FiniteMetric::from_matrix(std::int64_t n, std::vector<double> d) {
  FiniteMetric m{n, std::move(d)};
  require(static_cast<std::int64_t>(m.d.size()) == n * n, "matrix size mismatch");
  return m;
}

FiniteMetric FiniteMetric::two_point(double dist) {
  return from_matrix(2, {0.0, dist, dist, 0.0});
}

FiniteMetric FiniteMetric::real_grid(std::int64_t k, double step) {
  FiniteMetric m{k, std::vector<double>(static_cast<std::size_t>(k * k), 0.0)};
  for (std::int64_t i = 0; i < k; ++i)
    for (std::int64_t j = 0; j < k; ++j)
      m.at(i, j) = std::abs(static_cast<double>(i - j)) * step;
  return m;
}

namespace {

template <typename Dist>
FiniteMetric from_points(const std::vector<std::vector<double>>& pts, Dist dist) {
  std::int64_t n = static_cast<std::int64_t>(pts.size());
  require(n >= 1, "metric needs at least one point");
  FiniteMetric m{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
  for (std::int64_t i = 0; i < n; ++i) {
    require(pts[static_cast<std::size_t>(i)].size() == pts[0].size(), "dimension mismatch");
    for (std::int64_t j = i + 1; j < n; ++j) {
      double x = dist(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
      m.at(i, j) = x;
      m.at(j, i) = x;
    }
  }
  return m;
}

}  // namespace

FiniteMetric FiniteMetric::from_points_l1(const std::vector<std::vector<double>>& pts) {
  return from_points(pts, [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
  });
}

FiniteMetric FiniteMetric::from_points_l2(const std::vector<std::vector<double>>& pts) {
  return from_points(pts, [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
  });
}

std::string metric_to_json(const FiniteMetric& m) {
  nlohmann::json j;
  j["n"] = m.n;
  auto& rows = j["d"] = nlohmann::json::array();
  for (std::int64_t i = 0; i < m.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::int64_t k = 0; k < m.n; ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return j.dump();
}

FiniteMetric metric_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  require(j.contains("n") && j.contains("d"), "metric json needs n and d");
  std::int64_t n = j["n"].get<std::int64_t>();
  FiniteMetric m{n, {}};
  m.d.reserve(static_cast<std::size_t>(n * n));
  require(static_cast<std::int64_t>(j["d"].size()) == n, "matrix row count mismatch");
  for (const auto& row : j["d"]) {
    require(static_cast<std::int64_t>(row.size()) == n, "matrix row length mismatch");
    for (const auto& x : row) m.d.push_back(x.get<double>());
  }
  return m;
}

void save_metric(const FiniteMetric& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open " + path);
  out << metric_to_json(m) << "\n";
}

FiniteMetric load_metric(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return metric_from_json(ss.str());
}

}  // namespace gmg
