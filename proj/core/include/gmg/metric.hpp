#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmg/common.hpp"

namespace gmg {

// Finite metric space given by a dense distance matrix.
struct FiniteMetric {
  std::int64_t n = 0;
  std::vector<double> d;  // row-major n*n

  double operator()(std::int64_t i, std::int64_t j) const {
    return d[static_cast<std::size_t>(i * n + j)];
  }
  double& at(std::int64_t i, std::int64_t j) { return d[static_cast<std::size_t>(i * n + j)]; }

  double diameter() const;
  double min_positive_distance() const;

  // Symmetry, zero diagonal, nonnegativity, triangle inequality (within tol).
  void check(double tol = 1e-12) const;

  static FiniteMetric from_matrix(std::int64_t n, std::vector<double> d);
  static FiniteMetric two_point(double dist);
  // Path metric on {0, step, 2*step, ...} with k points.
  static FiniteMetric real_grid(std::int64_t k, double step);
  static FiniteMetric from_points_l1(const std::vector<std::vector<double>>& pts);
  static FiniteMetric from_points_l2(const std::vector<std::vector<double>>& pts);
};

std::string metric_to_json(const FiniteMetric& m);
FiniteMetric metric_from_json(const std::string& text);
void save_metric(const FiniteMetric& m, const std::string& path);
FiniteMetric load_metric(const std::string& path);

}  // namespace gmg
