// Gauss-Legendre quadrature on the unit segment, the unit square and the
// unit triangle. Rules are requested by polynomial exactness order.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hdgv {

struct Quadrature1D {
  std::vector<double> points;  // in [0,1]
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

struct Quadrature2D {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// m-point Gauss-Legendre rule on [0,1]; exact for degree <= 2m-1.
inline Quadrature1D gauss_legendre_unit(int m) {
  if (m < 1) throw std::invalid_argument("gauss_legendre_unit: m must be >= 1");
  Quadrature1D rule;
  rule.points.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // root of P_m near the Chebyshev estimate, polished by Newton
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double p1 = 0.0, dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double pm1 = 1.0;
      p1 = x;
      for (int j = 1; j < m; ++j) {
        const double p2 = ((2 * j + 1) * x * p1 - j * pm1) / (j + 1);
        pm1 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - pm1) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one clean evaluation at the converged abscissa for the weight
        pm1 = 1.0;
        p1 = x;
        for (int j = 1; j < m; ++j) {
          const double p2 = ((2 * j + 1) * x * p1 - j * pm1) / (j + 1);
          pm1 = p1;
          p1 = p2;
        }
        dp = m * (x * p1 - pm1) / (x * x - 1.0);
        break;
      }
    }
    rule.points[i] = 0.5 * (1.0 + x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// Rule on the segment [0,1] exact for polynomials of degree <= order.
inline Quadrature1D segment_rule(int order) {
  if (order < 1) throw std::invalid_argument("segment_rule: unsupported order");
  return gauss_legendre_unit(order / 2 + 1);
}

/// Tensor rule on [0,1]^2 exact for total (and per-variable) degree <= order.
inline Quadrature2D unit_square_rule(int order) {
  if (order < 1) throw std::invalid_argument("unit_square_rule: unsupported order");
  const Quadrature1D line = gauss_legendre_unit(order / 2 + 1);
  Quadrature2D rule;
  for (int j = 0; j < line.size(); ++j)
    for (int i = 0; i < line.size(); ++i) {
      rule.points.emplace_back(line.points[i], line.points[j]);
      rule.weights.push_back(line.weights[i] * line.weights[j]);
    }
  return rule;
}

/// Collapsed tensor rule on the triangle {x,y >= 0, x+y <= 1}, exact for
/// total degree <= order. The collapse jacobian (1-v) raises the degree in
/// the second direction by one, hence the extra point there.
inline Quadrature2D unit_triangle_rule(int order) {
  if (order < 1) throw std::invalid_argument("unit_triangle_rule: unsupported order");
  const Quadrature1D gu = gauss_legendre_unit(order / 2 + 1);
  const Quadrature1D gv = gauss_legendre_unit((order + 1) / 2 + 1);
  Quadrature2D rule;
  for (int j = 0; j < gv.size(); ++j)
    for (int i = 0; i < gu.size(); ++i) {
      const double u = gu.points[i], v = gv.points[j];
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - v));
    }
  return rule;
}

}  // namespace hdgv
