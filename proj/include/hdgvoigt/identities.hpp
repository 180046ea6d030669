// Bivariate polynomial fields and quadrature verification of the
// generalised Gauss and Stokes identities on the unit square.
#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "hdgvoigt/quadrature.hpp"
#include "hdgvoigt/voigt.hpp"

namespace hdgv {

/// Sparse bivariate polynomial sum c * x1^a * x2^b.
struct Poly2 {
  struct Term {
    double c;
    int a, b;
  };
  std::vector<Term> terms;

  Poly2() = default;
  Poly2(std::initializer_list<Term> t) : terms(t) {}

  static Poly2 monomial(double c, int a, int b) { return Poly2{{c, a, b}}; }

  double operator()(const Eigen::Vector2d& x) const {
    double v = 0.0;
    for (const Term& t : terms) v += t.c * std::pow(x[0], t.a) * std::pow(x[1], t.b);
    return v;
  }

  Poly2 derivative(int dir) const {
    Poly2 d;
    for (const Term& t : terms) {
      const int e = dir == 0 ? t.a : t.b;
      if (e == 0) continue;
      d.terms.push_back(dir == 0 ? Term{t.c * t.a, t.a - 1, t.b} : Term{t.c * t.b, t.a, t.b - 1});
    }
    return d;
  }

  int degree() const {
    int d = 0;
    for (const Term& t : terms) d = std::max(d, t.a + t.b);
    return d;
  }
};

using PolyVector = std::array<Poly2, 2>;   // vector field on R^2
using PolyVoigt = std::array<Poly2, 3>;    // symmetric tensor field, Voigt layout

namespace detail {

// Edges of the unit square traversed counterclockwise, with outward normals.
struct SquareEdge {
  Eigen::Vector2d start, end, normal;
};

inline const std::array<SquareEdge, 4>& unit_square_edges() {
  static const std::array<SquareEdge, 4> edges = {{
      {{0.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}},
      {{1.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}},
      {{1.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
      {{0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}},
  }};
  return edges;
}

template <typename F>
double integrate_square(const F& f, int order) {
  const Quadrature2D rule = unit_square_rule(std::max(order, 1));
  double s = 0.0;
  for (int g = 0; g < rule.size(); ++g) s += rule.weights[g] * f(rule.points[g]);
  return s;
}

template <typename F>
double integrate_boundary(const F& f, int order) {
  const Quadrature1D rule = segment_rule(std::max(order, 1));
  double s = 0.0;
  for (const SquareEdge& e : unit_square_edges()) {
    const Eigen::Vector2d dir = e.end - e.start;  // unit length edges
    for (int g = 0; g < rule.size(); ++g) {
      const Eigen::Vector2d x = e.start + rule.points[g] * dir;
      s += rule.weights[g] * f(x, e.normal, dir);
    }
  }
  return s;
}

}  // namespace detail

/// Residual of the generalised Gauss identity
///   boundary traction work = strain pairing + divergence pairing
/// for polynomial fields on the unit square, relative to the term scale.
inline double check_gauss_identity(const PolyVoigt& sigma, const PolyVector& v) {
  const int order = std::max(sigma[0].degree(), std::max(sigma[1].degree(), sigma[2].degree())) +
                    std::max(v[0].degree(), v[1].degree()) + 1;

  const double boundary = detail::integrate_boundary(
      [&](const Eigen::Vector2d& x, const Eigen::Vector2d& n, const Eigen::Vector2d&) {
        const Eigen::Vector2d traction(sigma[0](x) * n[0] + sigma[2](x) * n[1],
                                       sigma[2](x) * n[0] + sigma[1](x) * n[1]);
        return traction[0] * v[0](x) + traction[1] * v[1](x);
      },
      order);

  const Poly2 dv00 = v[0].derivative(0), dv01 = v[0].derivative(1);
  const Poly2 dv10 = v[1].derivative(0), dv11 = v[1].derivative(1);
  const double strain_pairing = detail::integrate_square(
      [&](const Eigen::Vector2d& x) {
        return sigma[0](x) * dv00(x) + sigma[1](x) * dv11(x) + sigma[2](x) * (dv01(x) + dv10(x));
      },
      order);

  const Poly2 ds00 = sigma[0].derivative(0), ds11 = sigma[1].derivative(1);
  const Poly2 ds20 = sigma[2].derivative(0), ds21 = sigma[2].derivative(1);
  const double divergence_pairing = detail::integrate_square(
      [&](const Eigen::Vector2d& x) {
        return (ds00(x) + ds21(x)) * v[0](x) + (ds20(x) + ds11(x)) * v[1](x);
      },
      order);

  const double scale = std::max(1.0, std::abs(boundary) + std::abs(strain_pairing) +
                                         std::abs(divergence_pairing));
  return std::abs(boundary - strain_pairing - divergence_pairing) / scale;
}

/// Residual of the generalised Stokes identity: the mean curl equals the
/// circulation along the counterclockwise boundary traversal.
inline double check_stokes_identity(const PolyVector& v) {
  const int order = std::max(v[0].degree(), v[1].degree()) + 1;

  const Poly2 curl_terms[2] = {v[1].derivative(0), v[0].derivative(1)};
  const double volume = detail::integrate_square(
      [&](const Eigen::Vector2d& x) { return curl_terms[0](x) - curl_terms[1](x); }, order);

  const double circulation = detail::integrate_boundary(
      [&](const Eigen::Vector2d& x, const Eigen::Vector2d&, const Eigen::Vector2d& dir) {
        return v[0](x) * dir[0] + v[1](x) * dir[1];
      },
      order);

  const double scale = std::max(1.0, std::abs(volume) + std::abs(circulation));
  return std::abs(volume - circulation) / scale;
}

}  // namespace hdgv
