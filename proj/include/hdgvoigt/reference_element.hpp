// Nodal Lagrange reference elements on the unit triangle and unit square,
// and reference faces on the unit segment. Equispaced nodes; basis given by
// inverted Vandermonde in the monomial basis, tabulated at quadrature points.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hdgvoigt/quadrature.hpp"

namespace hdgv {

enum class CellType { triangle, quadrilateral };

inline int cell_vertex_count(CellType t) { return t == CellType::triangle ? 3 : 4; }

struct ReferenceFace {
  int degree = 1;
  int num_nodes = 2;
  std::vector<double> nodes;  // equispaced in [0,1]
  Quadrature1D rule;
  Eigen::MatrixXd basis;          // rule.size() x num_nodes, at t_g
  Eigen::MatrixXd basis_reversed; // same, at 1 - t_g (opposite traversal)
  Eigen::MatrixXd coeff;          // monomial coefficients, num_nodes x num_nodes

  Eigen::VectorXd eval(double t) const {
    Eigen::VectorXd mono(num_nodes);
    double p = 1.0;
    for (int m = 0; m < num_nodes; ++m, p *= t) mono[m] = p;
    return coeff.transpose() * mono;
  }
};

struct ReferenceElement {
  CellType type = CellType::triangle;
  int degree = 1;
  int num_nodes = 3;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 2>> face_vertices;  // counterclockwise traversal
  std::vector<std::vector<int>> face_nodes;       // element nodes along each face
  Quadrature2D rule;
  Eigen::MatrixXd basis;                  // rule.size() x num_nodes
  std::array<Eigen::MatrixXd, 2> dbasis;  // reference gradients, same layout

  std::vector<std::pair<int, int>> exponents;  // monomial powers
  Eigen::MatrixXd coeff;                       // num_monomials x num_nodes

  Eigen::VectorXd eval(const Eigen::Vector2d& xi) const {
    Eigen::VectorXd mono(static_cast<int>(exponents.size()));
    for (std::size_t m = 0; m < exponents.size(); ++m)
      mono[static_cast<int>(m)] =
          std::pow(xi[0], exponents[m].first) * std::pow(xi[1], exponents[m].second);
    return coeff.transpose() * mono;
  }

  /// Reference gradients at an arbitrary point, num_nodes x 2.
  Eigen::MatrixXd eval_grad(const Eigen::Vector2d& xi) const {
    const int nm = static_cast<int>(exponents.size());
    Eigen::MatrixXd dmono(nm, 2);
    for (int m = 0; m < nm; ++m) {
      const auto [a, b] = exponents[static_cast<std::size_t>(m)];
      dmono(m, 0) = a == 0 ? 0.0 : a * std::pow(xi[0], a - 1) * std::pow(xi[1], b);
      dmono(m, 1) = b == 0 ? 0.0 : b * std::pow(xi[0], a) * std::pow(xi[1], b - 1);
    }
    return coeff.transpose() * dmono;  // num_nodes x 2
  }

  const std::array<Eigen::Vector2d, 4>& vertices() const {
    static const std::array<Eigen::Vector2d, 4> tri = {
        {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}};
    static const std::array<Eigen::Vector2d, 4> quad = {
        {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    return type == CellType::triangle ? tri : quad;
  }
};

/// Lagrange basis on [0,1] of the requested degree with tabulation at a rule
/// exact for degree <= quad_order (default 2(k+1)+1).
inline ReferenceFace reference_face(int degree, int quad_order = -1) {
  if (degree < 1 || degree > 5)
    throw std::invalid_argument("reference_face: unsupported degree");
  ReferenceFace face;
  face.degree = degree;
  face.num_nodes = degree + 1;
  for (int i = 0; i <= degree; ++i)
    face.nodes.push_back(static_cast<double>(i) / degree);

  Eigen::MatrixXd vander(face.num_nodes, face.num_nodes);
  for (int i = 0; i < face.num_nodes; ++i) {
    double p = 1.0;
    for (int m = 0; m < face.num_nodes; ++m, p *= face.nodes[i]) vander(i, m) = p;
  }
  face.coeff = vander.fullPivLu().inverse();

  face.rule = segment_rule(quad_order > 0 ? quad_order : 2 * (degree + 1) + 1);
  face.basis.resize(face.rule.size(), face.num_nodes);
  face.basis_reversed.resize(face.rule.size(), face.num_nodes);
  for (int g = 0; g < face.rule.size(); ++g) {
    face.basis.row(g) = face.eval(face.rule.points[g]).transpose();
    face.basis_reversed.row(g) = face.eval(1.0 - face.rule.points[g]).transpose();
  }
  return face;
}

namespace detail {

inline bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                       const Eigen::Vector2d& b, double& t) {
  const Eigen::Vector2d d = b - a;
  t = (p - a).dot(d) / d.squaredNorm();
  return (p - (a + t * d)).norm() < 1e-12 && t > -1e-12 && t < 1.0 + 1e-12;
}

}  // namespace detail

/// Nodal Lagrange reference element. Triangles carry the complete-degree
/// basis, quadrilaterals the tensor-product one; nodes are equispaced.
inline ReferenceElement lagrange_reference(CellType type, int degree, int quad_order = -1) {
  if (degree < 1 || degree > 5)
    throw std::invalid_argument("lagrange_reference: unsupported degree");
  ReferenceElement el;
  el.type = type;
  el.degree = degree;

  if (type == CellType::triangle) {
    for (int j = 0; j <= degree; ++j)
      for (int i = 0; i + j <= degree; ++i) {
        el.nodes.emplace_back(static_cast<double>(i) / degree, static_cast<double>(j) / degree);
        el.exponents.emplace_back(i, j);
      }
    el.face_vertices = {{0, 1}, {1, 2}, {2, 0}};
  } else {
    for (int j = 0; j <= degree; ++j)
      for (int i = 0; i <= degree; ++i) {
        el.nodes.emplace_back(static_cast<double>(i) / degree, static_cast<double>(j) / degree);
        el.exponents.emplace_back(i, j);
      }
    el.face_vertices = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  }
  el.num_nodes = static_cast<int>(el.nodes.size());

  Eigen::MatrixXd vander(el.num_nodes, el.num_nodes);
  for (int i = 0; i < el.num_nodes; ++i)
    for (int m = 0; m < el.num_nodes; ++m)
      vander(i, m) = std::pow(el.nodes[i][0], el.exponents[m].first) *
                     std::pow(el.nodes[i][1], el.exponents[m].second);
  el.coeff = vander.fullPivLu().inverse();

  // face node lists by geometric matching, ordered along the traversal
  for (const auto& fv : el.face_vertices) {
    const Eigen::Vector2d a = el.vertices()[fv[0]];
    const Eigen::Vector2d b = el.vertices()[fv[1]];
    std::vector<std::pair<double, int>> hits;
    for (int i = 0; i < el.num_nodes; ++i) {
      double t;
      if (detail::on_segment(el.nodes[i], a, b, t)) hits.emplace_back(t, i);
    }
    std::sort(hits.begin(), hits.end());
    if (static_cast<int>(hits.size()) != degree + 1)
      throw std::logic_error("lagrange_reference: face node extraction failed");
    std::vector<int> ids;
    for (const auto& h : hits) ids.push_back(h.second);
    el.face_nodes.push_back(std::move(ids));
  }

  const int order = quad_order > 0 ? quad_order : 2 * (degree + 1) + 1;
  el.rule = type == CellType::triangle ? unit_triangle_rule(order) : unit_square_rule(order);
  el.basis.resize(el.rule.size(), el.num_nodes);
  el.dbasis[0].resize(el.rule.size(), el.num_nodes);
  el.dbasis[1].resize(el.rule.size(), el.num_nodes);
  for (int g = 0; g < el.rule.size(); ++g) {
    el.basis.row(g) = el.eval(el.rule.points[g]).transpose();
    const Eigen::MatrixXd grad = el.eval_grad(el.rule.points[g]);
    el.dbasis[0].row(g) = grad.col(0).transpose();
    el.dbasis[1].row(g) = grad.col(1).transpose();
  }
  return el;
}

}  // namespace hdgv
