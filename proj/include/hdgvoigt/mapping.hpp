// Isoparametric mapping of a reference element onto a mesh element:
// physical quadrature data, basis gradients, and per-face traces with
// outward normals.
#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hdgvoigt/mesh.hpp"
#include "hdgvoigt/reference_element.hpp"

namespace hdgv {

struct MappedElement {
  std::vector<Eigen::Vector2d> node_coords;  // physical positions of the element nodes

  // volume quadrature data
  std::vector<Eigen::Vector2d> xq;
  std::vector<double> weight;                // |det J| * w
  std::vector<Eigen::MatrixXd> grad;         // physical gradients, num_nodes x 2
  std::vector<Eigen::Matrix2d> jac_inv_t;    // J^{-T}, to push reference gradients
  double measure = 0.0;
  Eigen::Vector2d centroid{0.0, 0.0};

  struct FaceData {
    std::vector<Eigen::Vector2d> xq;
    std::vector<double> weight;              // surface jacobian * w
    std::vector<Eigen::Vector2d> normal;     // outward unit
    std::vector<Eigen::Vector2d> tangent;    // unit, along the ccw traversal
    std::vector<Eigen::VectorXd> elem_basis; // element basis at the face point
  };
  std::vector<FaceData> faces;
};

/// Physical positions of the degree-k nodes under the vertex map.
inline std::vector<Eigen::Vector2d> element_node_coords(const ReferenceElement& ref,
                                                        const std::vector<Eigen::Vector2d>& verts) {
  std::vector<Eigen::Vector2d> coords(ref.nodes.size());
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    const double s = ref.nodes[i][0], t = ref.nodes[i][1];
    if (ref.type == CellType::triangle) {
      coords[i] = verts[0] + s * (verts[1] - verts[0]) + t * (verts[2] - verts[0]);
    } else {
      coords[i] = (1 - s) * (1 - t) * verts[0] + s * (1 - t) * verts[1] + s * t * verts[2] +
                  (1 - s) * t * verts[3];
    }
  }
  return coords;
}

inline MappedElement map_element(const ReferenceElement& ref, const ReferenceFace& face_ref,
                                 const std::vector<Eigen::Vector2d>& verts,
                                 bool with_faces = true) {
  MappedElement mapped;
  mapped.node_coords = element_node_coords(ref, verts);

  Eigen::MatrixXd coords(ref.num_nodes, 2);
  for (int i = 0; i < ref.num_nodes; ++i) coords.row(i) = mapped.node_coords[i].transpose();

  const int nq = ref.rule.size();
  mapped.xq.resize(nq);
  mapped.weight.resize(nq);
  mapped.grad.resize(nq);
  mapped.jac_inv_t.resize(nq);
  Eigen::Vector2d first_moment = Eigen::Vector2d::Zero();
  for (int g = 0; g < nq; ++g) {
    const Eigen::VectorXd shape = ref.basis.row(g).transpose();
    Eigen::MatrixXd dref(ref.num_nodes, 2);
    dref.col(0) = ref.dbasis[0].row(g).transpose();
    dref.col(1) = ref.dbasis[1].row(g).transpose();

    const Eigen::Matrix2d jac = coords.transpose() * dref;
    const double det = jac.determinant();
    if (det <= 0.0) throw std::runtime_error("map_element: inverted element (det J <= 0)");

    mapped.xq[g] = coords.transpose() * shape;
    mapped.weight[g] = det * ref.rule.weights[g];
    mapped.jac_inv_t[g] = jac.inverse().transpose();
    mapped.grad[g] = dref * jac.inverse();
    mapped.measure += mapped.weight[g];
    first_moment += mapped.weight[g] * mapped.xq[g];
  }
  mapped.centroid = first_moment / mapped.measure;

  if (!with_faces) return mapped;

  mapped.faces.resize(ref.face_vertices.size());
  for (std::size_t f = 0; f < ref.face_vertices.size(); ++f) {
    const Eigen::Vector2d xi_a = ref.vertices()[ref.face_vertices[f][0]];
    const Eigen::Vector2d xi_b = ref.vertices()[ref.face_vertices[f][1]];
    MappedElement::FaceData& fd = mapped.faces[f];
    const int nfq = face_ref.rule.size();
    fd.xq.resize(nfq);
    fd.weight.resize(nfq);
    fd.normal.resize(nfq);
    fd.tangent.resize(nfq);
    fd.elem_basis.resize(nfq);
    for (int g = 0; g < nfq; ++g) {
      const double t = face_ref.rule.points[g];
      const Eigen::Vector2d xi = (1.0 - t) * xi_a + t * xi_b;
      const Eigen::VectorXd shape = ref.eval(xi);
      const Eigen::MatrixXd dref = ref.eval_grad(xi);
      const Eigen::Matrix2d jac = coords.transpose() * dref;
      const Eigen::Vector2d velocity = jac * (xi_b - xi_a);
      const double speed = velocity.norm();
      if (!(speed > 0.0)) throw std::runtime_error("map_element: degenerate face");
      fd.xq[g] = coords.transpose() * shape;
      fd.weight[g] = speed * face_ref.rule.weights[g];
      fd.tangent[g] = velocity / speed;
      fd.normal[g] = Eigen::Vector2d(fd.tangent[g][1], -fd.tangent[g][0]);
      fd.elem_basis[g] = shape;
    }
  }
  return mapped;
}

/// Vertex coordinates of one mesh element.
inline std::vector<Eigen::Vector2d> element_vertices(const Mesh& mesh, int e) {
  std::vector<Eigen::Vector2d> verts;
  for (int id : mesh.elems[e]) verts.push_back(mesh.nodes[id]);
  return verts;
}

}  // namespace hdgv
