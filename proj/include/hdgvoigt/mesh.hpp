// Structured 2D meshes on axis-aligned boxes (quadrilaterals and two
// triangle splitting patterns), unique-face extraction with orientation
// bookkeeping, and Dirichlet/Neumann boundary classification.
#pragma once

#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hdgvoigt/reference_element.hpp"

namespace hdgv {

enum class TriPattern { alternating, single_diagonal };

struct Box2 {
  Eigen::Vector2d lo{0.0, 0.0};
  Eigen::Vector2d hi{1.0, 1.0};
};

struct Mesh {
  CellType cell = CellType::quadrilateral;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::vector<int>> elems;  // vertex ids, counterclockwise
  double h = 0.0;

  int num_elems() const { return static_cast<int>(elems.size()); }
};

/// Uniform n x n tensor grid of quadrilaterals.
inline Mesh structured_quad_mesh(int n, const Box2& box = {}) {
  if (n < 1) throw std::invalid_argument("structured_quad_mesh: invalid refinement (n must be >= 1)");
  Mesh mesh;
  mesh.cell = CellType::quadrilateral;
  mesh.h = (box.hi[0] - box.lo[0]) / n;
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.nodes.emplace_back(box.lo[0] + (box.hi[0] - box.lo[0]) * i / n,
                              box.lo[1] + (box.hi[1] - box.lo[1]) * j / n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.elems.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return mesh;
}

/// Triangulation of the same grid: every cell split along one fixed diagonal
/// (single_diagonal) or with the diagonal alternating by cell parity.
inline Mesh structured_tri_mesh(int n, TriPattern pattern, const Box2& box = {}) {
  Mesh mesh = structured_quad_mesh(n, box);
  mesh.cell = CellType::triangle;
  std::vector<std::vector<int>> quads;
  quads.swap(mesh.elems);
  int i = 0, j = 0;
  for (const auto& q : quads) {
    const bool same = pattern == TriPattern::single_diagonal || (i + j) % 2 == 0;
    if (same) {
      // diagonal from the lower-left to the upper-right corner
      mesh.elems.push_back({q[0], q[1], q[2]});
      mesh.elems.push_back({q[0], q[2], q[3]});
    } else {
      mesh.elems.push_back({q[0], q[1], q[3]});
      mesh.elems.push_back({q[1], q[2], q[3]});
    }
    if (++i == n) {
      i = 0;
      ++j;
    }
  }
  return mesh;
}

enum class FaceTag { interior, dirichlet, neumann };

struct Face {
  int node_lo = -1, node_hi = -1;  // global endpoints; traversal lo -> hi
  int left_elem = -1, left_local = -1;
  bool left_flip = false;
  int right_elem = -1, right_local = -1;
  bool right_flip = false;
  FaceTag tag = FaceTag::interior;
  Eigen::Vector2d midpoint{0.0, 0.0};

  bool boundary() const { return right_elem < 0; }
};

/// Assigns boundary faces by their midpoint; everything not Dirichlet is
/// Neumann. Gamma_D must end up non-empty.
struct BoundarySpec {
  std::function<bool(const Eigen::Vector2d&)> is_dirichlet = [](const Eigen::Vector2d&) {
    return true;
  };
};

struct FaceTopology {
  std::vector<Face> faces;
  std::vector<std::vector<int>> elem_faces;  // per element, local face -> face id
  int num_interior = 0, num_dirichlet = 0, num_neumann = 0;
};

inline FaceTopology extract_faces(const Mesh& mesh, const BoundarySpec& spec) {
  FaceTopology topo;
  topo.elem_faces.resize(mesh.elems.size());
  std::map<std::pair<int, int>, int> index;

  for (int e = 0; e < mesh.num_elems(); ++e) {
    const auto& conn = mesh.elems[e];
    const int nv = static_cast<int>(conn.size());
    topo.elem_faces[e].resize(nv);
    for (int f = 0; f < nv; ++f) {
      const int a = conn[f];
      const int b = conn[(f + 1) % nv];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, fresh] = index.try_emplace(key, static_cast<int>(topo.faces.size()));
      if (fresh) {
        Face face;
        face.node_lo = key.first;
        face.node_hi = key.second;
        face.left_elem = e;
        face.left_local = f;
        face.left_flip = a > b;
        face.midpoint = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
        topo.faces.push_back(face);
      } else {
        Face& face = topo.faces[it->second];
        if (face.right_elem >= 0)
          throw std::runtime_error("extract_faces: non-manifold face (three incident elements)");
        face.right_elem = e;
        face.right_local = f;
        face.right_flip = a > b;
      }
      topo.elem_faces[e][f] = it->second;
    }
  }

  for (Face& face : topo.faces) {
    if (!face.boundary()) {
      face.tag = FaceTag::interior;
      ++topo.num_interior;
    } else if (spec.is_dirichlet(face.midpoint)) {
      face.tag = FaceTag::dirichlet;
      ++topo.num_dirichlet;
    } else {
      face.tag = FaceTag::neumann;
      ++topo.num_neumann;
    }
  }
  if (topo.num_dirichlet == 0)
    throw std::runtime_error("extract_faces: Dirichlet boundary must be non-empty");
  return topo;
}

inline BoundarySpec all_dirichlet() { return BoundarySpec{}; }

/// Neumann on the bottom edge x2 = lo, Dirichlet elsewhere.
inline BoundarySpec neumann_on_bottom(double bottom = 0.0) {
  BoundarySpec spec;
  spec.is_dirichlet = [bottom](const Eigen::Vector2d& x) { return x[1] > bottom + 1e-12; };
  return spec;
}

}  // namespace hdgv
