// Legacy-VTK writers: a plain mesh dump and the element-wise discontinuous
// solution fields written on per-element replicated corner points.
#pragma once

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdgvoigt/global_solver.hpp"
#include "hdgvoigt/mesh.hpp"
#include "hdgvoigt/reference_element.hpp"

namespace hdgv {

namespace detail {

inline int vtk_cell_type(CellType t) { return t == CellType::triangle ? 5 : 9; }

/// Element-node ids sitting at the cell corners.
inline std::vector<int> corner_node_ids(const ReferenceElement& ref) {
  std::vector<int> ids;
  const int nv = cell_vertex_count(ref.type);
  for (int v = 0; v < nv; ++v) {
    int found = -1;
    for (int i = 0; i < ref.num_nodes; ++i)
      if ((ref.nodes[i] - ref.vertices()[v]).norm() < 1e-12) found = i;
    if (found < 0) throw std::logic_error("corner_node_ids: corner node missing");
    ids.push_back(found);
  }
  return ids;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace detail

inline void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
  std::unique_ptr<std::FILE, detail::FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw std::runtime_error("write_mesh_vtk: cannot open " + path);
  std::fprintf(f.get(), "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f.get(), "POINTS %zu double\n", mesh.nodes.size());
  for (const auto& x : mesh.nodes) std::fprintf(f.get(), "%.17g %.17g 0\n", x[0], x[1]);
  const int nv = cell_vertex_count(mesh.cell);
  std::fprintf(f.get(), "CELLS %d %d\n", mesh.num_elems(), mesh.num_elems() * (nv + 1));
  for (const auto& conn : mesh.elems) {
    std::fprintf(f.get(), "%d", nv);
    for (int id : conn) std::fprintf(f.get(), " %d", id);
    std::fprintf(f.get(), "\n");
  }
  std::fprintf(f.get(), "CELL_TYPES %d\n", mesh.num_elems());
  for (int e = 0; e < mesh.num_elems(); ++e)
    std::fprintf(f.get(), "%d\n", detail::vtk_cell_type(mesh.cell));
}

/// Discontinuous nodal solution on replicated corner points: displacement,
/// the Voigt stress components and the Von Mises stress.
inline void write_solution_vtk(const Mesh& mesh, const ReferenceElement& ref,
                               const SolutionFields& fields, const MaterialParams& mat,
                               const std::string& path) {
  std::unique_ptr<std::FILE, detail::FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw std::runtime_error("write_solution_vtk: cannot open " + path);
  const std::vector<int> corners = detail::corner_node_ids(ref);
  const int nv = static_cast<int>(corners.size());
  const int npts = mesh.num_elems() * nv;

  std::fprintf(f.get(), "# vtk DataFile Version 3.0\nsolution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f.get(), "POINTS %d double\n", npts);
  for (const auto& conn : mesh.elems)
    for (int v = 0; v < nv; ++v) {
      const auto& x = mesh.nodes[conn[v]];
      std::fprintf(f.get(), "%.17g %.17g 0\n", x[0], x[1]);
    }
  std::fprintf(f.get(), "CELLS %d %d\n", mesh.num_elems(), mesh.num_elems() * (nv + 1));
  for (int e = 0; e < mesh.num_elems(); ++e) {
    std::fprintf(f.get(), "%d", nv);
    for (int v = 0; v < nv; ++v) std::fprintf(f.get(), " %d", e * nv + v);
    std::fprintf(f.get(), "\n");
  }
  std::fprintf(f.get(), "CELL_TYPES %d\n", mesh.num_elems());
  for (int e = 0; e < mesh.num_elems(); ++e)
    std::fprintf(f.get(), "%d\n", detail::vtk_cell_type(mesh.cell));

  std::fprintf(f.get(), "POINT_DATA %d\n", npts);
  std::fprintf(f.get(), "VECTORS displacement double\n");
  for (int e = 0; e < mesh.num_elems(); ++e)
    for (int v = 0; v < nv; ++v) {
      const auto u = fields.displacement[e].segment<2>(corners[v] * 2);
      std::fprintf(f.get(), "%.17g %.17g 0\n", u[0], u[1]);
    }
  const char* names[3] = {"sigma_11", "sigma_22", "tau_12"};
  for (int c = 0; c < 3; ++c) {
    std::fprintf(f.get(), "SCALARS %s double 1\nLOOKUP_TABLE default\n", names[c]);
    for (int e = 0; e < mesh.num_elems(); ++e)
      for (int v = 0; v < nv; ++v)
        std::fprintf(f.get(), "%.17g\n", fields.stress[e][corners[v] * 3 + c]);
  }
  std::fprintf(f.get(), "SCALARS von_mises double 1\nLOOKUP_TABLE default\n");
  for (int e = 0; e < mesh.num_elems(); ++e)
    for (int v = 0; v < nv; ++v) {
      const Eigen::Vector3d s = fields.stress[e].segment<3>(corners[v] * 3);
      std::fprintf(f.get(), "%.17g\n", von_mises_2d(s, mat));
    }
}

}  // namespace hdgv
