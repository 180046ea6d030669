// Trace numbering on the non-Dirichlet skeleton, assembly and solution of
// the condensed global system, and element-by-element field recovery.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hdgvoigt/local_assembly.hpp"

namespace hdgv {

struct TraceDofMap {
  std::vector<int> face_offset;  // -1 for Dirichlet faces
  int dofs_per_face = 0;
  int total_dofs = 0;
};

inline TraceDofMap build_trace_dofmap(const FaceTopology& topo, int degree, int nsd = 2) {
  TraceDofMap map;
  map.dofs_per_face = (degree + 1) * nsd;
  map.face_offset.assign(topo.faces.size(), -1);
  for (std::size_t f = 0; f < topo.faces.size(); ++f) {
    if (topo.faces[f].tag == FaceTag::dirichlet) continue;
    map.face_offset[f] = map.total_dofs;
    map.total_dofs += map.dofs_per_face;
  }
  return map;
}

struct GlobalTraceSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd rhs;
};

/// Scatter of the condensed element contributions. Contributions are merged
/// in ascending element order regardless of the order they arrive in, so the
/// result is bitwise reproducible.
inline GlobalTraceSystem assemble_global(std::vector<CondensedContribution> contribs,
                                         const TraceDofMap& map) {
  std::sort(contribs.begin(), contribs.end(),
            [](const CondensedContribution& a, const CondensedContribution& b) {
              return a.elem < b.elem;
            });

  GlobalTraceSystem sys;
  sys.K.resize(map.total_dofs, map.total_dofs);
  sys.rhs = Eigen::VectorXd::Zero(map.total_dofs);

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> dof;
  for (const CondensedContribution& c : contribs) {
    dof.clear();
    for (int face : c.global_faces) {
      const int base = map.face_offset[face];
      if (base < 0) throw std::out_of_range("assemble_global: contribution touches a Dirichlet face");
      for (int k = 0; k < map.dofs_per_face; ++k) dof.push_back(base + k);
    }
    if (static_cast<int>(dof.size()) != c.K.rows())
      throw std::invalid_argument("assemble_global: contribution size mismatch");
    for (int i = 0; i < c.K.rows(); ++i) {
      sys.rhs[dof[i]] += c.f[i];
      for (int j = 0; j < c.K.cols(); ++j) triplets.emplace_back(dof[i], dof[j], c.K(i, j));
    }
  }
  sys.K.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

/// Direct sparse solve of the trace system. The assembled matrix is
/// symmetric negative definite, which the LDLT factorisation handles
/// without pivoting trouble; the relative residual is verified.
inline Eigen::VectorXd solve_trace(const GlobalTraceSystem& sys) {
  if (sys.K.rows() == 0) return Eigen::VectorXd(0);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(sys.K);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("solve_trace: factorisation failed; the mesh may lack Dirichlet faces "
                             "or the stabilisation parameter is not positive");
  const Eigen::VectorXd trace = solver.solve(sys.rhs);
  const double scale = sys.rhs.norm();
  if (scale > 0.0) {
    const double residual = (sys.K * trace - sys.rhs).norm() / scale;
    if (residual > 1e-10)
      throw std::runtime_error("solve_trace: relative residual above 1e-10");
  }
  return trace;
}

/// Gathers the element trace values (non-Dirichlet faces, local order).
inline Eigen::VectorXd gather_element_trace(const LocalSystem& sys,
                                            const std::vector<int>& elem_faces,
                                            const TraceDofMap& map, const Eigen::VectorXd& trace) {
  Eigen::VectorXd local(sys.trace_dofs());
  int at = 0;
  for (int lf : sys.trace_faces) {
    const int base = map.face_offset[elem_faces[lf]];
    local.segment(at, map.dofs_per_face) = trace.segment(base, map.dofs_per_face);
    at += map.dofs_per_face;
  }
  return local;
}

struct SolutionFields {
  // per element, node-major nodal values
  std::vector<Eigen::VectorXd> mixed;         // msd per node
  std::vector<Eigen::VectorXd> displacement;  // nsd per node
  std::vector<Eigen::VectorXd> stress;        // Voigt stress = -Dhalf * mixed
};

inline SolutionFields recover_fields(std::vector<LocalSystem>& locals, const FaceTopology& topo,
                                     const TraceDofMap& map, const Eigen::VectorXd& trace,
                                     const VoigtConstitutive& law) {
  SolutionFields out;
  out.mixed.resize(locals.size());
  out.displacement.resize(locals.size());
  out.stress.resize(locals.size());
  for (std::size_t e = 0; e < locals.size(); ++e) {
    const Eigen::VectorXd local_trace =
        gather_element_trace(locals[e], topo.elem_faces[e], map, trace);
    auto [L, u] = local_back_solve(locals[e], local_trace);
    out.mixed[e] = L;
    out.displacement[e] = u;
    Eigen::VectorXd sigma(L.size());
    const int msd = law.msd;
    for (int i = 0; i * msd < L.size(); ++i)
      sigma.segment(i * msd, msd) = -law.Dhalf * L.segment(i * msd, msd);
    out.stress[e] = sigma;
  }
  return out;
}

/// Von Mises stress of a 2D Voigt stress state. Under plane strain the
/// out-of-plane normal stress is nu (s11 + s22); under plane stress it is 0.
inline double von_mises_2d(const Eigen::Vector3d& sigma, const MaterialParams& mat) {
  const double s33 = mat.plane == PlaneAssumption::strain
                         ? mat.poisson_ratio * (sigma[0] + sigma[1])
                         : 0.0;
  const double a = sigma[0] - sigma[1], b = sigma[1] - s33, c = s33 - sigma[0];
  return std::sqrt(0.5 * (a * a + b * b + c * c) + 3.0 * sigma[2] * sigma[2]);
}

}  // namespace hdgv
