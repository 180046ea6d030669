// Per-element HDG blocks for the mixed elasticity formulation with
// strongly-enforced stress symmetry, their static condensation onto the
// face trace, and the back-substitution recovering the element fields.
//
// Unknown layout is node-major with components innermost: the scaled
// strain carries msd entries per node, the displacement and the face
// trace carry nsd entries per node.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hdgvoigt/mapping.hpp"
#include "hdgvoigt/mesh.hpp"
#include "hdgvoigt/reference_element.hpp"
#include "hdgvoigt/voigt.hpp"

namespace hdgv {

struct ProblemData {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> body_force;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> dirichlet;
  // traction datum; receives the outward unit normal of the face
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, const Eigen::Vector2d&)> neumann;
};

struct ElementFaceInfo {
  FaceTag tag = FaceTag::interior;
  bool flip = false;  // local traversal opposite to the global face direction
};

struct LocalSystem {
  int num_elem_nodes = 0;
  int num_face_nodes = 0;
  int nsd = 2, msd = 3;

  // mixed_mass is minus the block mass matrix and therefore negative definite
  Eigen::MatrixXd mixed_mass;    // (msd n_en)^2
  Eigen::MatrixXd mixed_disp;    // msd n_en x nsd n_en
  Eigen::MatrixXd mixed_trace;   // msd n_en x nsd n_fn per trace face
  Eigen::MatrixXd disp_stab;     // tau boundary mass, nsd n_en square
  Eigen::MatrixXd disp_trace;    // nsd n_en x trace dofs
  Eigen::MatrixXd trace_stab;    // minus tau trace mass, trace dofs square
  Eigen::VectorXd rhs_mixed, rhs_disp, rhs_trace;

  std::vector<int> trace_faces;  // local ids of the non-Dirichlet faces, in order

  // retained factorisation (filled by condense / back-solve)
  bool factorized = false;
  Eigen::LLT<Eigen::MatrixXd> mass_chol;   // of -mixed_mass
  Eigen::LLT<Eigen::MatrixXd> schur_chol;  // of disp_stab + mixed_disp^T (-mixed_mass)^{-1} mixed_disp
  Eigen::MatrixXd mass_inv_mixed_disp;

  int mixed_dofs() const { return msd * num_elem_nodes; }
  int disp_dofs() const { return nsd * num_elem_nodes; }
  int face_dofs() const { return nsd * num_face_nodes; }
  int trace_dofs() const { return face_dofs() * static_cast<int>(trace_faces.size()); }
};

struct CondensedContribution {
  int elem = -1;
  std::vector<int> global_faces;  // one per trace face, aligned with LocalSystem::trace_faces
  Eigen::MatrixXd K;              // dense over the element trace dofs
  Eigen::VectorXd f;
};

inline LocalSystem assemble_local(const MappedElement& geo, const ReferenceElement& ref,
                                  const ReferenceFace& face_ref,
                                  const std::vector<ElementFaceInfo>& faces,
                                  const VoigtConstitutive& law, const ProblemData& data,
                                  double tau) {
  if (faces.size() != geo.faces.size())
    throw std::invalid_argument("assemble_local: face info does not match the element");

  const int nen = ref.num_nodes;
  const int nfn = face_ref.num_nodes;
  const int nsd = law.nsd, msd = law.msd;
  const auto E = expansion_matrices(nsd);

  LocalSystem sys;
  sys.num_elem_nodes = nen;
  sys.num_face_nodes = nfn;
  sys.nsd = nsd;
  sys.msd = msd;
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (faces[f].tag != FaceTag::dirichlet) sys.trace_faces.push_back(static_cast<int>(f));

  const int nL = msd * nen, nu = nsd * nen;
  const int ntr = sys.face_dofs() * static_cast<int>(sys.trace_faces.size());
  sys.mixed_mass = Eigen::MatrixXd::Zero(nL, nL);
  sys.mixed_disp = Eigen::MatrixXd::Zero(nL, nu);
  sys.mixed_trace = Eigen::MatrixXd::Zero(nL, ntr);
  sys.disp_stab = Eigen::MatrixXd::Zero(nu, nu);
  sys.disp_trace = Eigen::MatrixXd::Zero(nu, ntr);
  sys.trace_stab = Eigen::MatrixXd::Zero(ntr, ntr);
  sys.rhs_mixed = Eigen::VectorXd::Zero(nL);
  sys.rhs_disp = Eigen::VectorXd::Zero(nu);
  sys.rhs_trace = Eigen::VectorXd::Zero(ntr);

  // volume terms: block mass, strain-displacement coupling, body force
  std::vector<Eigen::MatrixXd> coupling(2);  // D^{1/2} E_k
  for (int k = 0; k < nsd; ++k) coupling[k] = law.Dhalf * E[k];

  for (int g = 0; g < ref.rule.size(); ++g) {
    const double w = geo.weight[g];
    const Eigen::VectorXd shape = ref.basis.row(g).transpose();
    const Eigen::MatrixXd& dphys = geo.grad[g];
    const Eigen::Vector2d load = data.body_force ? data.body_force(geo.xq[g])
                                                 : Eigen::Vector2d::Zero();
    for (int i = 0; i < nen; ++i) {
      for (int j = 0; j < nen; ++j) {
        const double mass = w * shape[i] * shape[j];
        for (int m = 0; m < msd; ++m) sys.mixed_mass(i * msd + m, j * msd + m) -= mass;
        for (int k = 0; k < nsd; ++k) {
          const double gij = w * dphys(i, k) * shape[j];
          sys.mixed_disp.block(i * msd, j * nsd, msd, nsd) += gij * coupling[k];
        }
      }
      for (int c = 0; c < nsd; ++c) sys.rhs_disp[i * nsd + c] += w * shape[i] * load[c];
    }
  }

  // face terms
  int trace_block = 0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const MappedElement::FaceData& fd = geo.faces[f];
    const ElementFaceInfo& info = faces[f];
    const bool dirichlet = info.tag == FaceTag::dirichlet;
    const Eigen::MatrixXd& trace_basis = info.flip ? face_ref.basis_reversed : face_ref.basis;

    for (int g = 0; g < face_ref.rule.size(); ++g) {
      const double w = fd.weight[g];
      const Eigen::VectorXd& shape = fd.elem_basis[g];
      const Eigen::MatrixXd flux = law.Dhalf * normal_matrix(fd.normal[g]);  // msd x nsd

      for (int i = 0; i < nen; ++i)
        for (int j = 0; j < nen; ++j) {
          const double mass = w * tau * shape[i] * shape[j];
          for (int c = 0; c < nsd; ++c) sys.disp_stab(i * nsd + c, j * nsd + c) += mass;
        }

      if (dirichlet) {
        const Eigen::Vector2d ud = data.dirichlet(fd.xq[g]);
        const Eigen::VectorXd flux_ud = flux * ud;  // msd
        for (int i = 0; i < nen; ++i) {
          for (int m = 0; m < msd; ++m) sys.rhs_mixed[i * msd + m] += w * shape[i] * flux_ud[m];
          for (int c = 0; c < nsd; ++c) sys.rhs_disp[i * nsd + c] += w * tau * shape[i] * ud[c];
        }
        continue;
      }

      const int base = trace_block * sys.face_dofs();
      for (int i = 0; i < nen; ++i)
        for (int j = 0; j < nfn; ++j) {
          const double pair = w * shape[i] * trace_basis(g, j);
          sys.mixed_trace.block(i * msd, base + j * nsd, msd, nsd) += pair * flux;
          for (int c = 0; c < nsd; ++c)
            sys.disp_trace(i * nsd + c, base + j * nsd + c) += tau * pair;
        }
      for (int i = 0; i < nfn; ++i)
        for (int j = 0; j < nfn; ++j) {
          const double mass = w * tau * trace_basis(g, i) * trace_basis(g, j);
          for (int c = 0; c < nsd; ++c)
            sys.trace_stab(base + i * nsd + c, base + j * nsd + c) -= mass;
        }
      if (info.tag == FaceTag::neumann) {
        const Eigen::Vector2d traction = data.neumann(fd.xq[g], fd.normal[g]);
        for (int i = 0; i < nfn; ++i)
          for (int c = 0; c < nsd; ++c)
            sys.rhs_trace[base + i * nsd + c] -= w * trace_basis(g, i) * traction[c];
      }
    }
    if (!dirichlet) ++trace_block;
  }
  return sys;
}

/// Two-stage symmetric factorisation of the local saddle block: the mixed
/// mass is eliminated first (its negative is SPD), leaving an SPD Schur
/// complement on the displacement for any tau > 0.
inline void factorize(LocalSystem& sys) {
  if (sys.factorized) return;
  sys.mass_chol.compute(-sys.mixed_mass);
  if (sys.mass_chol.info() != Eigen::Success)
    throw std::runtime_error("factorize: mixed mass block is not definite");
  sys.mass_inv_mixed_disp = sys.mass_chol.solve(sys.mixed_disp);
  const Eigen::MatrixXd schur =
      sys.disp_stab + sys.mixed_disp.transpose() * sys.mass_inv_mixed_disp;
  sys.schur_chol.compute(schur);
  if (sys.schur_chol.info() != Eigen::Success)
    throw std::runtime_error(
        "factorize: displacement Schur complement is not positive definite; "
        "check the stabilisation parameter");
  sys.factorized = true;
}

namespace detail {

// Solves the local block system for the given mixed/displacement right-hand
// sides; columns are processed together.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> local_block_solve(const LocalSystem& sys,
                                                                     const Eigen::MatrixXd& rhs_L,
                                                                     const Eigen::MatrixXd& rhs_u) {
  // [ -M  B ] [L]   [p]      L = M^{-1} (B u - p)
  // [ B^T S0] [u] = [q]  =>  (S0 + B^T M^{-1} B) u = q + B^T M^{-1} p
  const Eigen::MatrixXd mass_inv_p = sys.mass_chol.solve(rhs_L);
  const Eigen::MatrixXd u = sys.schur_chol.solve(rhs_u + sys.mixed_disp.transpose() * mass_inv_p);
  const Eigen::MatrixXd L = sys.mass_inv_mixed_disp * u - mass_inv_p;
  return {L, u};
}

}  // namespace detail

/// Condensed trace contribution of one element. Follows the sign convention
/// of the uncondensed trace equation, so K is symmetric negative definite.
inline CondensedContribution condense(LocalSystem& sys) {
  factorize(sys);
  CondensedContribution out;
  const int ntr = sys.trace_dofs();
  if (ntr == 0) {
    out.K.resize(0, 0);
    out.f.resize(0);
    return out;
  }
  const auto [L, u] = detail::local_block_solve(sys, sys.mixed_trace, sys.disp_trace);
  out.K = sys.mixed_trace.transpose() * L + sys.disp_trace.transpose() * u + sys.trace_stab;
  const auto [Lf, uf] = detail::local_block_solve(sys, sys.rhs_mixed, sys.rhs_disp);
  out.f = sys.rhs_trace - (sys.mixed_trace.transpose() * Lf + sys.disp_trace.transpose() * uf);
  return out;
}

/// Element fields for a given trace: returns (mixed, displacement).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> local_back_solve(LocalSystem& sys,
                                                                    const Eigen::VectorXd& trace) {
  if (trace.size() != sys.trace_dofs())
    throw std::invalid_argument("local_back_solve: trace size mismatch");
  factorize(sys);
  const Eigen::VectorXd rhs_L = sys.rhs_mixed + sys.mixed_trace * trace;
  const Eigen::VectorXd rhs_u = sys.rhs_disp + sys.disp_trace * trace;
  auto [L, u] = detail::local_block_solve(sys, rhs_L, rhs_u);
  return {Eigen::VectorXd(L), Eigen::VectorXd(u)};
}

}  // namespace hdgv
