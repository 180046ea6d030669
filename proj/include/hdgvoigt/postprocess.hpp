// Element-by-element displacement post-process in the degree k+1 space.
// The singular local Neumann problem is closed by the mean-value constraint
// plus one rotational constraint, selectable among the moment about the
// barycentre, the mean curl of the element solution, and the boundary
// circulation of the face trace.
#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hdgvoigt/global_solver.hpp"
#include "hdgvoigt/local_assembly.hpp"
#include "hdgvoigt/mapping.hpp"

namespace hdgv {

enum class RotationalConstraint { barycentre_moment, mean_curl_of_uh, boundary_trace_curl };

/// Reference data shared by all star solves of one configuration: the
/// degree k+1 element and the degree-k bases tabulated at its quadrature.
struct StarContext {
  ReferenceElement star;      // degree k+1, quadrature exact to 2(k+2)+1
  ReferenceFace star_face;    // face rule of the same order
  ReferenceElement base;      // degree k
  ReferenceFace base_face;    // degree k

  Eigen::MatrixXd base_at_star;                  // base values at star volume points
  std::array<Eigen::MatrixXd, 2> dbase_at_star;  // base reference gradients there
  Eigen::MatrixXd face_base_fwd, face_base_rev;  // base face values at star face points
};

inline StarContext make_star_context(CellType type, int degree) {
  StarContext ctx;
  const int order = 2 * (degree + 2) + 1;
  ctx.star = lagrange_reference(type, degree + 1, order);
  ctx.star_face = reference_face(degree + 1, order);
  ctx.base = lagrange_reference(type, degree);
  ctx.base_face = reference_face(degree);

  const int nq = ctx.star.rule.size();
  ctx.base_at_star.resize(nq, ctx.base.num_nodes);
  ctx.dbase_at_star[0].resize(nq, ctx.base.num_nodes);
  ctx.dbase_at_star[1].resize(nq, ctx.base.num_nodes);
  for (int g = 0; g < nq; ++g) {
    ctx.base_at_star.row(g) = ctx.base.eval(ctx.star.rule.points[g]).transpose();
    const Eigen::MatrixXd grad = ctx.base.eval_grad(ctx.star.rule.points[g]);
    ctx.dbase_at_star[0].row(g) = grad.col(0).transpose();
    ctx.dbase_at_star[1].row(g) = grad.col(1).transpose();
  }
  const int nfq = ctx.star_face.rule.size();
  ctx.face_base_fwd.resize(nfq, ctx.base_face.num_nodes);
  ctx.face_base_rev.resize(nfq, ctx.base_face.num_nodes);
  for (int g = 0; g < nfq; ++g) {
    const double t = ctx.star_face.rule.points[g];
    ctx.face_base_fwd.row(g) = ctx.base_face.eval(t).transpose();
    ctx.face_base_rev.row(g) = ctx.base_face.eval(1.0 - t).transpose();
  }
  return ctx;
}

struct StarLocalProblem {
  Eigen::MatrixXd stiffness;   // over the star displacement dofs
  Eigen::VectorXd load;
  Eigen::MatrixXd constraints; // 3 rows in 2D: two means plus one rotation
  Eigen::Vector3d constraint_rhs;
  Eigen::Vector2d barycentre;
};

/// Builds the constrained local problem for one element. For the boundary
/// circulation option the trace values are consumed per non-Dirichlet face
/// (same layout as the local solver) and the Dirichlet datum substitutes
/// the trace on Dirichlet faces.
inline StarLocalProblem assemble_star(const StarContext& ctx, const MappedElement& star_geo,
                                      const std::vector<ElementFaceInfo>& faces,
                                      const VoigtConstitutive& law,
                                      const Eigen::VectorXd& mixed_e,
                                      const Eigen::VectorXd& disp_e,
                                      const Eigen::VectorXd& trace_e,
                                      const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>&
                                          dirichlet,
                                      RotationalConstraint which) {
  const int nstar = ctx.star.num_nodes;
  const int nbase = ctx.base.num_nodes;
  const int nsd = law.nsd, msd = law.msd;
  const auto E = expansion_matrices(nsd);

  StarLocalProblem prob;
  prob.barycentre = star_geo.centroid;
  const int ndof = nsd * nstar;
  prob.stiffness = Eigen::MatrixXd::Zero(ndof, ndof);
  prob.load = Eigen::VectorXd::Zero(ndof);
  prob.constraints = Eigen::MatrixXd::Zero(3, ndof);
  prob.constraint_rhs.setZero();

  Eigen::MatrixXd B_star(msd, nsd);  // strain-displacement block of one node
  std::vector<Eigen::MatrixXd> B(nstar, Eigen::MatrixXd::Zero(msd, nsd));

  for (int g = 0; g < ctx.star.rule.size(); ++g) {
    const double w = star_geo.weight[g];
    const Eigen::Vector2d x = star_geo.xq[g];
    const Eigen::MatrixXd& dstar = star_geo.grad[g];  // nstar x 2, physical

    // degree-k fields at this point
    const Eigen::Matrix2d jac_inv = star_geo.jac_inv_t[g].transpose();
    Eigen::MatrixXd dbase(nbase, 2);
    dbase.col(0) = ctx.dbase_at_star[0].row(g).transpose();
    dbase.col(1) = ctx.dbase_at_star[1].row(g).transpose();
    const Eigen::MatrixXd dbase_phys = dbase * jac_inv;

    Eigen::Vector2d uh = Eigen::Vector2d::Zero();
    Eigen::Matrix2d grad_uh = Eigen::Matrix2d::Zero();
    Eigen::VectorXd Lq = Eigen::VectorXd::Zero(msd);
    for (int j = 0; j < nbase; ++j) {
      const double phi = ctx.base_at_star(g, j);
      uh += phi * disp_e.segment<2>(j * nsd);
      grad_uh.col(0) += dbase_phys(j, 0) * disp_e.segment<2>(j * nsd);
      grad_uh.col(1) += dbase_phys(j, 1) * disp_e.segment<2>(j * nsd);
      Lq += phi * mixed_e.segment(j * msd, msd);
    }

    for (int j = 0; j < nstar; ++j) {
      B[j].setZero();
      for (int k = 0; k < nsd; ++k) B[j] += dstar(j, k) * E[k];
    }
    for (int i = 0; i < nstar; ++i) {
      const Eigen::MatrixXd BiD = B[i].transpose() * law.Dhalf;  // nsd x msd
      for (int j = 0; j < nstar; ++j)
        prob.stiffness.block(i * nsd, j * nsd, nsd, nsd) += w * BiD * B[j];
      prob.load.segment(i * nsd, nsd) -= w * B[i].transpose() * Lq;
    }

    // mean-value rows and the volume rotation rows
    for (int j = 0; j < nstar; ++j) {
      const double phi = ctx.star.basis(g, j);
      for (int c = 0; c < nsd; ++c) prob.constraints(c, j * nsd + c) += w * phi;
      if (which == RotationalConstraint::barycentre_moment) {
        prob.constraints(2, j * nsd + 0) -= w * phi * (x[1] - prob.barycentre[1]);
        prob.constraints(2, j * nsd + 1) += w * phi * (x[0] - prob.barycentre[0]);
      } else {
        prob.constraints(2, j * nsd + 0) -= w * dstar(j, 1);
        prob.constraints(2, j * nsd + 1) += w * dstar(j, 0);
      }
    }
    for (int c = 0; c < nsd; ++c) prob.constraint_rhs[c] += w * uh[c];
    if (which == RotationalConstraint::barycentre_moment) {
      prob.constraint_rhs[2] += w * ((x[0] - prob.barycentre[0]) * uh[1] -
                                     (x[1] - prob.barycentre[1]) * uh[0]);
    } else if (which == RotationalConstraint::mean_curl_of_uh) {
      prob.constraint_rhs[2] += w * (grad_uh(1, 0) - grad_uh(0, 1));
    }
  }

  if (which == RotationalConstraint::boundary_trace_curl) {
    // circulation of the trace (or of the Dirichlet datum) along the
    // counterclockwise element boundary
    int trace_block = 0;
    const int fdofs = nsd * ctx.base_face.num_nodes;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const MappedElement::FaceData& fd = star_geo.faces[f];
      const bool is_dirichlet = faces[f].tag == FaceTag::dirichlet;
      if (!is_dirichlet && trace_e.size() == 0)
        throw std::invalid_argument("assemble_star: trace values required for the "
                                    "boundary-circulation constraint");
      const Eigen::MatrixXd& tb = faces[f].flip ? ctx.face_base_rev : ctx.face_base_fwd;
      for (int g = 0; g < ctx.star_face.rule.size(); ++g) {
        Eigen::Vector2d value;
        if (is_dirichlet) {
          value = dirichlet(fd.xq[g]);
        } else {
          value.setZero();
          for (int j = 0; j < ctx.base_face.num_nodes; ++j)
            value += tb(g, j) * trace_e.segment<2>(trace_block * fdofs + j * nsd);
        }
        prob.constraint_rhs[2] += fd.weight[g] * value.dot(fd.tangent[g]);
      }
      if (!is_dirichlet) ++trace_block;
    }
  }
  return prob;
}

/// Solves the bordered saddle system; the multipliers are discarded.
inline Eigen::VectorXd solve_star(const StarLocalProblem& prob) {
  const int n = static_cast<int>(prob.stiffness.rows());
  const int m = static_cast<int>(prob.constraints.rows());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + m, n + m);
  A.topLeftCorner(n, n) = prob.stiffness;
  A.topRightCorner(n, m) = prob.constraints.transpose();
  A.bottomLeftCorner(m, n) = prob.constraints;
  Eigen::VectorXd b(n + m);
  b.head(n) = prob.load;
  b.tail(m) = prob.constraint_rhs;

  const Eigen::VectorXd sol = A.partialPivLu().solve(b);
  const double scale = std::max(1.0, b.norm());
  if ((A * sol - b).norm() > 1e-8 * scale)
    throw std::runtime_error("solve_star: degenerate element (augmented system is singular)");
  return sol.head(n);
}

struct PostprocessResult {
  std::vector<Eigen::VectorXd> ustar;  // per element, node-major on the star element
  double max_mean_residual = 0.0;      // relative constraint residuals over all elements
  double max_rotation_residual = 0.0;
};

/// Runs the post-process over the whole mesh.
inline PostprocessResult postprocess_field(const Mesh& mesh, const FaceTopology& topo,
                                           const StarContext& ctx, const VoigtConstitutive& law,
                                           const SolutionFields& fields,
                                           const TraceDofMap& map, const Eigen::VectorXd& trace,
                                           const ProblemData& data, RotationalConstraint which) {
  PostprocessResult out;
  out.ustar.resize(mesh.elems.size());
  for (int e = 0; e < mesh.num_elems(); ++e) {
    const MappedElement star_geo = map_element(ctx.star, ctx.star_face, element_vertices(mesh, e));
    std::vector<ElementFaceInfo> faces;
    Eigen::VectorXd trace_e;
    {
      std::vector<int> trace_faces;
      for (std::size_t lf = 0; lf < topo.elem_faces[e].size(); ++lf) {
        const Face& face = topo.faces[topo.elem_faces[e][lf]];
        const bool left = face.left_elem == e && face.left_local == static_cast<int>(lf);
        faces.push_back({face.tag, left ? face.left_flip : face.right_flip});
        if (face.tag != FaceTag::dirichlet) trace_faces.push_back(topo.elem_faces[e][lf]);
      }
      trace_e.resize(static_cast<int>(trace_faces.size()) * map.dofs_per_face);
      int at = 0;
      for (int fid : trace_faces) {
        trace_e.segment(at, map.dofs_per_face) =
            trace.segment(map.face_offset[fid], map.dofs_per_face);
        at += map.dofs_per_face;
      }
    }
    const StarLocalProblem prob =
        assemble_star(ctx, star_geo, faces, law, fields.mixed[e], fields.displacement[e], trace_e,
                      data.dirichlet, which);
    const Eigen::VectorXd ustar = solve_star(prob);
    out.ustar[e] = ustar;

    for (int r = 0; r < 3; ++r) {
      const double lhs = prob.constraints.row(r).dot(ustar);
      const double scale = std::max(prob.constraints.row(r).cwiseAbs().dot(ustar.cwiseAbs()) +
                                        std::abs(prob.constraint_rhs[r]),
                                    1e-30);
      const double rel = std::abs(lhs - prob.constraint_rhs[r]) / scale;
      if (r < 2)
        out.max_mean_residual = std::max(out.max_mean_residual, rel);
      else
        out.max_rotation_residual = std::max(out.max_rotation_residual, rel);
    }
  }
  return out;
}

}  // namespace hdgv
