// Analytic benchmark cases: displacement, its derivatives, the derived
// Voigt stress and body force, and boundary data. Also the broken L2 error
// of element-wise nodal fields against a callable.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "hdgvoigt/local_assembly.hpp"
#include "hdgvoigt/mapping.hpp"
#include "hdgvoigt/mesh.hpp"
#include "hdgvoigt/voigt.hpp"

namespace hdgv {

struct ManufacturedCase {
  std::string name;
  MaterialParams material;  // case defaults; nu and the plane assumption may be overridden
  BoundarySpec boundary;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> displacement;
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> gradient;  // (i,j) = du_i/dx_j
  // second derivatives per component: hessian(x)[i](j,k) = d2 u_i / dx_j dx_k
  std::function<std::array<Eigen::Matrix2d, 2>(const Eigen::Vector2d&)> hessian;
};

/// Exact Voigt stress D * strain(u).
inline Eigen::Vector3d exact_stress(const ManufacturedCase& mc, const VoigtConstitutive& law,
                                    const Eigen::Vector2d& x) {
  return law.D * voigt_strain(mc.gradient(x));
}

/// Body force -div(sigma) written with the Voigt operators.
inline Eigen::Vector2d exact_body_force(const ManufacturedCase& mc, const VoigtConstitutive& law,
                                        const Eigen::Vector2d& x) {
  const auto H = mc.hessian(x);
  const auto E = expansion_matrices(2);
  Eigen::Vector2d f = Eigen::Vector2d::Zero();
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector3d deps;  // d(strain)/dx_k
    deps << H[0](0, k), H[1](1, k), H[0](1, k) + H[1](0, k);
    f -= E[k].transpose() * (law.D * deps);
  }
  return f;
}

inline ProblemData make_problem(const ManufacturedCase& mc, const VoigtConstitutive& law) {
  ProblemData data;
  data.body_force = [mc, law](const Eigen::Vector2d& x) { return exact_body_force(mc, law, x); };
  data.dirichlet = mc.displacement;
  data.neumann = [mc, law](const Eigen::Vector2d& x, const Eigen::Vector2d& n) {
    return Eigen::Vector2d(normal_matrix(n).transpose() * exact_stress(mc, law, x));
  };
  return data;
}

/// Exact scaled strain -D^{1/2} grad_S(u), the quantity the mixed variable
/// approximates.
inline Eigen::Vector3d exact_mixed(const ManufacturedCase& mc, const VoigtConstitutive& law,
                                   const Eigen::Vector2d& x) {
  return -law.Dhalf * voigt_strain(mc.gradient(x));
}

/// Smooth benchmark on the unit square with a traction boundary at x2 = 0:
/// u = (x2 sin(pi x1), x1^3 + cos(pi x2)) / 100, E = 1, nu = 0.25.
inline ManufacturedCase case_sinusoidal_2d() {
  ManufacturedCase mc;
  mc.name = "sinusoidal2d";
  mc.material = {1.0, 0.25, PlaneAssumption::strain};
  mc.boundary = neumann_on_bottom(0.0);
  const double s = 0.01;
  const double pi = M_PI;
  mc.displacement = [=](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(s * x[1] * std::sin(pi * x[0]),
                           s * (x[0] * x[0] * x[0] + std::cos(pi * x[1])));
  };
  mc.gradient = [=](const Eigen::Vector2d& x) {
    Eigen::Matrix2d g;
    g(0, 0) = s * pi * x[1] * std::cos(pi * x[0]);
    g(0, 1) = s * std::sin(pi * x[0]);
    g(1, 0) = s * 3.0 * x[0] * x[0];
    g(1, 1) = -s * pi * std::sin(pi * x[1]);
    return g;
  };
  mc.hessian = [=](const Eigen::Vector2d& x) {
    std::array<Eigen::Matrix2d, 2> H;
    H[0](0, 0) = -s * pi * pi * x[1] * std::sin(pi * x[0]);
    H[0](0, 1) = s * pi * std::cos(pi * x[0]);
    H[0](1, 0) = H[0](0, 1);
    H[0](1, 1) = 0.0;
    H[1](0, 0) = s * 6.0 * x[0];
    H[1](0, 1) = 0.0;
    H[1](1, 0) = 0.0;
    H[1](1, 1) = -s * pi * pi * std::cos(pi * x[1]);
    return H;
  };
  return mc;
}

/// Nearly incompressible benchmark on the unit square, E = 3, all-Dirichlet
/// boundary; the displacement vanishes on the whole boundary.
inline ManufacturedCase case_incompressible_2d(double nu) {
  if (nu >= 0.5)
    throw std::invalid_argument("case_incompressible_2d: nu must be below the incompressible limit");
  ManufacturedCase mc;
  mc.name = "incompressible2d";
  mc.material = {3.0, nu, PlaneAssumption::strain};
  mc.boundary = all_dirichlet();

  // u = (-p(x1) q(x2), p(x1) q(x2)) with p = t^2 (t-1)^2, q = t (t-1)(2t-1)
  const auto p = [](double t) { return t * t * (t - 1.0) * (t - 1.0); };
  const auto dp = [](double t) { return 2.0 * t * (t - 1.0) * (2.0 * t - 1.0); };
  const auto ddp = [](double t) { return 12.0 * t * t - 12.0 * t + 2.0; };
  const auto q = [](double t) { return t * (t - 1.0) * (2.0 * t - 1.0); };
  const auto dq = [](double t) { return 6.0 * t * t - 6.0 * t + 1.0; };
  const auto ddq = [](double t) { return 12.0 * t - 6.0; };

  mc.displacement = [=](const Eigen::Vector2d& x) {
    const double v = p(x[0]) * q(x[1]);
    return Eigen::Vector2d(-v, v);
  };
  mc.gradient = [=](const Eigen::Vector2d& x) {
    Eigen::Matrix2d g;
    g(0, 0) = -dp(x[0]) * q(x[1]);
    g(0, 1) = -p(x[0]) * dq(x[1]);
    g(1, 0) = dp(x[0]) * q(x[1]);
    g(1, 1) = p(x[0]) * dq(x[1]);
    return g;
  };
  mc.hessian = [=](const Eigen::Vector2d& x) {
    std::array<Eigen::Matrix2d, 2> H;
    H[0](0, 0) = -ddp(x[0]) * q(x[1]);
    H[0](0, 1) = -dp(x[0]) * dq(x[1]);
    H[0](1, 0) = H[0](0, 1);
    H[0](1, 1) = -p(x[0]) * ddq(x[1]);
    H[1] = -H[0];
    return H;
  };
  return mc;
}

/// Broken L2 error of a nodal field (comps entries per node) against a
/// callable; components are summed. The evaluation element carries its own
/// (elevated) quadrature.
inline double l2_error(const Mesh& mesh, const ReferenceElement& eval_ref,
                       const std::vector<Eigen::VectorXd>& nodal, int comps,
                       const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& exact) {
  ReferenceFace dummy_face = reference_face(1, 1);
  double total = 0.0;
  for (int e = 0; e < mesh.num_elems(); ++e) {
    const MappedElement geo =
        map_element(eval_ref, dummy_face, element_vertices(mesh, e), /*with_faces=*/false);
    for (int g = 0; g < eval_ref.rule.size(); ++g) {
      Eigen::VectorXd value = Eigen::VectorXd::Zero(comps);
      for (int j = 0; j < eval_ref.num_nodes; ++j)
        value += eval_ref.basis(g, j) * nodal[e].segment(j * comps, comps);
      total += geo.weight[g] * (value - exact(geo.xq[g])).squaredNorm();
    }
  }
  return std::sqrt(total);
}

}  // namespace hdgv
