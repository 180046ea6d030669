// Voigt-notation operators for linear elasticity: the generalised Hooke
// matrix and its symmetric square root, the expansion matrices assembling
// the symmetric-gradient and normal operators, and the curl/tangent pair.
// Everything is provided for nsd = 2 and nsd = 3.
#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hdgv {

enum class PlaneAssumption { strain, stress };

struct MaterialParams {
  double youngs_modulus = 1.0;
  double poisson_ratio = 0.0;
  PlaneAssumption plane = PlaneAssumption::strain;  // 2D only
};

inline void validate(const MaterialParams& mat) {
  if (!(mat.youngs_modulus > 0.0))
    throw std::invalid_argument("MaterialParams: Young's modulus must be positive");
  if (mat.poisson_ratio < 0.0)
    throw std::invalid_argument("MaterialParams: Poisson's ratio out of range (must be >= 0)");
  if (mat.poisson_ratio >= 0.5)
    throw std::invalid_argument(
        "MaterialParams: Poisson's ratio at or beyond the incompressible limit (must be < 0.5)");
}

inline int voigt_size(int nsd) { return nsd * (nsd + 1) / 2; }

/// Number of independent rigid rotations: 1 in 2D, 3 in 3D.
inline int rotation_count(int nsd) { return nsd == 2 ? 1 : 3; }

struct VoigtConstitutive {
  int nsd = 2;
  int msd = 3;
  MaterialParams material;
  Eigen::MatrixXd D;      // msd x msd, symmetric positive definite
  Eigen::MatrixXd Dhalf;  // symmetric square root of D
};

/// The 0/1 expansion matrices E_k (msd x nsd) with
/// grad_S = sum_k E_k d/dx_k and N(n) = sum_k E_k n_k.
inline std::vector<Eigen::MatrixXd> expansion_matrices(int nsd) {
  const int msd = voigt_size(nsd);
  std::vector<Eigen::MatrixXd> E(nsd, Eigen::MatrixXd::Zero(msd, nsd));
  if (nsd == 2) {
    E[0](0, 0) = 1.0;
    E[0](2, 1) = 1.0;
    E[1](1, 1) = 1.0;
    E[1](2, 0) = 1.0;
  } else if (nsd == 3) {
    E[0](0, 0) = 1.0;
    E[0](3, 1) = 1.0;
    E[0](4, 2) = 1.0;
    E[1](3, 0) = 1.0;
    E[1](1, 1) = 1.0;
    E[1](5, 2) = 1.0;
    E[2](4, 0) = 1.0;
    E[2](5, 1) = 1.0;
    E[2](2, 2) = 1.0;
  } else {
    throw std::invalid_argument("expansion_matrices: nsd must be 2 or 3");
  }
  return E;
}

/// Generalised Hooke matrix and its square root for the requested dimension.
/// The plane assumption selects the 2D branch; it is ignored for nsd = 3.
inline VoigtConstitutive build_constitutive(const MaterialParams& mat, int nsd = 2) {
  validate(mat);
  if (nsd != 2 && nsd != 3) throw std::invalid_argument("build_constitutive: nsd must be 2 or 3");
  const double E = mat.youngs_modulus;
  const double nu = mat.poisson_ratio;

  VoigtConstitutive law;
  law.nsd = nsd;
  law.msd = voigt_size(nsd);
  law.material = mat;
  law.D = Eigen::MatrixXd::Zero(law.msd, law.msd);

  if (nsd == 2 && mat.plane == PlaneAssumption::stress) {
    const double c = E / (1.0 - nu * nu);
    law.D << c, c * nu, 0.0, c * nu, c, 0.0, 0.0, 0.0, c * (1.0 - nu) / 2.0;
  } else {
    const double c = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
    for (int i = 0; i < nsd; ++i)
      for (int j = 0; j < nsd; ++j) law.D(i, j) = c * (i == j ? 1.0 - nu : nu);
    for (int i = nsd; i < law.msd; ++i) law.D(i, i) = c * (1.0 - 2.0 * nu) / 2.0;
  }

  // Symmetric square root through the eigendecomposition; eigenvalues are
  // returned in a deterministic (ascending) order.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(law.D);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("build_constitutive: eigendecomposition failed");
  Eigen::VectorXd roots = eig.eigenvalues();
  for (int i = 0; i < roots.size(); ++i) roots[i] = std::sqrt(std::max(roots[i], 0.0));
  law.Dhalf = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
  return law;
}

inline void require_unit(const Eigen::VectorXd& n, const char* where) {
  if (std::abs(n.norm() - 1.0) > 1e-10)
    throw std::invalid_argument(std::string(where) + ": normal must have unit length");
}

/// N(n) = sum_k E_k n_k (msd x nsd); N^T maps a Voigt stress to the traction.
inline Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& n) {
  const int nsd = static_cast<int>(n.size());
  require_unit(n, "normal_matrix");
  const auto E = expansion_matrices(nsd);
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(voigt_size(nsd), nsd);
  for (int k = 0; k < nsd; ++k) N += E[k] * n[k];
  return N;
}

/// Boundary tangent operator (nsd x nrr): the 90-degree rotated normal in
/// 2D, the cross-product matrix of n in 3D.
inline Eigen::MatrixXd tangent_matrix(const Eigen::VectorXd& n) {
  const int nsd = static_cast<int>(n.size());
  require_unit(n, "tangent_matrix");
  if (nsd == 2) {
    Eigen::MatrixXd T(2, 1);
    T << n[1], -n[0];
    return T;
  }
  if (nsd == 3) {
    Eigen::MatrixXd T(3, 3);
    T << 0.0, -n[2], n[1], n[2], 0.0, -n[0], -n[1], n[0], 0.0;
    return T;
  }
  throw std::invalid_argument("tangent_matrix: nsd must be 2 or 3");
}

/// Voigt strain from a displacement gradient G(i,j) = du_i/dx_j; shear
/// entries carry the engineering factor 2.
inline Eigen::VectorXd voigt_strain(const Eigen::MatrixXd& G) {
  const int nsd = static_cast<int>(G.rows());
  Eigen::VectorXd eps(voigt_size(nsd));
  if (nsd == 2) {
    eps << G(0, 0), G(1, 1), G(0, 1) + G(1, 0);
  } else {
    eps << G(0, 0), G(1, 1), G(2, 2), G(0, 1) + G(1, 0), G(0, 2) + G(2, 0), G(1, 2) + G(2, 1);
  }
  return eps;
}

/// curl of a vector field from its gradient matrix: a scalar in 2D,
/// the usual axial vector in 3D.
inline Eigen::VectorXd curl_from_gradient(const Eigen::MatrixXd& G) {
  const int nsd = static_cast<int>(G.rows());
  if (nsd == 2) {
    Eigen::VectorXd c(1);
    c << G(1, 0) - G(0, 1);
    return c;
  }
  Eigen::VectorXd c(3);
  c << G(2, 1) - G(1, 2), G(0, 2) - G(2, 0), G(1, 0) - G(0, 1);
  return c;
}

}  // namespace hdgv
