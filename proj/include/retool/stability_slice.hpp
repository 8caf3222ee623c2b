#pragma once

// Symplectic-slice stability for linear relative equilibria, where the locked
// inertia is singular. The molecule lies along Oy; its isotropy is rotation about
// Oy, so only rotations about Ox and Oz enter as group directions. Slice
// coordinates sigma = (s1..s4) place the atoms at r = (0, r_e + s1, 0),
// s = (s2, s3, s4).
//
// The blocks are built geometrically from the full metric:
//   I_red(sigma)_ab = <e_a x q, e_b x q>,   C(sigma)_aj = <e_a x q, dq/ds_j>,
//   M_jk = <dq/ds_j, dq/ds_k>,             a, b in {x, z},
// with the mass-weighted product <u, v> = M1 u_r.v_r + M2 u_s.v_s. This gives
//   I_red = [[M1 (r_e+s1)^2 + M2 (s3^2 + s4^2), -M2 s2 s4],
//            [-M2 s2 s4, M1 (r_e+s1)^2 + M2 (s2^2 + s3^2)]],
//   C = [[0, 0, -M2 s4, M2 s3], [0, -M2 s3, M2 s2, 0]],   M = diag(M1, M2, M2, M2).

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "retool/errors.hpp"
#include "retool/mechanics.hpp"
#include "retool/spectrum.hpp"
#include "retool/triatomic.hpp"

namespace retool {

using Vec4 = Eigen::Vector4d;
using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

struct SliceBlocks {
  Eigen::Matrix2d I_red;
  Mat24 C;
  Eigen::Matrix4d M;
  Mat24 A;  ///< I_red^{-1} C
};

inline Vec6 slice_configuration(double r_e, const Vec4& sigma) {
  Vec6 q;
  q << 0.0, r_e + sigma(0), 0.0, sigma(1), sigma(2), sigma(3);
  return q;
}

/// dq/dsigma, constant.
inline Eigen::Matrix<double, 6, 4> slice_tangent() {
  Eigen::Matrix<double, 6, 4> p = Eigen::Matrix<double, 6, 4>::Zero();
  p(1, 0) = 1.0;
  p(3, 1) = 1.0;
  p(4, 2) = 1.0;
  p(5, 3) = 1.0;
  return p;
}

inline Mat6 kinetic_metric(const MoleculeSpec& spec) {
  Vec6 d;
  d << spec.M1(), spec.M1(), spec.M1(), spec.M2(), spec.M2(), spec.M2();
  return d.asDiagonal();
}

namespace detail {

/// Infinitesimal rotation about axis a acting on both Jacobi vectors.
inline Vec6 rotate_generator(int axis, const Vec6& q) {
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  return join(e.cross(Eigen::Vector3d(q.head<3>())), e.cross(Eigen::Vector3d(q.tail<3>())));
}

inline constexpr int kGroupAxes[2] = {0, 2};

}  // namespace detail

inline SliceBlocks slice_blocks(const MoleculeSpec& spec, double r_e, const Vec4& sigma) {
  const Vec6 q = slice_configuration(r_e, sigma);
  const Mat6 w = kinetic_metric(spec);
  const auto tangent = slice_tangent();
  SliceBlocks b;
  Eigen::Matrix<double, 6, 2> gens;
  for (int a = 0; a < 2; ++a) gens.col(a) = detail::rotate_generator(detail::kGroupAxes[a], q);
  b.I_red = gens.transpose() * w * gens;
  b.C = gens.transpose() * w * tangent;
  b.M = tangent.transpose() * w * tangent;
  const double det = b.I_red.determinant();
  if (!(std::abs(det) > 1e-14 * b.I_red.squaredNorm())) throw SingularInertia("reduced locked inertia is singular");
  b.A = b.I_red.inverse() * b.C;
  return b;
}

/// The blocks as they are usually printed; I_red(1,1) reproduces the repeated-index
/// form M1 (r_e+s1)^2 + 2 M2 s3^2 and C(0,2) carries +M2 s4. Kept as a fixture to
/// compare the geometric construction against.
inline SliceBlocks printed_slice_blocks(const MoleculeSpec& spec, double r_e, const Vec4& s) {
  const double m1 = spec.M1(), m2 = spec.M2();
  const double rr = (r_e + s(0)) * (r_e + s(0));
  SliceBlocks b;
  b.I_red << m1 * rr + m2 * (s(2) * s(2) + s(3) * s(3)), -m2 * s(1) * s(3), -m2 * s(1) * s(3),
      m1 * rr + m2 * (s(2) * s(2) + s(2) * s(2));
  b.C << 0.0, 0.0, m2 * s(3), m2 * s(2), 0.0, -m2 * s(2), m2 * s(1), 0.0;
  b.M = Eigen::Vector4d(m1, m2, m2, m2).asDiagonal();
  b.A = b.I_red.inverse() * b.C;
  return b;
}

/// Kinetic energy of the slice Lagrangian for body angular velocity (xi_x, xi_z).
inline double slice_kinetic_energy(const SliceBlocks& b, const Eigen::Vector2d& xi, const Vec4& sigma_dot) {
  return 0.5 * xi.dot(b.I_red * xi) + xi.dot(b.C * sigma_dot) + 0.5 * sigma_dot.dot(b.M * sigma_dot);
}

/// Legendre map (xi, sigma_dot) -> (mu, p_sigma).
inline std::pair<Eigen::Vector2d, Vec4> slice_momenta(const SliceBlocks& b, const Eigen::Vector2d& xi,
                                                      const Vec4& sigma_dot) {
  return {b.I_red * xi + b.C * sigma_dot, b.C.transpose() * xi + b.M * sigma_dot};
}

/// Schur complement M - C^T I_red^{-1} C, the mass seen by p - A^T mu.
inline Eigen::Matrix4d slice_reduced_mass(const SliceBlocks& b) { return b.M - b.C.transpose() * b.A; }

/// Inverse Legendre map (mu, p_sigma) -> (xi, sigma_dot).
inline std::pair<Eigen::Vector2d, Vec4> slice_velocities(const SliceBlocks& b, const Eigen::Vector2d& mu,
                                                         const Vec4& p) {
  const Vec4 shifted = p - b.A.transpose() * mu;
  const Vec4 sigma_dot = slice_reduced_mass(b).ldlt().solve(shifted);
  const Eigen::Vector2d xi = b.I_red.inverse() * (mu - b.C * sigma_dot);
  return {xi, sigma_dot};
}

inline double slice_potential(const MoleculeSpec& spec, double r_e, const Vec4& sigma) {
  return potential_energy(spec, slice_configuration(r_e, sigma));
}

/// H = mu^T I_red^{-1} mu / 2 + (p - A^T mu)^T S^{-1} (p - A^T mu) / 2 + V, with S the
/// Schur-complement mass. This is the exact Legendre transform of the slice Lagrangian.
inline double slice_hamiltonian(const MoleculeSpec& spec, double r_e, double mu_x, double mu_z, const Vec4& sigma,
                                const Vec4& p) {
  const auto b = slice_blocks(spec, r_e, sigma);
  const Eigen::Vector2d mu(mu_x, mu_z);
  const Vec4 shifted = p - b.A.transpose() * mu;
  return 0.5 * mu.dot(b.I_red.inverse() * mu) + 0.5 * shifted.dot(slice_reduced_mass(b).ldlt().solve(shifted)) +
         slice_potential(spec, r_e, sigma);
}

/// Same as slice_hamiltonian but with the constant M in place of the Schur
/// complement. Agrees with it at sigma = 0 to second order.
inline double slice_hamiltonian_block_form(const MoleculeSpec& spec, double r_e, double mu_x, double mu_z,
                                           const Vec4& sigma, const Vec4& p) {
  const auto b = slice_blocks(spec, r_e, sigma);
  const Eigen::Vector2d mu(mu_x, mu_z);
  const Vec4 shifted = p - b.A.transpose() * mu;
  return 0.5 * mu.dot(b.I_red.inverse() * mu) + 0.5 * shifted.dot(b.M.inverse() * shifted) +
         slice_potential(spec, r_e, sigma);
}

/// Analytic Hessian of the slice Hamiltonian in (sigma, p_sigma) at sigma = 0, p = 0,
/// with mu held fixed.
inline Mat8 slice_hessian(const MoleculeSpec& spec, double r_e, const Eigen::Vector2d& mu) {
  const Vec6 q0 = slice_configuration(r_e, Vec4::Zero());
  const auto tangent = slice_tangent();
  const Mat6 w = kinetic_metric(spec);
  const auto b0 = slice_blocks(spec, r_e, Vec4::Zero());
  const Eigen::Matrix2d inv = b0.I_red.inverse();
  const Eigen::Vector2d u = inv * mu;

  // Derivatives of I_red along sigma, projected from the full inertia.
  Eigen::Matrix2d dI[4];
  for (int j = 0; j < 4; ++j) {
    Eigen::Matrix3d full = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 6; ++k) full += detail::inertia_partial(spec, q0, k) * tangent(k, j);
    dI[j] << full(0, 0), full(0, 2), full(2, 0), full(2, 2);
  }
  Eigen::Matrix4d d = tangent.transpose() * potential_hessian(spec, q0) * tangent;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      Eigen::Matrix3d full = Eigen::Matrix3d::Zero();
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 6; ++c)
          if (tangent(a, j) != 0.0 && tangent(c, k) != 0.0)
            full += detail::inertia_second_partial(spec, a, c) * tangent(a, j) * tangent(c, k);
      Eigen::Matrix2d d2;
      d2 << full(0, 0), full(0, 2), full(2, 0), full(2, 2);
      d(j, k) += u.dot(dI[j] * inv * dI[k] * u) - 0.5 * u.dot(d2 * u);
    }
  }

  // e(:, k) = d(A^T mu)/dsigma_k; C is linear in sigma and vanishes at 0.
  Eigen::Matrix4d e;
  for (int k = 0; k < 4; ++k) {
    Mat24 dc;
    for (int a = 0; a < 2; ++a) {
      const Vec6 gen = detail::rotate_generator(detail::kGroupAxes[a], tangent.col(k));
      for (int j = 0; j < 4; ++j) dc(a, j) = gen.dot(w * tangent.col(j));
    }
    e.col(k) = (inv * dc).transpose() * mu;
  }
  const Eigen::Matrix4d minv = b0.M.inverse();
  Mat8 h;
  h.topLeftCorner<4, 4>() = d + e.transpose() * minv * e;
  h.topRightCorner<4, 4>() = -e.transpose() * minv;
  h.bottomLeftCorner<4, 4>() = -minv * e;
  h.bottomRightCorner<4, 4>() = minv;
  return h;
}

/// Canonical linearization J * Hess on (sigma, p_sigma).
inline Mat8 slice_linearization(const Mat8& hessian) {
  Mat8 j = Mat8::Zero();
  j.topRightCorner<4, 4>() = Eigen::Matrix4d::Identity();
  j.bottomLeftCorner<4, 4>() = -Eigen::Matrix4d::Identity();
  return j * hessian;
}

inline StabilityReport slice_stability(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  if (re.z != 0.0) throw DomainError("slice stability applies to linear RE (z = 0)");
  StabilityReport rep;
  rep.method = StabilityMethod::symplectic_slice;
  const Mat8 h = slice_hessian(spec, re.r, Eigen::Vector2d(0.0, re.c));
  rep.hessian_eigs = symmetric_eigenvalues(h);
  const double scale = std::max({std::abs(rep.hessian_eigs.front()), std::abs(rep.hessian_eigs.back()), 1e-300});
  const bool definite = rep.hessian_eigs.front() > 1e-10 * scale;
  const auto an = analyze_spectrum(slice_linearization(h));
  rep.linearization_spectrum = an.eigenvalues;
  rep.semisimple = an.semisimple && !an.ambiguous;
  rep.max_re_lambda = an.max_re;
  rep.eps_spec = an.eps;
  rep.verdict = definite ? Verdict::lyapunov_stable : spectral_verdict(an);
  return rep;
}

}  // namespace retool
