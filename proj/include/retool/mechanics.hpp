#pragma once

// Full three-dimensional model in Jacobi vectors q = (r, s), ordered
// (r_x, r_y, r_z, s_x, s_y, s_z), with kinetic metric diag(M1 I3, M2 I3).

#include <Eigen/Dense>

#include "retool/triatomic.hpp"

namespace retool {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Vec6 join(const Eigen::Vector3d& r, const Eigen::Vector3d& s) {
  Vec6 q;
  q << r, s;
  return q;
}

namespace detail {

/// Hessian in x of U(|x|).
inline Eigen::Matrix3d radial_hessian(const PotentialModel& u, const Eigen::Vector3d& x) {
  const double n = x.norm();
  const auto v = u.eval(n);
  const Eigen::Vector3d e = x / n;
  const Eigen::Matrix3d ee = e * e.transpose();
  return v.d2 * ee + (v.d1 / n) * (Eigen::Matrix3d::Identity() - ee);
}

}  // namespace detail

/// V(r, s) = F(|r|) + G(|s + r/2|) + G(|s - r/2|).
inline double potential_energy(const MoleculeSpec& spec, const Vec6& q) {
  const Eigen::Vector3d r = q.head<3>();
  const Eigen::Vector3d s = q.tail<3>();
  return spec.F.eval(r.norm()).value + spec.G.eval((s + 0.5 * r).norm()).value +
         spec.G.eval((s - 0.5 * r).norm()).value;
}

inline Vec6 potential_gradient(const MoleculeSpec& spec, const Vec6& q) {
  const Eigen::Vector3d r = q.head<3>();
  const Eigen::Vector3d s = q.tail<3>();
  const Eigen::Vector3d dp = s + 0.5 * r;
  const Eigen::Vector3d dm = s - 0.5 * r;
  const Eigen::Vector3d gf = spec.F.eval(r.norm()).d1 * r.normalized();
  const Eigen::Vector3d gp = spec.G.eval(dp.norm()).d1 * dp.normalized();
  const Eigen::Vector3d gm = spec.G.eval(dm.norm()).d1 * dm.normalized();
  Vec6 g;
  g << gf + 0.5 * gp - 0.5 * gm, gp + gm;
  return g;
}

/// Second partials of V by the chain rule through F and G.
inline Mat6 potential_hessian(const MoleculeSpec& spec, const Vec6& q) {
  const Eigen::Vector3d r = q.head<3>();
  const Eigen::Vector3d s = q.tail<3>();
  const Eigen::Matrix3d hf = detail::radial_hessian(spec.F, r);
  const Eigen::Matrix3d hp = detail::radial_hessian(spec.G, s + 0.5 * r);
  const Eigen::Matrix3d hm = detail::radial_hessian(spec.G, s - 0.5 * r);
  Mat6 h;
  h.topLeftCorner<3, 3>() = hf + 0.25 * (hp + hm);
  h.topRightCorner<3, 3>() = 0.5 * (hp - hm);
  h.bottomLeftCorner<3, 3>() = 0.5 * (hp - hm);
  h.bottomRightCorner<3, 3>() = hp + hm;
  return h;
}

/// I(q) = M1 (|r|^2 Id - r r^T) + M2 (|s|^2 Id - s s^T).
inline Eigen::Matrix3d locked_inertia(const MoleculeSpec& spec, const Vec6& q) {
  const Eigen::Vector3d r = q.head<3>();
  const Eigen::Vector3d s = q.tail<3>();
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  return spec.M1() * (r.squaredNorm() * id - r * r.transpose()) + spec.M2() * (s.squaredNorm() * id - s * s.transpose());
}

/// Spin-axis inertia lambda_e = I_zz at an isosceles base point.
inline double spin_axis_inertia(const MoleculeSpec& spec, const Vec6& q) { return locked_inertia(spec, q)(2, 2); }

namespace detail {

/// dI/dq_k.
inline Eigen::Matrix3d inertia_partial(const MoleculeSpec& spec, const Vec6& q, int k) {
  const bool is_r = k < 3;
  const int i = k % 3;
  const double mass = is_r ? spec.M1() : spec.M2();
  const Eigen::Vector3d x = is_r ? Eigen::Vector3d(q.head<3>()) : Eigen::Vector3d(q.tail<3>());
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
  return mass * (2.0 * x(i) * Eigen::Matrix3d::Identity() - e * x.transpose() - x * e.transpose());
}

/// d^2 I / dq_j dq_k (constant).
inline Eigen::Matrix3d inertia_second_partial(const MoleculeSpec& spec, int j, int k) {
  if ((j < 3) != (k < 3)) return Eigen::Matrix3d::Zero();
  const double mass = j < 3 ? spec.M1() : spec.M2();
  const Eigen::Vector3d ej = Eigen::Vector3d::Unit(j % 3);
  const Eigen::Vector3d ek = Eigen::Vector3d::Unit(k % 3);
  return mass * (2.0 * (j % 3 == k % 3 ? 1.0 : 0.0) * Eigen::Matrix3d::Identity() - ej * ek.transpose() -
                 ek * ej.transpose());
}

}  // namespace detail

/// V_mu(q) = V(q) + mu^T I(q)^{-1} mu / 2.
inline double amended_potential(const MoleculeSpec& spec, const Vec6& q, const Eigen::Vector3d& mu) {
  return potential_energy(spec, q) + 0.5 * mu.dot(locked_inertia(spec, q).inverse() * mu);
}

/// Analytic Hessian of the amended potential; requires I(q) invertible.
inline Mat6 amended_hessian(const MoleculeSpec& spec, const Vec6& q, const Eigen::Vector3d& mu) {
  const Eigen::Matrix3d inv = locked_inertia(spec, q).inverse();
  const Eigen::Vector3d w = inv * mu;
  Eigen::Matrix3d dI[6];
  for (int k = 0; k < 6; ++k) dI[k] = detail::inertia_partial(spec, q, k);
  Mat6 h = potential_hessian(spec, q);
  for (int j = 0; j < 6; ++j) {
    for (int k = 0; k < 6; ++k) {
      const double rot = w.dot(dI[j] * inv * dI[k] * w) - 0.5 * w.dot(detail::inertia_second_partial(spec, j, k) * w);
      h(j, k) += rot;
    }
  }
  return h;
}

}  // namespace retool
