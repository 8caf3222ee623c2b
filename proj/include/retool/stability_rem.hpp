#pragma once

// Reduced Energy-Momentum test for isosceles relative equilibria. The base point is
// r_e = (0, r, 0), s_e = (0, 0, z), spinning about Oz with momentum mu_e = c.
//
// Internal variations V_INT = {dr_x = ds_x = 0, M1 r_e dr_z + M2 s_e ds_y = 0} are
// parametrised by (dr_y, ds_y, ds_z), so dr_z = alpha ds_y with alpha = -M2 s_e/(M1 r_e).
//
// Two internal blocks are assembled: the closed-form matrix in terms of second
// partials of V plus xi_e^2 diag(M1, 4 M1 - M2, 0), which drives the verdict, and the
// restriction of the analytic amended-potential Hessian, reported alongside. Their
// largest relative gap is carried in StabilityReport::formula_discrepancy.

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "retool/errors.hpp"
#include "retool/mechanics.hpp"
#include "retool/spectrum.hpp"
#include "retool/triatomic.hpp"

namespace retool {

namespace detail {

inline void require_isosceles(const RelativeEquilibrium& re) {
  if (re.z == 0.0) throw LinearREError();
}

struct IsoscelesMoments {
  double planar;  ///< M1 r_e^2, spin-axis inertia
  double axial;   ///< M2 s_e^2
};

inline IsoscelesMoments moments(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  return {spec.M1() * re.r * re.r, spec.M2() * re.z * re.z};
}

}  // namespace detail

inline Vec6 base_point(const RelativeEquilibrium& re) { return join(re.r_vector(), re.s_vector()); }

/// Arnold form on rotations about Ox and Oy (rows in that order).
inline Eigen::Matrix2d arnold_form(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  detail::require_isosceles(re);
  const auto [planar, axial] = detail::moments(spec, re);
  const double mu2 = re.c * re.c;
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  a(0, 0) = mu2 * (1.0 / axial - 1.0 / planar);
  a(1, 1) = mu2 * (1.0 / (planar + axial) - 1.0 / planar);
  return a;
}

/// Columns map (dr_y, ds_y, ds_z) into the six Jacobi components.
inline Eigen::Matrix<double, 6, 3> vint_basis(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  const double alpha = -spec.M2() * re.z / (spec.M1() * re.r);
  Eigen::Matrix<double, 6, 3> p = Eigen::Matrix<double, 6, 3>::Zero();
  p(1, 0) = 1.0;
  p(2, 1) = alpha;
  p(4, 1) = 1.0;
  p(5, 2) = 1.0;
  return p;
}

inline Eigen::Matrix3d vint_hessian(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  detail::require_isosceles(re);
  const Mat6 h = potential_hessian(spec, base_point(re));
  const double alpha = -spec.M2() * re.z / (spec.M1() * re.r);
  constexpr int ry = 1, rz = 2, sy = 4, sz = 5;
  Eigen::Matrix3d m;
  m(0, 0) = h(ry, ry);
  m(0, 1) = alpha * h(ry, rz) + h(ry, sy);
  m(0, 2) = h(ry, sz);
  m(1, 1) = 2.0 * alpha * h(rz, sy) + h(sy, sy);
  m(1, 2) = alpha * h(rz, sz) + h(sy, sz);
  m(2, 2) = h(sz, sz);
  m(1, 0) = m(0, 1);
  m(2, 0) = m(0, 2);
  m(2, 1) = m(1, 2);
  const double xi2 = re.xi_e * re.xi_e;
  m(0, 0) += xi2 * spec.M1();
  m(1, 1) += xi2 * (4.0 * spec.M1() - spec.M2());
  return m;
}

/// Restriction of the analytic amended-potential Hessian to V_INT.
inline Eigen::Matrix3d vint_hessian_amended(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  detail::require_isosceles(re);
  const auto p = vint_basis(spec, re);
  const Mat6 h = amended_hessian(spec, base_point(re), Eigen::Vector3d(0.0, 0.0, re.c));
  return p.transpose() * h * p;
}

enum class VintSource { printed, amended };

inline Eigen::Matrix2d rigid_block(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  detail::require_isosceles(re);
  const auto [planar, axial] = detail::moments(spec, re);
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  a(0, 1) = -1.0 / (planar + axial) + 1.0 / planar;
  a(1, 0) = 1.0 / axial - 1.0 / planar;
  return a;
}

/// lambda^2 of the rigid block in closed form.
inline double rigid_block_lambda_squared(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  const auto [planar, axial] = detail::moments(spec, re);
  return axial * (planar - axial) / (axial * (planar + axial) * planar * planar);
}

inline Eigen::Matrix3d b_matrix(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  const auto [planar, axial] = detail::moments(spec, re);
  return Eigen::Vector3d(1.0, 1.0 - axial / planar, 1.0).asDiagonal();
}

inline Eigen::Matrix3d kinetic_block(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  const double m1 = spec.M1(), m2 = spec.M2();
  return Eigen::Vector3d(1.0 / m1, (re.z * re.z) / (re.r * re.r) / m1 + 1.0 / m2, 1.0 / m2).asDiagonal();
}

/// 10x10 block matrix diag(A, [[0, B^-1 dK], [-B^-1 dV, 0]]).
inline Eigen::Matrix<double, 10, 10> linearization(const MoleculeSpec& spec, const RelativeEquilibrium& re,
                                                   VintSource source = VintSource::printed) {
  detail::require_isosceles(re);
  const auto [planar, axial] = detail::moments(spec, re);
  if (std::abs(planar - axial) <= 1e-12 * planar) throw SingularB();
  const Eigen::Matrix3d binv = b_matrix(spec, re).inverse();
  const Eigen::Matrix3d dv = source == VintSource::printed ? vint_hessian(spec, re) : vint_hessian_amended(spec, re);
  Eigen::Matrix<double, 10, 10> l = Eigen::Matrix<double, 10, 10>::Zero();
  l.topLeftCorner<2, 2>() = rigid_block(spec, re);
  l.block<3, 3>(2, 5) = binv * kinetic_block(spec, re);
  l.block<3, 3>(5, 2) = -binv * dv;
  return l;
}

/// Largest real part over the internal (shape) block of the linearization.
inline double internal_block_rate(const MoleculeSpec& spec, const RelativeEquilibrium& re,
                                  VintSource source = VintSource::printed) {
  const Eigen::Matrix<double, 6, 6> internal = linearization(spec, re, source).block<6, 6>(2, 2);
  return analyze_spectrum(internal).max_re;
}

inline StabilityReport stability_verdict(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  detail::require_isosceles(re);
  StabilityReport rep;
  rep.method = StabilityMethod::reduced_energy_momentum;
  const Eigen::Matrix2d arnold = arnold_form(spec, re);
  const Eigen::Matrix3d printed = vint_hessian(spec, re);
  const Eigen::Matrix3d amended = vint_hessian_amended(spec, re);
  rep.arnold_eigs = symmetric_eigenvalues(arnold);
  rep.vint_eigs = symmetric_eigenvalues(printed);
  rep.vint_eigs_amended = symmetric_eigenvalues(amended);
  const double scale = std::max(amended.cwiseAbs().maxCoeff(), 1e-300);
  rep.formula_discrepancy = (printed - amended).cwiseAbs().maxCoeff() / scale;
  rep.formula_discrepancy_flag = rep.formula_discrepancy > 1e-3;

  const bool energy_definite = std::all_of(rep.arnold_eigs.begin(), rep.arnold_eigs.end(), [](double x) { return x > 0; }) &&
                               std::all_of(rep.vint_eigs.begin(), rep.vint_eigs.end(), [](double x) { return x > 0; });
  try {
    const auto spec_an = analyze_spectrum(linearization(spec, re));
    rep.linearization_spectrum = spec_an.eigenvalues;
    rep.semisimple = spec_an.semisimple && !spec_an.ambiguous;
    rep.max_re_lambda = spec_an.max_re;
    rep.eps_spec = spec_an.eps;
    rep.verdict = energy_definite ? Verdict::lyapunov_stable : spectral_verdict(spec_an);
  } catch (const SingularB& e) {
    rep.verdict = Verdict::inconclusive;
    rep.note = e.what();
  }
  return rep;
}

}  // namespace retool
