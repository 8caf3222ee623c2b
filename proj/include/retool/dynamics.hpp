#pragma once

// Fixed-step integration of the reduced (r, z) system
//   r' = 2 p_r / m_A,  z' = (2m_A + m_B)/(2 m_A m_B) p_z,
//   p_r' = res_r(r, z, c),  p_z' = -res_z(r, z, c).
//
// The reduced flow keeps the isosceles symmetry, so about an isosceles RE it only
// sees the (dr_y, ds_z) modes of the internal block; the shear and out-of-plane
// modes of the full linearization are absent. Growth rates observed here should be
// compared with reduced_linearization() below, not with the full spectrum.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "retool/errors.hpp"
#include "retool/triatomic.hpp"

namespace retool {

struct TrajectorySample {
  double t;
  ReducedState state;
  double energy;
};

enum class StopReason { completed, collision, escape };

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double energy_drift = 0.0;  ///< max |H(t) - H(0)| over all steps
  StopReason stop = StopReason::completed;
};

class CollisionStop : public Error {
 public:
  CollisionStop(Trajectory partial, double t)
      : Error("collision: r fell below the floor at t = " + std::to_string(t)), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

class StepOverflow : public Error {
 public:
  StepOverflow(Trajectory partial, double t)
      : Error("state left the escape bound at t = " + std::to_string(t)), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

struct IntegrationGuards {
  double r_floor;
  double escape;
};

inline IntegrationGuards default_guards(const MoleculeProfile& prof) { return {1e-3 * prof.F.r_e, 1e3 * prof.F.r_e}; }

/// Called after every step with (t, state).
using StepObserver = std::function<void(double, const ReducedState&)>;

inline Trajectory integrate(const MoleculeSpec& spec, const ReducedState& s0, double t_end, double dt,
                            const IntegrationGuards& guards, std::size_t stride = 1,
                            const StepObserver& observer = {}) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(s0.r > 0.0)) throw DomainError("initial r must be positive");
  if (stride == 0) stride = 1;
  const double kr = 2.0 / spec.m_A;
  const double kz = (2.0 * spec.m_A + spec.m_B) / (2.0 * spec.m_A * spec.m_B);
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));

  Trajectory out;
  ReducedState s = s0;
  const double h0 = reduced_hamiltonian(spec, s);
  out.samples.push_back({0.0, s, h0});
  auto [fr, fz] = re_residual(spec, s.r, s.z, s.c);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    s.p_r += 0.5 * dt * fr;
    s.p_z -= 0.5 * dt * fz;
    s.r += dt * kr * s.p_r;
    s.z += dt * kz * s.p_z;
    if (!(s.r >= guards.r_floor)) {
      out.stop = StopReason::collision;
      out.samples.push_back({t, s, std::nan("")});
      throw CollisionStop(std::move(out), t);
    }
    if (!(std::hypot(s.r, s.z) <= guards.escape)) {
      out.stop = StopReason::escape;
      out.samples.push_back({t, s, std::nan("")});
      throw StepOverflow(std::move(out), t);
    }
    std::tie(fr, fz) = re_residual(spec, s.r, s.z, s.c);
    s.p_r += 0.5 * dt * fr;
    s.p_z -= 0.5 * dt * fz;
    const double h = reduced_hamiltonian(spec, s);
    out.energy_drift = std::max(out.energy_drift, std::abs(h - h0));
    if (n % stride == 0 || n == steps) out.samples.push_back({t, s, h});
    if (observer) observer(t, s);
  }
  return out;
}

inline Trajectory integrate(const MoleculeSpec& spec, const ReducedState& s0, double t_end, double dt) {
  return integrate(spec, s0, t_end, dt, default_guards(characterize(spec)));
}

/// Linearization of the reduced flow at a relative equilibrium, on (r, z, p_r, p_z).
inline Eigen::Matrix4d reduced_linearization(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  const double rho = std::sqrt(0.25 * re.r * re.r + re.z * re.z);
  const auto g = spec.G.eval(rho);
  const double f2 = spec.F.eval(re.r).d2;
  // Hessian of c^2/(m_A r^2) + F(r) + 2 G(rho) in (r, z).
  const double drho_r = 0.25 * re.r / rho, drho_z = re.z / rho;
  const double d2rho_rr = 0.25 / rho - drho_r * drho_r / rho;
  const double d2rho_zz = 1.0 / rho - drho_z * drho_z / rho;
  const double d2rho_rz = -drho_r * drho_z / rho;
  Eigen::Matrix2d hv;
  hv(0, 0) = 6.0 * re.c * re.c / (spec.m_A * std::pow(re.r, 4)) + f2 + 2.0 * (g.d2 * drho_r * drho_r + g.d1 * d2rho_rr);
  hv(1, 1) = 2.0 * (g.d2 * drho_z * drho_z + g.d1 * d2rho_zz);
  hv(0, 1) = hv(1, 0) = 2.0 * (g.d2 * drho_r * drho_z + g.d1 * d2rho_rz);
  Eigen::Matrix4d l = Eigen::Matrix4d::Zero();
  l(0, 2) = 2.0 / spec.m_A;
  l(1, 3) = (2.0 * spec.m_A + spec.m_B) / (2.0 * spec.m_A * spec.m_B);
  l.bottomLeftCorner<2, 2>() = -hv;
  return l;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,r,z,p_r,p_z,H\n";
  char buf[256];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.state.r, s.state.z, s.state.p_r,
                  s.state.p_z, s.energy);
    os << buf;
  }
}

}  // namespace retool
