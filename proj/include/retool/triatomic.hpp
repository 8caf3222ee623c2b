#pragma once

// Isosceles A-B-A molecule reduced by rotations about its symmetry axis. The
// reduced system has two degrees of freedom: r = |A-A| and z = signed distance
// from the A-A midpoint to B, with the angular momentum c as a parameter.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "retool/diatomic.hpp"
#include "retool/errors.hpp"
#include "retool/potential.hpp"

namespace retool {

struct MoleculeSpec {
  double m_A;
  double m_B;
  PotentialModel F;  ///< A-A
  PotentialModel G;  ///< A-B

  MoleculeSpec(double m_a, double m_b, PotentialModel f, PotentialModel g)
      : m_A(m_a), m_B(m_b), F(std::move(f)), G(std::move(g)) {
    if (!(m_A > 0.0) || !(m_B > 0.0)) throw DomainError("masses must be positive");
    if (!F.is_validated() || !G.is_validated()) throw NotValidated();
  }

  /// Jacobi mass of the A-A relative vector.
  double M1() const noexcept { return m_A / 2.0; }
  /// Jacobi mass of the midpoint-to-B vector.
  double M2() const noexcept { return 2.0 * m_A * m_B / (2.0 * m_A + m_B); }
};

struct ReducedState {
  double r;
  double z;
  double p_r;
  double p_z;
  double c;
};

enum class Family { linear_inner, linear_outer, isosceles_z12, isosceles_z34 };

inline constexpr bool is_linear(Family f) noexcept { return f == Family::linear_inner || f == Family::linear_outer; }

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::linear_inner: return "linear_inner";
    case Family::linear_outer: return "linear_outer";
    case Family::isosceles_z12: return "isosceles_z12";
    case Family::isosceles_z34: return "isosceles_z34";
  }
  return "?";
}

inline Family family_from_string(std::string_view s) {
  for (Family f : {Family::linear_inner, Family::linear_outer, Family::isosceles_z12, Family::isosceles_z34})
    if (to_string(f) == s) return f;
  throw DomainError("unknown family '" + std::string(s) + "'");
}

struct RelativeEquilibrium {
  double r;
  double z;
  double c;
  double energy;
  Family family;
  double xi_e;  ///< angular velocity about Oz, 2c/(m_A r^2)

  /// Base point in Jacobi vectors: r along Oy, s along Oz.
  Eigen::Vector3d r_vector() const { return {0.0, r, 0.0}; }
  Eigen::Vector3d s_vector() const { return {0.0, 0.0, z}; }
};

/// F(r) + 2 G(r/2): the potential seen by a collinear A-B-A configuration.
struct LinearComposite {
  PotentialModel F;
  PotentialModel G;

  PotentialValue eval(double r) const {
    const auto f = F.eval(r);
    const auto g = G.eval(0.5 * r);
    return {f.value + 2.0 * g.value, f.d1 + g.d1, f.d2 + 0.5 * g.d2};
  }
  Interval search_range() const {
    const auto f = F.search_range();
    const auto g = G.search_range();
    return {std::max(f.lo, 2.0 * g.lo), std::min(f.hi, 2.0 * g.hi)};
  }
  Interval domain() const {
    const auto f = F.domain();
    const auto g = G.domain();
    return {std::max(f.lo, 2.0 * g.lo), std::min(f.hi, 2.0 * g.hi)};
  }
};

/// Characteristic distances and momenta, computed once per molecule.
struct MoleculeProfile {
  PotentialProfile F;
  PotentialProfile G;
  PotentialProfile W;  ///< of the linear composite
  double c0F;          ///< A-A cusp momentum
  double c0W;          ///< cusp momentum of the linear families
};

inline LinearComposite linear_composite(const MoleculeSpec& spec) { return {spec.F, spec.G}; }

inline MoleculeProfile characterize(const MoleculeSpec& spec) {
  MoleculeProfile p;
  p.F = profile(spec.F);
  p.G = profile(spec.G);
  const auto w = linear_composite(spec);
  p.W = profile(w);
  p.c0F = critical_momentum(DiatomicSystem{spec.F, spec.m_A}, p.F);
  p.c0W = critical_momentum(DiatomicSystem{w, spec.m_A}, p.W);
  return p;
}

inline double reduced_hamiltonian(const MoleculeSpec& spec, const ReducedState& s) {
  if (!(s.r > 0.0)) throw DomainError("reduced Hamiltonian needs r > 0");
  const double rho = std::sqrt(0.25 * s.r * s.r + s.z * s.z);
  return s.p_r * s.p_r / spec.m_A + (2.0 * spec.m_A + spec.m_B) / (4.0 * spec.m_A * spec.m_B) * s.p_z * s.p_z +
         s.c * s.c / (spec.m_A * s.r * s.r) + spec.F.eval(s.r).value + 2.0 * spec.G.eval(rho).value;
}

/// (dp_r/dt, -dp_z/dt) at zero momenta; both vanish exactly at a relative equilibrium.
inline std::pair<double, double> re_residual(const MoleculeSpec& spec, double r, double z, double c) {
  if (!(r > 0.0)) throw DomainError("residual needs r > 0");
  const double rho = std::sqrt(0.25 * r * r + z * z);
  const double g1 = spec.G.eval(rho).d1;
  const double res_r = 2.0 * c * c / (spec.m_A * r * r * r) - spec.F.eval(r).d1 - g1 * r / (2.0 * rho);
  const double res_z = 2.0 * g1 * z / rho;
  return {res_r, res_z};
}

inline RelativeEquilibrium make_re(const MoleculeSpec& spec, double r, double z, double c, Family family) {
  return {r, z, c, reduced_hamiltonian(spec, {r, z, 0.0, 0.0, c}), family, 2.0 * c / (spec.m_A * r * r)};
}

struct LinearSolveResult {
  std::vector<RelativeEquilibrium> points;
  bool multiplicity_warning = false;  ///< the composite potential has more than one well
};

inline LinearSolveResult solve_linear(const MoleculeSpec& spec, double c, const MoleculeProfile& prof) {
  if (!(c >= 0.0)) throw DomainError("momentum must be non-negative");
  const auto w = linear_composite(spec);
  LinearSolveResult out;
  out.multiplicity_warning = validate_generic(w).failed_item == 2;
  const auto br = branches(DiatomicSystem{w, spec.m_A}, c, prof.W);
  out.multiplicity_warning = out.multiplicity_warning || br.multiplicity_warning;
  if (br.kind == BranchKind::none) return out;
  out.points.push_back(make_re(spec, br.inner, 0.0, c, Family::linear_inner));
  if (br.outer) out.points.push_back(make_re(spec, *br.outer, 0.0, c, Family::linear_outer));
  return out;
}

/// Collinear relative equilibria at momentum c: the inner and outer roots of the
/// composite amended potential (one at the cusp, none above it).
inline LinearSolveResult solve_linear(const MoleculeSpec& spec, double c) {
  return solve_linear(spec, c, characterize(spec));
}

/// Momentum at which 2 r_e^G is a rotating A-A diatomic equilibrium.
inline double momentum_c1s(const MoleculeSpec& spec, const MoleculeProfile& prof) {
  const double d = 2.0 * prof.G.r_e;
  if (!(prof.F.r_e < d))
    throw NotApplicable("c_1s undefined: 2 r_e^G <= r_e^F, the molecule has no isosceles RE");
  const double slope = spec.F.eval(d).d1;
  if (slope < 0.0) throw NegativeDiscriminant("F'(2 r_e^G) < 0");
  return std::sqrt(spec.m_A * d * d * d * slope / 2.0);
}

inline double momentum_c1s(const MoleculeSpec& spec) { return momentum_c1s(spec, characterize(spec)); }

/// Isosceles (z != 0) relative equilibria at momentum c, as +/- z pairs.
inline std::vector<RelativeEquilibrium> solve_isosceles(const MoleculeSpec& spec, double c,
                                                        const MoleculeProfile& prof) {
  if (!(c >= 0.0)) throw DomainError("momentum must be non-negative");
  std::vector<RelativeEquilibrium> out;
  const double rg = prof.G.r_e;
  auto emit = [&](double r, Family fam) {
    const double radicand = rg * rg - 0.25 * r * r;
    if (!(radicand > 0.0)) return;  // z = 0 belongs to the linear families
    const double z = std::sqrt(radicand);
    out.push_back(make_re(spec, r, -z, c, fam));
    out.push_back(make_re(spec, r, z, c, fam));
  };
  const auto br = branches(DiatomicSystem{spec.F, spec.m_A}, c, prof.F);
  if (br.kind == BranchKind::none) return out;
  emit(br.inner, Family::isosceles_z12);
  if (br.outer) emit(*br.outer, Family::isosceles_z34);
  return out;
}

inline std::vector<RelativeEquilibrium> solve_isosceles(const MoleculeSpec& spec, double c) {
  return solve_isosceles(spec, c, characterize(spec));
}

enum class IsoscelesCase { no_isosceles, one_family, two_families };

inline std::string_view to_string(IsoscelesCase c) {
  switch (c) {
    case IsoscelesCase::no_isosceles: return "no_isosceles";
    case IsoscelesCase::one_family: return "one_family";
    case IsoscelesCase::two_families: return "two_families";
  }
  return "?";
}

/// Proposition-style case number: "1", "2(a)", "2(b)".
inline std::string_view case_number(IsoscelesCase c) {
  switch (c) {
    case IsoscelesCase::no_isosceles: return "1";
    case IsoscelesCase::one_family: return "2(a)";
    case IsoscelesCase::two_families: return "2(b)";
  }
  return "?";
}

struct CaseLabel {
  IsoscelesCase kind;
  std::optional<double> c1s;
  std::optional<double> c0F;
};

/// Closed-form Lennard-Jones criteria in terms of the like-species coefficients,
/// with the cross potential given by arithmetic mixing.
inline IsoscelesCase classify_lennard_jones(double a11, double b11, double a22, double b22) {
  const double ra = a22 / a11;
  const double rb = b22 / b11;
  if (64.0 * (1.0 + rb) - 1.0 <= ra) return IsoscelesCase::no_isosceles;
  if (128.0 * (1.0 + rb) <= 5.0 * (1.0 + ra)) return IsoscelesCase::one_family;
  return IsoscelesCase::two_families;
}

inline IsoscelesCase classify_distances(double re_F, double re_G, double l) {
  if (2.0 * re_G <= re_F) return IsoscelesCase::no_isosceles;
  if (2.0 * re_G <= l) return IsoscelesCase::one_family;
  return IsoscelesCase::two_families;
}

inline CaseLabel classify(const MoleculeSpec& spec, const MoleculeProfile& prof) {
  CaseLabel out{classify_distances(prof.F.r_e, prof.G.r_e, prof.F.l), std::nullopt, prof.c0F};
  if (out.kind != IsoscelesCase::no_isosceles) out.c1s = momentum_c1s(spec, prof);

  if (spec.F.is_lennard_jones() && spec.G.is_lennard_jones()) {
    // Recover the B-B coefficients implied by mixing: x_AB = (x_AA + x_BB)/2.
    const auto f = spec.F.lj();
    const auto g = spec.G.lj();
    const auto closed = classify_lennard_jones(f.a, f.b, 2.0 * g.a - f.a, 2.0 * g.b - f.b);
    const double d = 2.0 * prof.G.r_e;
    const bool near_boundary = std::abs(d - prof.F.r_e) <= 1e-9 * d || std::abs(d - prof.F.l) <= 1e-9 * d;
    if (closed != out.kind && !near_boundary)
      throw Inconsistent("closed-form case " + std::string(case_number(closed)) + " disagrees with numeric case " +
                         std::string(case_number(out.kind)));
  }
  return out;
}

inline CaseLabel classify(const MoleculeSpec& spec) { return classify(spec, characterize(spec)); }

}  // namespace retool
