#pragma once

// Rotating two-body problem: relative equilibria are the critical points of the
// amended potential U_c(r) = c^2/(m r^2) + U(r), i.e. the roots of
// r^3 U'(r) = 2 c^2 / m.

#include <cmath>
#include <limits>
#include <optional>

#include "retool/errors.hpp"
#include "retool/numerics.hpp"
#include "retool/potential.hpp"

namespace retool {

template <RadialPotential P>
struct DiatomicSystem {
  P potential;
  double mass;  ///< m in c^2/(m r^2)
};

template <RadialPotential P>
DiatomicSystem(P, double) -> DiatomicSystem<P>;

enum class BranchKind { none, cusp, pair };

struct DiatomicBranches {
  BranchKind kind = BranchKind::none;
  double inner = std::numeric_limits<double>::quiet_NaN();  ///< r_{0,1}; l at the cusp
  std::optional<double> outer;                              ///< r_{0,2} when finite and in range
  bool outer_at_infinity = false;   ///< c = 0: the fictitious equilibrium at r = infinity
  bool outer_beyond_range = false;  ///< outer root exists but lies past the potential's domain
  bool multiplicity_warning = false;  ///< more than two roots seen on the scan grid
};

template <RadialPotential P>
double critical_momentum(const DiatomicSystem<P>& sys, const PotentialProfile& prof) {
  const double slope = sys.potential.eval(prof.l).d1;
  return std::sqrt(sys.mass * prof.l * prof.l * prof.l * slope / 2.0);
}

/// c_0: the momentum above which no relative equilibrium exists.
template <RadialPotential P>
double critical_momentum(const DiatomicSystem<P>& sys) {
  return critical_momentum(sys, profile(sys.potential));
}

template <RadialPotential P>
DiatomicBranches branches(const DiatomicSystem<P>& sys, double c, const PotentialProfile& prof) {
  if (!(c >= 0.0)) throw DomainError("momentum must be non-negative");
  DiatomicBranches out;
  if (c == 0.0) {
    out.kind = BranchKind::pair;
    out.inner = prof.r_e;
    out.outer_at_infinity = true;
    return out;
  }
  const double c0 = critical_momentum(sys, prof);
  if (std::abs(c - c0) <= 4.0 * std::numeric_limits<double>::epsilon() * c0) {
    out.kind = BranchKind::cusp;
    out.inner = prof.l;
    return out;
  }
  if (c > c0) return out;

  const double target = 2.0 * c * c / sys.mass;
  auto g = [&](double r) { return r * r * r * sys.potential.eval(r).d1 - target; };

  const Interval range = sys.potential.search_range();
  const auto scan = sign_changes(g, log_grid(range.lo, range.hi, detail::kScanPoints));
  out.multiplicity_warning = scan.size() > 2;

  out.kind = BranchKind::pair;
  out.inner = find_root(g, prof.r_e, prof.l, "diatomic inner branch");

  const double hi_limit = std::min(sys.potential.search_range().hi * 1e6, sys.potential.domain().hi);
  double lo = prof.l;
  double hi = std::min(2.0 * prof.l, hi_limit);
  while (g(hi) >= 0.0) {
    if (hi >= hi_limit) {
      out.outer_beyond_range = true;
      return out;
    }
    lo = hi;
    hi = std::min(2.0 * hi, hi_limit);
  }
  out.outer = find_root(g, lo, hi, "diatomic outer branch");
  return out;
}

/// Roots of U_c' = 0 at momentum c: none above c_0, the cusp l at c_0, a pair below.
template <RadialPotential P>
DiatomicBranches branches(const DiatomicSystem<P>& sys, double c) {
  return branches(sys, c, profile(sys.potential));
}

/// Amended-potential energy U_c(r).
template <RadialPotential P>
double em_point(const DiatomicSystem<P>& sys, double r, double c) {
  return c * c / (sys.mass * r * r) + sys.potential.eval(r).value;
}

}  // namespace retool
