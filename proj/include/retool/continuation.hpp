#pragma once

// Grid sweep over c with event refinement. Family labels come from the solver
// that produced each point (inner/outer root of the linear composite, inner/outer
// root of the A-A problem); a nearest-neighbour jump check guards the labelling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "retool/errors.hpp"
#include "retool/numerics.hpp"
#include "retool/spectrum.hpp"
#include "retool/stability_rem.hpp"
#include "retool/stability_slice.hpp"
#include "retool/triatomic.hpp"

namespace retool {

enum class EventKind { c_1s, c_0F, linear_cusp };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::c_1s: return "c_1s";
    case EventKind::c_0F: return "c_0F";
    case EventKind::linear_cusp: return "linear_cusp";
  }
  return "?";
}

struct Event {
  EventKind kind;
  double c;
};

struct EMPoint {
  double c;
  double energy;
  double r;
  double z;
  Family family;
  Verdict verdict = Verdict::unassessed;
  double max_re_lambda = 0.0;
  std::vector<std::complex<double>> spectrum;

  bool operator==(const EMPoint&) const = default;
};

struct EMDiagram {
  std::vector<EMPoint> points;
  std::vector<Event> events;
  bool multiplicity_warning = false;
};

inline bool point_less(const EMPoint& a, const EMPoint& b) {
  return std::tie(a.family, a.c, a.z) < std::tie(b.family, b.c, b.z);
}

/// c = 0 followed by n log-spaced values on [1e-3 c_top, c_top], c_top = 1.05 max(c0F, c0W).
inline std::vector<double> default_grid(const MoleculeProfile& prof, std::size_t n = 400, double c_max = 0.0) {
  const double top = c_max > 0.0 ? c_max : 1.05 * std::max(prof.c0F, prof.c0W);
  std::vector<double> grid{0.0};
  if (n == 0) return grid;
  const auto tail = log_grid(1e-3 * top, top, n);
  grid.insert(grid.end(), tail.begin(), tail.end());
  return grid;
}

namespace detail {

inline std::vector<RelativeEquilibrium> solve_all(const MoleculeSpec& spec, double c, const MoleculeProfile& prof,
                                                  bool* warning = nullptr) {
  auto lin = solve_linear(spec, c, prof);
  if (warning && lin.multiplicity_warning) *warning = true;
  auto out = std::move(lin.points);
  const auto iso = solve_isosceles(spec, c, prof);
  out.insert(out.end(), iso.begin(), iso.end());
  return out;
}

inline int count_family(const std::vector<RelativeEquilibrium>& pts, Family f) {
  return static_cast<int>(std::count_if(pts.begin(), pts.end(), [f](const auto& p) { return p.family == f; }));
}

/// Shrinks [lo, hi] around the switch of a boolean predicate to width tol.
inline double bisect_switch(const std::function<bool(double)>& present, double lo, double hi, double tol) {
  const bool at_lo = present(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (present(mid) == at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

using Key = std::pair<Family, bool>;  // family, z > 0

inline std::optional<RelativeEquilibrium> pick(const std::vector<RelativeEquilibrium>& pts, Key key) {
  for (const auto& p : pts)
    if (p.family == key.first && (p.z > 0.0) == key.second) return p;
  return std::nullopt;
}

inline double distance(const RelativeEquilibrium& a, const RelativeEquilibrium& b) {
  return std::hypot(a.r - b.r, a.z - b.z);
}

}  // namespace detail

inline constexpr double kEventTolerance = 1e-9;

/// Sweeps c_grid (ascending), returns all RE with events refined by bisection.
inline EMDiagram continue_families(const MoleculeSpec& spec, const std::vector<double>& c_grid,
                                   const MoleculeProfile& prof) {
  if (!std::is_sorted(c_grid.begin(), c_grid.end())) throw DomainError("c grid must be ascending");
  EMDiagram d;
  std::vector<std::vector<RelativeEquilibrium>> per_c;
  per_c.reserve(c_grid.size());
  for (double c : c_grid) per_c.push_back(detail::solve_all(spec, c, prof, &d.multiplicity_warning));

  // Jump check along each tracked branch, refined once at the midpoint.
  const detail::Key keys[] = {{Family::linear_inner, false}, {Family::linear_outer, false},
                              {Family::isosceles_z12, false}, {Family::isosceles_z12, true},
                              {Family::isosceles_z34, false}, {Family::isosceles_z34, true}};
  for (const auto& key : keys) {
    double prev_step = -1.0;
    for (std::size_t k = 1; k < c_grid.size(); ++k) {
      const auto a = detail::pick(per_c[k - 1], key);
      const auto b = detail::pick(per_c[k], key);
      if (!a || !b || c_grid[k - 1] == 0.0) {
        prev_step = -1.0;
        continue;
      }
      const double step = detail::distance(*a, *b);
      if (prev_step > 0.0 && step > 20.0 * prev_step && step > 1e-6 * (1.0 + a->r)) {
        const auto mid_pts = detail::solve_all(spec, 0.5 * (c_grid[k - 1] + c_grid[k]), prof);
        const auto m = detail::pick(mid_pts, key);
        if (!m || std::max(detail::distance(*a, *m), detail::distance(*m, *b)) > 0.75 * step)
          throw ContinuationGap("branch " + std::string(to_string(key.first)) + " jumps between c = " +
                                std::to_string(c_grid[k - 1]) + " and c = " + std::to_string(c_grid[k]));
      }
      prev_step = step;
    }
  }

  for (std::size_t k = 0; k < c_grid.size(); ++k)
    for (const auto& re : per_c[k]) d.points.push_back({c_grid[k], re.energy, re.r, re.z, re.family});

  // Events: the family appears (rising) or vanishes between adjacent grid values.
  auto add_events = [&](EventKind kind, const std::function<bool(double)>& present, bool rising) {
    for (std::size_t k = 1; k < c_grid.size(); ++k) {
      const double lo = c_grid[k - 1], hi = c_grid[k];
      if (lo == 0.0) continue;
      if (present(lo) != present(hi) && present(hi) == rising)
        d.events.push_back({kind, detail::bisect_switch(present, lo, hi, kEventTolerance * std::max(1.0, hi))});
    }
  };
  const auto label = classify_distances(prof.F.r_e, prof.G.r_e, prof.F.l);
  auto has = [&](Family f) {
    return [&spec, &prof, f](double c) {
      if (is_linear(f)) return detail::count_family(solve_linear(spec, c, prof).points, f) > 0;
      return detail::count_family(solve_isosceles(spec, c, prof), f) > 0;
    };
  };
  if (label == IsoscelesCase::one_family) add_events(EventKind::c_1s, has(Family::isosceles_z12), false);
  if (label == IsoscelesCase::two_families) {
    add_events(EventKind::c_1s, has(Family::isosceles_z34), true);
    add_events(EventKind::c_0F, has(Family::isosceles_z12), false);
  }
  add_events(EventKind::linear_cusp, has(Family::linear_inner), false);
  std::sort(d.events.begin(), d.events.end(), [](const Event& a, const Event& b) { return a.c < b.c; });
  std::sort(d.points.begin(), d.points.end(), point_less);
  return d;
}

inline EMDiagram continue_families(const MoleculeSpec& spec, const std::vector<double>& c_grid) {
  return continue_families(spec, c_grid, characterize(spec));
}

/// Stability report for any RE: the slice method for linear points, REM otherwise.
inline StabilityReport assess(const MoleculeSpec& spec, const RelativeEquilibrium& re) {
  return is_linear(re.family) ? slice_stability(spec, re) : stability_verdict(spec, re);
}

inline void attach_stability(const MoleculeSpec& spec, EMDiagram& d) {
  for (auto& p : d.points) {
    const auto re = make_re(spec, p.r, p.z, p.c, p.family);
    StabilityReport rep;
    try {
      rep = assess(spec, re);
    } catch (const SingularInertia& e) {
      rep.verdict = Verdict::inconclusive;
    }
    p.verdict = rep.verdict;
    p.max_re_lambda = rep.max_re_lambda;
    p.spectrum = rep.linearization_spectrum;
  }
}

}  // namespace retool
