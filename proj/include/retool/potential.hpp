#pragma once

// Binary repulsive-attractive pair potentials: the closed-form 12-6 Lennard-Jones
// model and tabulated samples interpolated by a natural cubic spline in log r.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "retool/errors.hpp"
#include "retool/numerics.hpp"

namespace retool {

/// U(r) with its first two radial derivatives.
struct PotentialValue {
  double value;
  double d1;
  double d2;
};

struct LennardJones {
  double a;  ///< attraction coefficient, U = -a/r^6 + b/r^12
  double b;  ///< repulsion coefficient
};

struct Sample {
  double r;
  double u;
};

/// Natural cubic spline y(x) on strictly increasing knots.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    // Thomas algorithm for the interior second derivatives.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double diag = 2.0 * (h0 + h1);
      const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      const double denom = diag - h0 * c[i - 1];
      c[i] = h1 / denom;
      d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) m_[i] = d[i] - c[i] * m_[i + 1];
  }

  /// (y, y', y'') at x, x clamped to the knot range.
  PotentialValue operator()(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = 1.0 - a;
    const double y = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double dy = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    const double ddy = a * m_[i] + b * m_[i + 1];
    return {y, dy, ddy};
  }

 private:
  std::vector<double> x_, y_, m_;
};

namespace detail {

struct TabulatedData {
  std::vector<Sample> samples;
  NaturalCubicSpline spline;  // U as a function of log r
};

}  // namespace detail

/// Anything with a radial potential, its derivatives, an evaluation domain, and a
/// finite range on which its characteristic distances are searched for.
template <class P>
concept RadialPotential = requires(const P& p, double r) {
  { p.eval(r) } -> std::same_as<PotentialValue>;
  { p.search_range() } -> std::same_as<Interval>;
  { p.domain() } -> std::same_as<Interval>;
};

class PotentialModel;
inline PotentialModel validated(PotentialModel model);

class PotentialModel {
 public:
  static PotentialModel lennard_jones(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
      throw DomainError("Lennard-Jones coefficients must be positive and finite");
    PotentialModel m;
    m.kind_ = LennardJones{a, b};
    m.domain_ = {0.0, std::numeric_limits<double>::infinity()};
    return m;
  }

  static PotentialModel tabulated(std::vector<Sample> samples) {
    if (samples.size() < 8) throw DomainError("tabulated potential needs at least 8 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!(samples[i].r > 0.0) || !std::isfinite(samples[i].r) || !std::isfinite(samples[i].u))
        throw DomainError("tabulated samples must have finite r > 0 and finite U");
      if (i > 0 && !(samples[i].r > samples[i - 1].r))
        throw DomainError("tabulated samples must be strictly increasing in r");
    }
    std::vector<double> x, y;
    for (const auto& s : samples) {
      x.push_back(std::log(s.r));
      y.push_back(s.u);
    }
    PotentialModel m;
    m.domain_ = {samples.front().r, samples.back().r};
    m.kind_ = std::make_shared<const detail::TabulatedData>(
        detail::TabulatedData{std::move(samples), NaturalCubicSpline(std::move(x), std::move(y))});
    return m;
  }

  bool is_lennard_jones() const noexcept { return std::holds_alternative<LennardJones>(kind_); }
  const LennardJones& lj() const {
    if (!is_lennard_jones()) throw KindMismatch("potential is not Lennard-Jones");
    return std::get<LennardJones>(kind_);
  }
  const std::vector<Sample>& samples() const {
    if (is_lennard_jones()) throw KindMismatch("potential is not tabulated");
    return std::get<std::shared_ptr<const detail::TabulatedData>>(kind_)->samples;
  }

  Interval domain() const noexcept { return domain_; }
  bool is_validated() const noexcept { return validated_; }

  /// Finite interval scanned for the well, the cusp distance and the tail.
  Interval search_range() const {
    if (is_lennard_jones()) {
      const auto& p = std::get<LennardJones>(kind_);
      const double sigma = std::pow(p.b / p.a, 1.0 / 6.0);
      return {0.25 * sigma, 1.0e3 * sigma};
    }
    return domain_;
  }

  PotentialValue eval(double r) const {
    if (!validated_) throw NotValidated();
    if (!(r > 0.0) || r < domain_.lo || r > domain_.hi || std::isnan(r)) {
      std::ostringstream os;
      os << "r = " << r << " outside potential domain [" << domain_.lo << ", " << domain_.hi << "]";
      throw DomainError(os.str());
    }
    return eval_unchecked(r);
  }

  PotentialValue eval_unchecked(double r) const noexcept {
    if (const auto* p = std::get_if<LennardJones>(&kind_)) {
      const double inv2 = 1.0 / (r * r);
      const double inv6 = inv2 * inv2 * inv2;
      const double inv12 = inv6 * inv6;
      return {-p->a * inv6 + p->b * inv12, (6.0 * p->a * inv6 - 12.0 * p->b * inv12) / r,
              (-42.0 * p->a * inv6 + 156.0 * p->b * inv12) * inv2};
    }
    const auto& tab = *std::get<std::shared_ptr<const detail::TabulatedData>>(kind_);
    const auto s = tab.spline(std::log(r));
    return {s.value, s.d1 / r, (s.d2 - s.d1) / (r * r)};
  }

  /// s * U, same kind. Validation state is preserved since s > 0 keeps every condition.
  PotentialModel scaled(double s) const {
    if (!(s > 0.0)) throw DomainError("scale factor must be positive");
    PotentialModel out;
    if (const auto* p = std::get_if<LennardJones>(&kind_)) {
      out = lennard_jones(s * p->a, s * p->b);
    } else {
      auto smp = samples();
      for (auto& x : smp) x.u *= s;
      out = tabulated(std::move(smp));
    }
    out.validated_ = validated_;
    return out;
  }

 private:
  friend PotentialModel retool::validated(PotentialModel model);

  std::variant<LennardJones, std::shared_ptr<const detail::TabulatedData>> kind_{LennardJones{1.0, 1.0}};
  Interval domain_{0.0, std::numeric_limits<double>::infinity()};
  bool validated_ = false;
};

struct ValidationReport {
  bool passed = true;
  int failed_item = 0;  ///< 1..4, 0 when passed
  std::string message;
};

namespace detail {

template <class P>
PotentialValue raw_eval(const P& p, double r) {
  if constexpr (requires { p.eval_unchecked(r); })
    return p.eval_unchecked(r);
  else
    return p.eval(r);
}

inline constexpr std::size_t kScanPoints = 2000;

}  // namespace detail

/// Numerical trend checks of the four generic-potential conditions on a log grid
/// over the search range.
template <class P>
ValidationReport validate_generic(const P& potential) {
  const Interval range = potential.search_range();
  const auto grid = log_grid(range.lo, range.hi, detail::kScanPoints);
  auto fail = [](int item, std::string msg) { return ValidationReport{false, item, std::move(msg)}; };
  auto u = [&](double r) { return detail::raw_eval(potential, r); };

  const auto left = u(grid.front());
  if (!(left.value > 0.0) || !(left.d1 < 0.0))
    return fail(1, "potential is not repulsive (U > 0, U' < 0) at the left end of the range");

  const auto changes = sign_changes([&](double r) { return u(r).d1; }, grid);
  if (changes.size() != 1 || !(u(grid[changes[0].first]).d1 < 0.0))
    return fail(2, "U' changes sign " + std::to_string(changes.size()) + " times; expected a unique minimum");

  std::size_t imin = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (u(grid[i]).value < u(grid[imin]).value) imin = i;
  const double depth = -u(grid[imin]).value;
  const double tail = u(grid.back()).value;
  if (!(depth > 0.0)) return fail(3, "well minimum is not below the asymptotic value 0");
  if (!(std::abs(tail) <= 1e-3 * depth)) return fail(3, "U does not decay to 0 at the right end of the range");

  double prev = std::numeric_limits<double>::infinity();
  for (const double r : grid) {
    if (r <= 2.0 * grid[imin]) continue;
    const double w = std::abs(r * r * u(r).value);
    if (w > prev * (1.0 + 1e-9) + 1e-300) return fail(4, "r^2 U(r) does not decay in the tail");
    prev = w;
  }
  return {};
}

/// Runs validate_generic and marks the model usable, or throws AxiomViolation.
inline PotentialModel validated(PotentialModel model) {
  const auto report = validate_generic(model);
  if (!report.passed) throw AxiomViolation(report.failed_item, report.message);
  model.validated_ = true;
  return model;
}

inline PotentialModel make_lennard_jones(double a, double b) { return validated(PotentialModel::lennard_jones(a, b)); }

struct PotentialProfile {
  double r_e;           ///< equilibrium distance, U'(r_e) = 0
  double well_depth;    ///< D_e = -U(r_e)
  double l;             ///< maximiser of r^3 U'(r), where the rotating diatomic RE cease
  double inflection_r;  ///< first zero of U'' beyond r_e
};

template <RadialPotential P>
PotentialProfile profile(const P& potential) {
  const Interval range = potential.search_range();
  const auto grid = log_grid(range.lo, range.hi, detail::kScanPoints);
  auto d1 = [&](double r) { return potential.eval(r).d1; };
  auto d2 = [&](double r) { return potential.eval(r).d2; };

  const auto wells = sign_changes(d1, grid);
  if (wells.empty()) throw ConvergenceError("profile: no sign change of U' on the search range");
  const double r_e = find_root(d1, grid[wells[0].first], grid[wells[0].second], "profile r_e");

  // r^3 U' is maximal where 3 U' + r U'' = 0.
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= r_e) continue;
    const double v = grid[i] * grid[i] * grid[i] * d1(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 >= grid.size())
    throw ConvergenceError("profile l: maximum of r^3 U' not bracketed inside the search range");
  const double lo = std::max(grid[best - 1], r_e);
  auto stationarity = [&](double r) {
    const auto v = potential.eval(r);
    return 3.0 * v.d1 + r * v.d2;
  };
  const double l = find_root(stationarity, lo, grid[best + 1], "profile l");

  std::vector<double> tail;
  for (double r : grid)
    if (r > r_e) tail.push_back(r);
  tail.insert(tail.begin(), r_e);
  const auto infl = sign_changes(d2, tail);
  if (infl.empty()) throw ConvergenceError("profile: no inflection point of U beyond r_e on the search range");
  const double inflection_r = find_root(d2, tail[infl[0].first], tail[infl[0].second], "profile inflection");

  return {r_e, -potential.eval(r_e).value, l, inflection_r};
}

/// Arithmetic-mean mixing of like-species Lennard-Jones coefficients.
inline PotentialModel lorentz_berthelot(const PotentialModel& aa, const PotentialModel& bb) {
  if (!aa.is_lennard_jones() || !bb.is_lennard_jones())
    throw KindMismatch("mixing rule is defined only for Lennard-Jones coefficients");
  return make_lennard_jones(0.5 * (aa.lj().a + bb.lj().a), 0.5 * (aa.lj().b + bb.lj().b));
}

/// Two-column (r, U) text; '#' starts a comment.
inline std::vector<Sample> read_tabulated(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double r, u;
    if (!(ls >> r)) continue;
    std::string rest;
    if (!(ls >> u) || (ls >> rest))
      throw DomainError("tabulated potential: malformed line " + std::to_string(lineno));
    out.push_back({r, u});
  }
  return out;
}

inline PotentialModel load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open tabulated potential file '" + path + "'");
  return validated(PotentialModel::tabulated(read_tabulated(in)));
}

}  // namespace retool
