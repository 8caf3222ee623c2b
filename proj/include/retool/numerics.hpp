#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "retool/errors.hpp"

namespace retool {

struct Interval {
  double lo;
  double hi;
};

/// n points, geometrically spaced, endpoints included.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(llo + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace detail {

inline std::string bracket_message(const char* stage, double a, double b, double fa, double fb) {
  std::ostringstream os;
  os.precision(17);
  os << stage << ": no sign change on [" << a << ", " << b << "] (f = " << fa << ", " << fb << ")";
  return os.str();
}

}  // namespace detail

/// Root of f on [a, b] with f(a), f(b) of opposite sign (or zero). The bracket is
/// shrunk to a few ulps; the returned point is the endpoint with smaller |f|.
template <class F>
double find_root(F&& f, double a, double b, const char* stage = "root") {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw ConvergenceError(detail::bracket_message(stage, a, b, fa, fb));
  std::uintmax_t max_iter = 200;
  auto tol = [](double x, double y) {
    return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y)) ||
           std::abs(x - y) <= 1e-300;
  };
  auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, max_iter);
  if (max_iter >= 200) throw ConvergenceError(std::string(stage) + ": iteration limit reached");
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

/// Brackets [grid[lo], grid[hi]] across which g changes sign. Exact zeros on the
/// grid are skipped over, so a touching zero without a sign change is not reported.
template <class G>
std::vector<std::pair<std::size_t, std::size_t>> sign_changes(G&& g, const std::vector<double>& grid) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = g(grid[i]);
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) out.emplace_back(last_index, i);
    last_sign = s;
    last_index = i;
  }
  return out;
}

}  // namespace retool
