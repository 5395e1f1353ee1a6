#pragma once

// Adaptive quadrature on finite intervals and on [a, +inf).  The improper
// version extends the upper limit geometrically until the newest panel
// contributes below the relative tolerance.

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "plaque/kernels.hpp"

namespace plaque::quad {

inline constexpr double kDefaultRelTol = 1e-13;
inline constexpr double kTailRelTol = 1e-14;

namespace detail {

// One Gauss-Kronrod 31 panel.  Boost reports the error estimate in the units
// of the reference interval [-1, 1], so rescale it here.
template <class F>
double gk_panel(F& f, double a, double b, double* error, double* l1) {
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, error, l1);
  *error *= 0.5 * std::abs(b - a);
  return value;
}

// Bisects until the error estimate drops below an absolute tolerance.  Panels
// far out in a tail hold values near underflow, where a relative target
// cannot be met and would only drive the recursion deeper.
template <class F>
double integrate_abs(F& f, double a, double b, double abs_tol, int depth) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = gk_panel(f, a, b, &error, &l1);
  // below this the estimate is roundoff and splitting cannot help
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  if (error <= std::max(abs_tol, floor) || depth == 0) return value;
  const double mid = 0.5 * (a + b);
  return integrate_abs(f, a, mid, 0.5 * abs_tol, depth - 1) + integrate_abs(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double rel_tol = kDefaultRelTol) {
  if (b == a) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  double value = detail::gk_panel(f, a, b, &error, &l1);
  const double abs_tol = rel_tol * l1;
  if (error > abs_tol) value = detail::integrate_abs(f, a, b, abs_tol, 20);
  if (!std::isfinite(value)) throw NumericError("quadrature produced a non-finite value");
  return value;
}

struct TailResult {
  double value = 0.0;
  double upper_limit = 0.0;  // where the truncation stopped
  int panels = 0;
};

/// int_a^inf f.  `scale` is the width of the first panel; later panels double.
/// Converged once two consecutive panels each contribute < tail_tol * |total|.
template <class F>
TailResult integrate_to_infinity(F&& f, double a, double scale, double rel_tol = kDefaultRelTol,
                                 double tail_tol = kTailRelTol, int max_panels = 400) {
  TailResult out;
  double lo = a;
  double width = scale;
  int quiet = 0;
  for (int p = 0; p < max_panels; ++p) {
    const double hi = lo + width;
    double error = 0.0;
    double l1 = 0.0;
    double piece = detail::gk_panel(f, lo, hi, &error, &l1);
    const double abs_tol = rel_tol * std::max(std::abs(out.value), l1);
    if (error > abs_tol) piece = detail::integrate_abs(f, lo, hi, abs_tol, 20);
    if (!std::isfinite(piece)) throw NumericError("quadrature produced a non-finite value");
    out.value += piece;
    out.panels = p + 1;
    lo = hi;
    width *= 2.0;
    if (std::abs(piece) <= tail_tol * std::abs(out.value)) {
      if (++quiet >= 2) {
        out.upper_limit = lo;
        return out;
      }
    } else {
      quiet = 0;
    }
    if (!std::isfinite(lo)) break;
  }
  std::ostringstream os;
  os << "improper integral did not converge after " << out.panels << " panels (partial value "
     << out.value << ")";
  throw NumericError(os.str());
}

}  // namespace plaque::quad
