#pragma once

#include <cmath>
#include <sstream>

#include "plaque/kernels.hpp"

namespace plaque {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bisection for an increasing function g on (lo, hi) with g(lo) < 0 < g(hi).
/// The endpoints are never evaluated, so g may be singular there.  Stops when
/// |g(x)| <= f_tol or the bracket shrinks below x_tol.
template <class G>
RootResult bisect_increasing(G&& g, double lo, double hi, double f_tol, double x_tol, int max_iter = 400) {
  if (!(lo < hi)) {
    std::ostringstream os;
    os << "empty bisection bracket [" << lo << ", " << hi << "]";
    throw NumericError(os.str());
  }
  RootResult r;
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::isnan(gm)) throw NumericError("bisection target returned NaN");
    r.x = mid;
    r.residual = gm;
    if (std::abs(gm) <= f_tol || (hi - lo) <= x_tol) return r;
    if (gm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::nextafter(lo, hi) >= hi) return r;
  }
  return r;
}

}  // namespace plaque
