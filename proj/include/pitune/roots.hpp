#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "pitune/errors.hpp"

namespace pitune::roots {

/*! \brief A sign-change interval [lo, hi] produced by a bracket scan. */
struct Bracket {
  double lo;
  double hi;
};

/*! \brief Bisect a bracketed root of \p f down to interval width \p xtol.

  Requires f(lo) and f(hi) of opposite (or zero) sign.  Bisection is used
  throughout instead of derivative-based methods so that roots near
  tangencies of the transcendental stability equations stay robust.
*/
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-13) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect: endpoints do not bracket a root");
  // ~60 halvings reach 1e-18 relative width; loop also stops on xtol.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < xtol || mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/*! \brief Fixed-step scan for the first \p count sign changes of \p f on [z0, z1].

  Returns fewer brackets than requested if the interval runs out; callers that
  need exactly \p count should widen the scan and call again.
*/
template <class F>
std::vector<Bracket> scan_brackets(F&& f, double z0, double z1, double step,
                                   std::size_t count) {
  std::vector<Bracket> out;
  double prev_z = z0;
  double prev_f = f(z0);
  for (double z = z0 + step; out.size() < count && prev_z < z1;
       z = std::min(z + step, z1 + 0.5 * step)) {
    const double fz = f(z);
    if (prev_f == 0.0)
      out.push_back({prev_z, prev_z});
    else if ((fz > 0.0) != (prev_f > 0.0))
      out.push_back({prev_z, z});
    prev_z = z;
    prev_f = fz;
    if (z >= z1) break;
  }
  return out;
}

/*! \brief Golden-section minimization of a unimodal \p f on [a, b].

  Deterministic fixed-ratio shrink; returns the midpoint of the final
  interval once it is narrower than \p xtol.
*/
template <class F>
double golden_min(F&& f, double a, double b, double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

} // namespace pitune::roots
