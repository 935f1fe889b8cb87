#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcm {

/// Principal branch of the Lambert W function: the inverse of w -> w e^w on
/// [-1/e, inf). Works for double, long double and Boost.Multiprecision floats.
///
/// Starting points: branch-point series in p = sqrt(2(ex + 1)) near -1/e,
/// log1p(x) on the middle range, and log x - log log x + log log x / log x
/// beyond e. Halley iteration then polishes to a few ulps.
template <class Real>
Real lambert_w(const Real& x) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::log1p;
  using std::pow;
  using std::sqrt;

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real e = exp(Real(1));
  const Real branch = -1 / e;

  if (x != x) throw std::domain_error("lambert_w: NaN argument");
  if (x < branch) {
    // -1/e itself is not representable; accept arguments that round just below it.
    if (x >= branch - 8 * eps) return Real(-1);
    throw std::domain_error("lambert_w: argument below -1/e");
  }
  if (x == 0) return Real(0);
  if (x == std::numeric_limits<Real>::infinity()) return x;

  Real w;
  const Real p2 = 2 * (e * x + 1);
  if (p2 < Real(0.25)) {
    const Real p = p2 > 0 ? sqrt(p2) : Real(0);
    w = -1 + p * (1 + p * (Real(-1) / 3 + p * (Real(11) / 72 + p * (Real(-43) / 540 + p * (Real(769) / 17280)))));
    // Series error is O(p^6); below this cutoff it is already at working precision.
    if (p < pow(eps, Real(1) / 6)) return w;
  } else if (x < e) {
    w = log1p(x);
  } else {
    const Real l1 = log(x);
    const Real l2 = log(l1);
    w = l1 - l2 + l2 / l1;
  }

  const Real tol = 4 * eps;
  for (int iter = 0; iter < 100; ++iter) {
    const Real ew = exp(w);
    const Real f = w * ew - x;
    const Real wp1 = w + 1;
    if (wp1 == 0) break;
    const Real denom = ew * wp1 - (w + 2) * f / (2 * wp1);
    if (denom == 0) break;
    const Real step = f / denom;
    w -= step;
    if (abs(step) <= tol * (1 + abs(w))) break;
  }
  return w;
}

/// W(e^s) without forming e^s, so large s does not overflow. Solves
/// w + log w = s by Newton's method for s > 2.
template <class Real>
Real lambert_w_of_exp(const Real& s) {
  using std::abs;
  using std::exp;
  using std::log;
  if (s <= 2) return lambert_w(Real(exp(s)));
  Real w = s - log(s);
  const Real tol = 4 * std::numeric_limits<Real>::epsilon();
  for (int iter = 0; iter < 100; ++iter) {
    const Real step = (w + log(w) - s) / (1 + 1 / w);
    w -= step;
    if (abs(step) <= tol * (1 + abs(w))) break;
  }
  return w;
}

}  // namespace hcm
