#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "hcm/lambert_w.hpp"

namespace hcm {

// Notation shared by everything below, for maximum degree Delta, local
// sparsity f and fugacity lambda:
//   a      = log(1 + lambda)
//   Lambda = Delta * a
//   c      = 2 Delta^2 / f
// and z is the expected number of externally uncovered neighbours, y = z a.

namespace detail {

template <class Real>
void check_bound_inputs(std::size_t delta, const Real& f, const Real& lambda) {
  if (delta < 1) throw std::domain_error("bounds need maximum degree >= 1");
  const Real d = static_cast<Real>(delta);
  if (!(f >= 1) || f > d * d + 1)
    throw std::domain_error("f must lie in [1, Delta^2 + 1]");
  if (!(lambda > 0) || !(lambda < std::numeric_limits<Real>::infinity()))
    throw std::domain_error("fugacity must be positive and finite");
}

}  // namespace detail

template <class Real>
struct ZSolution {
  Real z{};
  Real y{};              ///< z * log(1 + lambda)
  Real Lambda{};         ///< Delta * log(1 + lambda)
  Real sandwich_lower{}; ///< W(Lambda)
  Real sandwich_upper{}; ///< W(Lambda * exp(2 Lambda^2 / (f W(Lambda))))
  Real residual{};       ///< log-form residual of the balance equation at z
  int iterations = 0;
};

/// Log-form balance between the two occupancy estimates, as a function of z:
///   -z a - log(z / Delta) + (c / z) a.
/// Zero exactly where (1+lambda)^{-z} = (z/Delta)(1+lambda)^{-c/z}; strictly
/// decreasing in z.
template <class Real>
Real z_balance(std::size_t delta, const Real& f, const Real& lambda, const Real& z) {
  using std::log;
  using std::log1p;
  const Real a = log1p(lambda);
  const Real d = static_cast<Real>(delta);
  return -z * a - log(z / d) + (2 * d * d / (f * z)) * a;
}

/// Solves the balance equation for z by bisection in y = z a, bracketed by
/// W(Lambda) <= y <= W(Lambda e^{2 Lambda^2 / (f W(Lambda))}).
template <class Real = long double>
ZSolution<Real> solve_z(std::size_t delta, const Real& f, const Real& lambda) {
  using std::abs;
  using std::log;
  using std::log1p;
  detail::check_bound_inputs(delta, f, lambda);

  ZSolution<Real> out;
  const Real a = log1p(lambda);
  const Real L = static_cast<Real>(delta) * a;
  const Real logL = log(L);
  const Real drift_scale = 2 * L * L / f;
  out.Lambda = L;
  out.sandwich_lower = lambert_w(L);
  out.sandwich_upper = lambert_w_of_exp(Real(logL + drift_scale / out.sandwich_lower));

  auto h = [&](const Real& y) { return -y - log(y) + logL + drift_scale / y; };

  Real lo = out.sandwich_lower;
  Real hi = out.sandwich_upper;
  // Endpoints carry rounding from W; nudge outward until the sign pattern holds.
  const Real nudge = 64 * std::numeric_limits<Real>::epsilon();
  for (int k = 0; k < 64 && h(lo) < 0; ++k) lo -= nudge * (1 + abs(lo)) * (k + 1);
  for (int k = 0; k < 64 && h(hi) > 0; ++k) hi += nudge * (1 + abs(hi)) * (k + 1);

  int iter = 0;
  for (; iter < 200; ++iter) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (h(mid) > 0) lo = mid;
    else hi = mid;
  }
  out.y = abs(h(lo)) <= abs(h(hi)) ? lo : hi;
  out.z = out.y / a;
  out.residual = z_balance(delta, f, lambda, out.z);
  out.iterations = iter;
  return out;
}

template <class Real>
struct OccupancyBound {
  Real value{};        ///< lambda/(1+lambda) (1+lambda)^{-z*}
  Real second_form{};  ///< lambda/(1+lambda) (z*/Delta) (1+lambda)^{-c/z*}
  Real z{};
};

/// Min-max occupancy-fraction lower bound, attained where the two estimates
/// balance. Both evaluations are returned; they agree up to rounding.
template <class Real = long double>
OccupancyBound<Real> occupancy_lower_bound(std::size_t delta, const Real& f, const Real& lambda) {
  using std::exp;
  using std::log1p;
  const auto sol = solve_z(delta, f, lambda);
  const Real a = log1p(lambda);
  const Real d = static_cast<Real>(delta);
  const Real ceiling = lambda / (1 + lambda);
  OccupancyBound<Real> out;
  out.z = sol.z;
  out.value = ceiling * exp(-sol.z * a);
  out.second_form = ceiling * (sol.z / d) * exp(-(2 * d * d / (f * sol.z)) * a);
  return out;
}

/// The two estimates whose maximum is minimised by occupancy_lower_bound,
/// evaluated at an arbitrary z > 0.
template <class Real = long double>
std::pair<Real, Real> occupancy_estimates(std::size_t delta, const Real& f, const Real& lambda, const Real& z) {
  using std::exp;
  using std::log1p;
  const Real a = log1p(lambda);
  const Real d = static_cast<Real>(delta);
  const Real ceiling = lambda / (1 + lambda);
  return {ceiling * exp(-z * a), ceiling * (z / d) * exp(-(2 * d * d / (f * z)) * a)};
}

template <class Real>
struct AsymptoticOccupancy {
  Real value{};   ///< lambda/(1+lambda) W(Lambda)/Lambda
  Real Lambda{};  ///< Delta log(1 + lambda); should be large
  Real drift{};   ///< 2 Lambda^2 / (f W(Lambda)); should be small
};

/// Leading-order occupancy guarantee, with the two quantities that measure
/// how far (Delta, f, lambda) sits from the regime where it is the actual
/// bound. `f` only enters the drift diagnostic.
template <class Real = long double>
AsymptoticOccupancy<Real> asymptotic_occupancy(std::size_t delta, const Real& lambda,
                                               std::optional<Real> f = std::nullopt) {
  using std::log1p;
  if (delta < 1) throw std::domain_error("bounds need maximum degree >= 1");
  if (!(lambda > 0)) throw std::domain_error("fugacity must be positive");
  const Real d = static_cast<Real>(delta);
  const Real ff = f.value_or(d * d + 1);
  AsymptoticOccupancy<Real> out;
  out.Lambda = d * log1p(lambda);
  const Real w = lambert_w(out.Lambda);
  out.value = lambda / (1 + lambda) * w / out.Lambda;
  out.drift = 2 * out.Lambda * out.Lambda / (ff * w);
  return out;
}

template <class Real>
struct AlphaBeta {
  Real alpha{};
  Real beta{};
  Real z{};  ///< minimiser of g
};

/// Certificate parameters for which
///   g(x) = lambda/(1+lambda) (alpha (1+lambda)^{-x} + beta x (1+lambda)^{-c/x})
/// has its minimum at z* with g(z*) = 1, so alpha + beta Delta is a fractional
/// chromatic number bound.
template <class Real = long double>
AlphaBeta<Real> alpha_beta(std::size_t delta, const Real& f, const Real& lambda) {
  using std::exp;
  using std::log1p;
  const auto sol = solve_z(delta, f, lambda);
  const Real a = log1p(lambda);
  const Real d = static_cast<Real>(delta);
  const Real ratio = (d / sol.z) * (1 / a + 2 * d * d / (f * sol.z));
  const Real total = (1 + lambda) / lambda * exp(sol.z * a);  // alpha + beta Delta
  AlphaBeta<Real> out;
  out.beta = total / (ratio + d);
  out.alpha = ratio * out.beta;
  out.z = sol.z;
  return out;
}

/// g(x) as defined at alpha_beta; g(0) is the limit lambda/(1+lambda) alpha.
template <class Real = long double>
Real certificate_g(std::size_t delta, const Real& f, const Real& lambda, const Real& alpha, const Real& beta,
                   const Real& x) {
  using std::exp;
  using std::log1p;
  const Real a = log1p(lambda);
  const Real d = static_cast<Real>(delta);
  const Real ceiling = lambda / (1 + lambda);
  if (x <= 0) return ceiling * alpha;
  return ceiling * (alpha * exp(-x * a) + beta * x * exp(-(2 * d * d / (f * x)) * a));
}

/// Right-hand side of the per-vertex local bound
///   lambda/(1+lambda) min_z (alpha (1+lambda)^{-z} + beta z (1+lambda)^{-c/z})
/// with z restricted to [0, Delta]: the expected number of externally
/// uncovered neighbours never exceeds the degree. The bracket is convex, so
/// the minimiser is found by bisection on its derivative. Delta = 0 is
/// allowed here and gives lambda/(1+lambda) alpha.
template <class Real = long double>
Real local_bound_rhs(std::size_t delta, const Real& f, const Real& lambda, const Real& alpha, const Real& beta) {
  using std::exp;
  using std::log1p;
  using std::min;
  if (!(alpha > 0) || !(beta > 0)) throw std::invalid_argument("alpha and beta must be positive");
  if (!(lambda > 0)) throw std::domain_error("fugacity must be positive");
  const Real ceiling = lambda / (1 + lambda);
  if (delta == 0) return ceiling * alpha;
  if (!(f > 0)) throw std::domain_error("f must be positive");
  const Real a = log1p(lambda);
  const Real d = static_cast<Real>(delta);
  const Real c = 2 * d * d / f;
  auto bracket = [&](const Real& z) -> Real {
    if (z <= 0) return alpha;
    return alpha * exp(-z * a) + beta * z * exp(-(c / z) * a);
  };
  auto slope = [&](const Real& z) -> Real {
    return -alpha * a * exp(-z * a) + beta * exp(-(c / z) * a) * (1 + c * a / z);
  };
  Real best;
  if (slope(d) <= 0) {
    best = bracket(d);
  } else {
    Real lo = 0, hi = d;
    for (int i = 0; i < 200; ++i) {
      const Real mid = (lo + hi) / 2;
      if (mid <= lo || mid >= hi) break;
      if (slope(mid) < 0) lo = mid;
      else hi = mid;
    }
    best = min(bracket(lo), bracket(hi));
  }
  best = min(best, Real(alpha));
  return ceiling * best;
}

template <class Real>
struct ChifUpper {
  Real lambda{};             ///< solves Delta log(1+lambda) = f^{1/(2+eps/2)}
  Real z{};
  Real bound{};              ///< (1+lambda)/lambda (1+lambda)^{z*} = alpha + beta Delta
  Real asymptotic_target{};  ///< (2+eps) Delta / log f
  Real ratio{};              ///< bound / asymptotic_target
};

/// Finite fractional-chromatic-number bound at the fugacity tuned to (Delta, f, eps).
template <class Real = long double>
ChifUpper<Real> chif_upper(std::size_t delta, const Real& f, const Real& eps) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::pow;
  if (delta < 1) throw std::domain_error("bounds need maximum degree >= 1");
  const Real d = static_cast<Real>(delta);
  if (!(f >= 2) || f > d * d + 1) throw std::domain_error("chif_upper needs 2 <= f <= Delta^2 + 1");
  if (!(eps > 0)) throw std::domain_error("eps must be positive");
  const Real a = pow(f, 1 / (2 + eps / 2)) / d;  // log(1 + lambda)
  const Real lambda = expm1(a);
  if (!(lambda > 0) || !(lambda < std::numeric_limits<Real>::infinity()))
    throw std::domain_error("no finite positive fugacity solves Delta log(1+lambda) = f^{1/(2+eps/2)}");
  const auto sol = solve_z(delta, f, lambda);
  ChifUpper<Real> out;
  out.lambda = lambda;
  out.z = sol.z;
  out.bound = (1 + lambda) / lambda * exp(sol.z * a);
  out.asymptotic_target = (2 + eps) * d / log(f);
  out.ratio = out.bound / out.asymptotic_target;
  return out;
}

template <class Real>
struct TheoremNumbers {
  Real independence_lb{};  ///< (1/2 - eps)(n/Delta) log f
  Real chif_ub{};          ///< (2 + eps) Delta / log f
  /// Set when the finite bound from chif_upper does not yet reach chif_ub
  /// (or cannot be evaluated): the asymptotic statements are then only trends.
  bool below_asymptotic_regime = true;
};

template <class Real = long double>
TheoremNumbers<Real> theorem_numbers(std::size_t n, std::size_t delta, const Real& f, const Real& eps) {
  using std::log;
  if (delta < 1) throw std::domain_error("bounds need maximum degree >= 1");
  if (!(f > 1)) throw std::domain_error("f must exceed 1");
  const Real d = static_cast<Real>(delta);
  TheoremNumbers<Real> out;
  out.independence_lb = (Real(1) / 2 - eps) * (static_cast<Real>(n) / d) * log(f);
  out.chif_ub = (2 + eps) * d / log(f);
  try {
    out.below_asymptotic_regime = !(chif_upper(delta, f, eps).bound <= out.chif_ub);
  } catch (const std::domain_error&) {
    out.below_asymptotic_regime = true;
  }
  return out;
}

template <class Real>
struct BasicBounds {
  Real independence_lb{};  ///< f / (1 + sqrt(1 + 2f^2 / (n log min{f, n})))
  Real chromatic_ub{};     ///< 2 (1 + sqrt(...)) n / f, the (2 + o(1)) factor taken as 2
  bool asymptotic = true;  ///< both carry a (1 + o(1)) factor
};

/// Independence and chromatic bounds when each vertex lies in at most
/// deg(v)^2/f triangles, without a degree parameter.
template <class Real = long double>
BasicBounds<Real> basic_bounds(std::size_t n, const Real& f) {
  using std::log;
  using std::min;
  using std::sqrt;
  const Real nn = static_cast<Real>(n);
  if (n < 2) throw std::domain_error("basic_bounds needs n >= 2");
  if (!(f >= 2) || f > (nn - 1) * (nn - 1) + 1) throw std::domain_error("basic_bounds needs 2 <= f <= (n-1)^2 + 1");
  const Real root = 1 + sqrt(1 + 2 * f * f / (nn * log(min(f, nn))));
  BasicBounds<Real> out;
  out.independence_lb = f / root;
  out.chromatic_ub = 2 * root * nn / f;
  return out;
}

template <class Real>
struct BoundReport {
  std::size_t delta = 0;
  Real f{};
  Real lambda{};
  ZSolution<Real> z;
  OccupancyBound<Real> occ_lower;
  AsymptoticOccupancy<Real> asymptotic_occ;
  AlphaBeta<Real> certificate;
  Real chif_upper{};  ///< alpha + beta Delta at this lambda
  std::optional<Real> eps;
  std::optional<ChifUpper<Real>> tuned;
  std::optional<std::size_t> n;
  std::optional<TheoremNumbers<Real>> theorem;
  std::optional<BasicBounds<Real>> basic;
};

/// Everything the bound machinery says about (Delta, f, lambda); eps and n
/// add the tuned-fugacity and theorem-level numbers when supplied.
template <class Real = long double>
BoundReport<Real> bound_report(std::size_t delta, const Real& f, const Real& lambda,
                               std::optional<Real> eps = std::nullopt, std::optional<std::size_t> n = std::nullopt) {
  BoundReport<Real> r;
  r.delta = delta;
  r.f = f;
  r.lambda = lambda;
  r.z = solve_z(delta, f, lambda);
  r.occ_lower = occupancy_lower_bound(delta, f, lambda);
  r.asymptotic_occ = asymptotic_occupancy(delta, lambda, std::optional<Real>(f));
  r.certificate = alpha_beta(delta, f, lambda);
  r.chif_upper = r.certificate.alpha + r.certificate.beta * static_cast<Real>(delta);
  r.eps = eps;
  r.n = n;
  if (eps && f >= 2) {
    try {
      r.tuned = chif_upper(delta, f, *eps);
    } catch (const std::domain_error&) {
      // No finite tuned fugacity at this scale; the report omits it.
    }
  }
  if (eps && n) r.theorem = theorem_numbers(*n, delta, f, *eps);
  if (n && *n >= 2 && f >= 2 && f <= Real((*n - 1) * (*n - 1) + 1)) r.basic = basic_bounds(*n, f);
  return r;
}

}  // namespace hcm
