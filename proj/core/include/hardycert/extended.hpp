#pragma once

#include <cmath>
#include <limits>
#include <utility>

// Extended non-negative reals are plain doubles with +inf as a first-class value.
// Products follow the 0 * inf = 0 convention.

namespace hardycert {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline bool is_inf(double x) { return x == kInf; }

/// a * b with 0 * inf = 0.
inline double mul0(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

/// log of a non-negative extended real: log(0) = -inf, log(inf) = inf.
inline double ext_log(double x) {
  if (x <= 0.0) return kNegInf;
  return std::log(x);
}

/// exp of a log-domain value; saturates to inf on overflow.
inline double ext_exp(double lx) {
  if (lx == kNegInf) return 0.0;
  return std::exp(lx);
}

/// p * lx in the log domain, with 0 * (+-inf) = 0 so that x^0 = 1 for every x.
inline double log_pow(double lx, double p) {
  if (p == 0.0) return 0.0;
  return p * lx;
}

/// Sum of log-domain terms with the convention (-inf) + (+inf) = -inf,
/// i.e. a vanishing factor kills an infinite one.
inline double log_mul(double la, double lb) {
  if (la == kNegInf || lb == kNegInf) return kNegInf;
  return la + lb;
}

/// log(exp(la) + exp(lb)).
inline double log_add(double la, double lb) {
  if (la == kNegInf) return lb;
  if (lb == kNegInf) return la;
  if (la == kInf || lb == kInf) return kInf;
  if (la < lb) std::swap(la, lb);
  return la + std::log1p(std::exp(lb - la));
}

}  // namespace hardycert
