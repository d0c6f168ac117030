#pragma once

#include <functional>
#include <span>

namespace hardycert {

/// Log-density callback: x -> log f(x), with -inf for f(x) = 0.
using LogIntegrand = std::function<double(double)>;

struct QuadOptions {
  double rel_tol = 1e-9;
  /// Tails are truncated once the geometric remainder drops below this fraction.
  double tail_tol = 1e-12;
  /// Maximal initial panel width in ln x.
  double panel_width = 1.0;
  /// Tails are followed at most this many decades beyond the outermost breakpoint.
  double tail_decades = 60.0;
  int max_panels = 6000;

  /// Defaults with rel_tol taken from HARDYCERT_QUAD_TOL when set.
  static QuadOptions from_env();
};

struct QuadResult {
  double log_value = 0.0;  // log of the integral; +inf when divergent, -inf when zero
  double rel_error = 0.0;
  bool converged = true;
};

/// log int_a^b f(x) dx for 0 <= a < b <= inf.
///
/// Works in y = ln x with Gauss-Legendre panels split at the given breakpoints.
/// Panels are refined globally (worst error first) until the summed error is
/// below rel_tol of the total. Semi-infinite tails are followed outward until
/// the panel values decay geometrically below tail_tol, and are declared
/// divergent when they fail to decay within tail_decades.
QuadResult integrate_log(const LogIntegrand& log_f, double a, double b,
                         std::span<const double> breaks, const QuadOptions& opts);

struct SupOptions {
  int per_interval = 24;
  double extend_decades = 8.0;
  double far_step_decades = 5.0;
  double far_decades = 60.0;
  double golden_tol = 1e-10;  // absolute, in ln t
  /// Log-slope per unit ln t above which a boundary trend counts as growth.
  double growth_slope = 1e-7;
};

struct SupResult {
  double log_value = 0.0;  // +inf when unbounded, -inf when F vanishes
  double argmax = 0.0;     // t of the best candidate (0 or inf for boundary limits)
};

/// log sup_{t > 0} F(t) for a log-valued F that is piecewise smooth between anchors.
SupResult sup_over_t(const std::function<double(double)>& log_F, std::span<const double> anchors,
                     const SupOptions& opts = {});

}  // namespace hardycert
