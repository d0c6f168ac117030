#pragma once

#include <optional>
#include <vector>

#include "hardycert/weightfn.hpp"

namespace hardycert {

/// Evaluates log esup_{s >= t} W(t,s)^a * m(s)^b with W(t,s) = int_t^s w, a > 0, b >= 0.
///
/// On every interval where w and m are single power pieces the logarithm of
/// the product has a monotone derivative in ln s, so its maximum is attained at
/// an end or at the unique stationary point, which has a closed form. The last
/// interval is closed off with the exact limit at infinity.
class TailSup {
 public:
  /// `m` empty means m is identically +inf.
  TailSup(PiecewisePower w, std::optional<PiecewisePower> m);

  double log_sup(double t, double a, double b) const;

 private:
  struct Segment {
    double lo, hi;
    PowerPiece w, m;
  };
  PiecewisePower w_;
  std::optional<PiecewisePower> m_;
  std::vector<Segment> segments_;
};

}  // namespace hardycert
