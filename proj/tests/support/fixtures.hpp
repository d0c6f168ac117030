#pragma once

#include <cstdint>
#include <optional>

#include "generator.hpp"
#include "hardycert/hardycert.hpp"

namespace hardycert::testing {

inline PiecewisePower one() { return PiecewisePower::constant(1.0); }

inline PiecewisePower two_piece(double e0, double e1, double cut = 1.0, double c1 = 1.0) {
  return PiecewisePower({{0.0, cut, 1.0, e0}, {cut, kInf, c1, e1}});
}

/// u = 1, w = 1, v = x^2, q = r = 1.
inline ProblemInstance canonical() {
  return ProblemInstance(one(), PiecewisePower::power(1.0, 2.0), one(), 1.0, 1.0);
}

/// u = {1, x^-4}, v = {1, x^3}, w = 1, q = 1, r = 1/2.
inline ProblemInstance steep_tail_instance() {
  return ProblemInstance(two_piece(0.0, -4.0), two_piece(0.0, 3.0), one(), 1.0, 0.5);
}

inline ProblemInstance random_instance(std::uint64_t seed, cli::RegimeSel regime,
                                       std::optional<double> q = std::nullopt) {
  return cli::gen_random_instance(seed, regime, q).instance();
}

inline bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace hardycert::testing
