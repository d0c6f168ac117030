#pragma once

#include <array>
#include <string>
#include <vector>

#include "hardycert/instance.hpp"
#include "hardycert/quadrature.hpp"

namespace hardycert {

struct CriteriaOptions {
  QuadOptions quad = QuadOptions::from_env();
  SupOptions sup{};
  /// Initial covering range for the discrete criterion A; extended automatically.
  int k_min = -40;
  int k_max = 40;
};

enum class Regime { r_lt_1, r_ge_1 };

struct NamedValue {
  std::string name;
  double value;
};

struct CriteriaReport {
  Regime regime = Regime::r_ge_1;
  /// Every computed functional in a fixed order: the main triple first.
  std::vector<NamedValue> values;
  double aggregate = 0.0;
  double quadrature_error = 0.0;

  /// Value by name; throws std::out_of_range when absent.
  double value(const std::string& name) const;
  bool has(const std::string& name) const;
  std::array<double, 3> triple() const;
};

/// G1, G2, G3 (requires r >= 1).
std::array<double, 3> compute_G(const ProblemInstance& p, const CriteriaOptions& opts = {});
/// F1, F2, F3 (requires r < 1).
std::array<double, 3> compute_F(const ProblemInstance& p, const CriteriaOptions& opts = {});

/// (D1, D2) when r >= 1, (E1, E2) when r < 1; reads v directly through 1/v.
std::array<double, 2> supremal_criteria(const ProblemInstance& p, const CriteriaOptions& opts = {});

/// Criteria for (int (int_x^inf k(x,y) h(y) dy)^p omega(x) dx)^{1/p} <= C int h v with
/// k(x,y) = int_x^y kernel_base: (O1, O2) when p >= 1, (K1, K2) when p < 1.
std::array<double, 2> kernel_criteria(const PiecewisePower& outer, const PiecewisePower& v,
                                      double exponent, const PiecewisePower& kernel_base,
                                      const CriteriaOptions& opts = {});

/// Tail criterion B for a non-decreasing v_mono.
double tail_criterion_B(const ProblemInstance& p, const PiecewisePower& v_mono,
                        const CriteriaOptions& opts = {});

CriteriaReport criteria_constant(const ProblemInstance& p, const CriteriaOptions& opts = {});

}  // namespace hardycert
