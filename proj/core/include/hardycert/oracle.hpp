#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hardycert/atomic.hpp"
#include "hardycert/instance.hpp"
#include "hardycert/quadrature.hpp"

namespace hardycert {

/// Which left-hand side is evaluated on atomic h.
///   main:     (int u(x) (int_x^inf H(t)^q w(t) dt)^{r/q} dx)^{1/r}
///   supremal: (int u(t) sup_{s>t} (int_t^s w)^{r/q} H(s)^r dt)^{1/r}
///   kernel:   (int u(t) (int_t^inf (int_t^s w)^{1/q} h(s) ds)^r dt)^{1/r}
/// with H(t) = int_[t,inf) h.
enum class LhsForm { main, supremal, kernel };

enum class Exactness { exact_convex, lower_bound };

const char* to_string(Exactness e);

struct GridSpec {
  double lo = 1e-6;
  double hi = 1e6;
  int points = 4096;
};

struct OracleResult {
  double best_ratio = 0.0;
  AtomicFunction witness;
  Exactness exactness = Exactness::lower_bound;
  GridSpec grid;
  std::uint64_t seed = 0;
  int iterations = 0;
};

double lhs_eval(const ProblemInstance& p, const AtomicFunction& h, LhsForm form = LhsForm::main,
                const QuadOptions& quad = QuadOptions::from_env());
/// sum_j m_j v(y_j).
double rhs_eval(const ProblemInstance& p, const AtomicFunction& h);
/// sum_j m_j v_up(y_j).
double rhs_eval_env(const ProblemInstance& p, const AtomicFunction& h);

/// Left and right sides of the reflected inequality described by DualInstance.
double lhs_eval_dual(const DualInstance& d, const AtomicFunction& g,
                     const QuadOptions& quad = QuadOptions::from_env());
double rhs_eval_dual(const DualInstance& d, const AtomicFunction& g);

/// Best single-atom ratio lhs(delta_y) / v_up(y) over a log grid, refined by
/// golden section. With `raw_v` the denominator is replaced by
/// einf_{tau >= y} v(tau), read directly from v.
OracleResult dirac_scan(const ProblemInstance& p, const GridSpec& grid, bool raw_v = false,
                        const QuadOptions& quad = QuadOptions::from_env());

/// Multiplicative coordinate ascent on atom masses and positions.
OracleResult ascent_optimize(const ProblemInstance& p, int n_atoms, int iters, int restarts,
                             std::uint64_t seed, LhsForm form = LhsForm::main,
                             const GridSpec& grid = {},
                             const QuadOptions& quad = QuadOptions::from_env());

struct OracleBudget {
  GridSpec grid{};
  int atoms = 64;
  int iters = 2000;
  int restarts = 8;
  std::uint64_t seed = 1;
  /// Number of grid widenings used to detect unbounded ratios.
  int widenings = 3;
  /// Criteria aggregate, when known; sets the divergence threshold.
  std::optional<double> reference;
  QuadOptions quad = QuadOptions::from_env();
};

/// max(dirac_scan, ascent_optimize); +inf when the scanned ratio keeps exceeding
/// the threshold on successive widenings. The ascent is skipped for q, r >= 1,
/// where the scan is already exact.
OracleResult estimate_constant(const ProblemInstance& p, const OracleBudget& budget = {});

struct FormComparison {
  OracleResult supremal;
  OracleResult kernel;
};

/// Best atomic ratios for the supremal and kernel forms (scan plus ascent).
/// The supremal witness is also tried in the kernel form, which dominates it pointwise.
FormComparison compare_forms(const ProblemInstance& p, const OracleBudget& budget);

}  // namespace hardycert
