#pragma once

#include <optional>
#include <vector>

#include "hardycert/atomic.hpp"
#include "hardycert/instance.hpp"
#include "hardycert/quadrature.hpp"

namespace hardycert {

/// Points x_k with int_0^{x_k} u = 2^k for k = k_min, ..., k_min + points.size() - 1.
struct CoveringSequence {
  int k_min = 0;
  std::vector<double> points;
  double total_mass = 0.0;
  /// Defined for finite mass: 2^M <= mass < 2^{M+1}, or log2(mass) - 1 for exact powers of 2.
  std::optional<int> M;
  /// True when requested indices above M + 1 were dropped.
  bool truncated = false;

  int k_max() const { return k_min + static_cast<int>(points.size()) - 1; }
  double x(int k) const { return points.at(static_cast<std::size_t>(k - k_min)); }
};

CoveringSequence covering_sequence(const PiecewisePower& u, int k_min, int k_max);

struct BlockNorm {
  double value = 0.0;
  /// Index of the largest block term.
  int argmax_k = 0;
  int k_min = 0;
  int k_max = 0;
  /// Single-block bounds for the mass below x_{k_min} and above x_{k_max + 1}.
  double head_bound = 0.0;
  double tail_bound = 0.0;
};

/// l^rho norm of 2^{k/r} (int_{x_k}^{x_{k+1}} v_mono^-q w)^{1/q} over the blocks of `cov`.
BlockNorm discrete_block_A(const ProblemInstance& p, const CoveringSequence& cov,
                           const PiecewisePower& v_mono);

/// As discrete_block_A, widening [k_min, k_max] until both single-block
/// remainders fall below 1e-15 of the norm; +inf when they never do.
BlockNorm discrete_block_A_auto(const ProblemInstance& p, const PiecewisePower& v_mono,
                                int k_min = -40, int k_max = 40);

struct BlockDecomposition {
  double block_term = 0.0;
  double tail_term = 0.0;
};

BlockDecomposition block_decompose_lhs(const ProblemInstance& p, const CoveringSequence& cov,
                                       const AtomicFunction& h,
                                       const QuadOptions& quad = QuadOptions::from_env());

struct WeightedSequence {
  int first_index = 0;
  std::vector<double> values;
};

enum class GeomMode { sum, sup };

struct GeomResult {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Largest alpha with tau_k >= alpha tau_{k-1}.
  double alpha = 0.0;
};

/// Both sides of || tau_k sum_{m>=k} a_m ||_q ~ || tau_k a_k ||_q (or sup_{m>=k} a_m).
/// qexp may be +inf. Throws PreconditionError unless tau is geometrically increasing.
GeomResult geom_equivalence(const WeightedSequence& tau, const WeightedSequence& a, double qexp,
                            GeomMode mode);

struct EmbeddingResult {
  double rho_norm = 0.0;
  double bruteforce_lower = 0.0;
};

/// Norm of l^1(v) -> l^r(w): ||w/v||_rho, plus the best ratio found by direct search.
EmbeddingResult embedding_rho(const WeightedSequence& v, const WeightedSequence& w, double r,
                              unsigned long long seed = 1);

/// l^p quasi-norm of non-negative values (p may be +inf), computed with scaling.
double lp_norm(const std::vector<double>& values, double p);

}  // namespace hardycert
