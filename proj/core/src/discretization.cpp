#include "hardycert/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"

namespace hardycert {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kIndexCap = 1000;
constexpr double kTruncationTol = 1e-15;

/// log of the l^p norm of exp(logs); p may be +inf.
double log_lp(const std::vector<double>& logs, double p) {
  double peak = kNegInf;
  for (double l : logs) peak = std::max(peak, l);
  if (peak == kNegInf || peak == kInf || p == kInf) return peak;
  double s = 0.0;
  for (double l : logs) s += std::exp(p * (l - peak));
  return peak + std::log(s) / p;
}

struct BlockTerms {
  std::vector<double> logs;  // log block term for k = k_min + i
  double log_head = kNegInf;
  double log_tail = kNegInf;
  int k_min = 0;
};

BlockTerms block_terms(const ProblemInstance& p, const CoveringSequence& cov,
                       const std::optional<PiecewisePower>& psi) {
  BlockTerms bt;
  bt.k_min = cov.k_min;
  const double q = p.q(), r = p.r();
  for (std::size_t i = 0; i + 1 < cov.points.size(); ++i) {
    const int k = cov.k_min + static_cast<int>(i);
    const double lI = psi ? psi->log_integrate(cov.points[i], cov.points[i + 1]) : kInf;
    bt.logs.push_back(k * kLn2 / r + lI / q);
  }
  if (!cov.points.empty()) {
    const double lI0 = psi ? psi->log_integrate(0.0, cov.points.front()) : kInf;
    bt.log_head = (cov.k_min - 1) * kLn2 / r + lI0 / q;
    const double top = cov.points.back();
    if (top < kInf) {
      const double lI1 = psi ? psi->log_integrate(top, kInf) : kInf;
      bt.log_tail = cov.k_max() * kLn2 / r + lI1 / q;
    }
  }
  return bt;
}

std::optional<PiecewisePower> block_density(const ProblemInstance& p, const PiecewisePower& vm) {
  if (!vm.is_nondecreasing())
    throw PreconditionError("discrete criterion A: v_mono must be non-decreasing");
  for (const auto& piece : vm.pieces()) {
    if (piece.coeff == 0.0) return std::nullopt;
  }
  return vm.pow(-p.q()) * p.w();
}

BlockNorm finish(const BlockTerms& bt, double rho, int k_max) {
  BlockNorm res;
  res.k_min = bt.k_min;
  res.k_max = k_max;
  res.value = ext_exp(log_lp(bt.logs, rho));
  double best = kNegInf;
  for (std::size_t i = 0; i < bt.logs.size(); ++i) {
    if (bt.logs[i] > best) {
      best = bt.logs[i];
      res.argmax_k = bt.k_min + static_cast<int>(i);
    }
  }
  res.head_bound = ext_exp(bt.log_head);
  res.tail_bound = ext_exp(bt.log_tail);
  return res;
}

/// Whether the terms beyond one end of the range are certified negligible.
/// `outward` is ordered outward: outward[0] is the outermost term.
bool end_settled(const std::vector<double>& outward, double log_bound, bool bound_valid,
                 double log_total, double rho) {
  const double log_tol = std::log(kTruncationTol);
  if (log_bound == kNegInf) return true;
  if (bound_valid && log_bound < log_total + log_tol) return true;
  if (outward.size() < 4) return false;
  for (int i = 0; i < 3; ++i) {
    if (outward[i] == kInf) return false;
  }
  if (outward[0] == kNegInf) return true;
  if (rho == kInf) {
    // The tail of a sup norm is settled once the terms decrease outward.
    return outward[0] <= outward[1] + 1e-12 && outward[1] <= outward[2] + 1e-12;
  }
  const double d1 = outward[0] - outward[1];
  const double d2 = outward[1] - outward[2];
  if (!(d1 < 0.0 && d2 < 0.0)) return false;
  const double ratio = std::exp(rho * d1);
  const double rem = rho * outward[0] + std::log(ratio / (1.0 - ratio));
  // Relative to the sum of rho-th powers, so that rho < 1 does not loosen the tolerance.
  return rem < rho * log_total + log_tol;
}

}  // namespace

CoveringSequence covering_sequence(const PiecewisePower& u, int k_min, int k_max) {
  if (k_min > k_max) throw DomainError("covering_sequence: k_min > k_max");
  if (k_min < -kIndexCap || k_max > kIndexCap)
    throw DomainError("covering_sequence: indices limited to [-1000, 1000]");
  CoveringSequence cov;
  cov.k_min = k_min;
  cov.total_mass = u.total_mass();
  int k_end = k_max;
  if (cov.total_mass < kInf) {
    int e = 0;
    const double f = std::frexp(cov.total_mass, &e);  // mass = f 2^e, f in [1/2, 1)
    cov.M = f == 0.5 ? e - 2 : e - 1;
    if (k_end > *cov.M + 1) {
      k_end = *cov.M + 1;
      cov.truncated = true;
    }
  }
  for (int k = k_min; k <= k_end; ++k) {
    const double x = cov.M && k == *cov.M + 1 ? kInf : u.invert_cumulative(std::ldexp(1.0, k));
    cov.points.push_back(x);
  }
  return cov;
}

BlockNorm discrete_block_A(const ProblemInstance& p, const CoveringSequence& cov,
                           const PiecewisePower& v_mono) {
  const auto psi = block_density(p, v_mono);
  return finish(block_terms(p, cov, psi), p.exps().rho, cov.k_max() - 1);
}

BlockNorm discrete_block_A_auto(const ProblemInstance& p, const PiecewisePower& v_mono, int k_min,
                                int k_max) {
  const auto psi = block_density(p, v_mono);
  const double rho = p.exps().rho;
  for (;;) {
    const CoveringSequence cov = covering_sequence(p.u(), k_min, k_max);
    BlockTerms bt = block_terms(p, cov, psi);
    // Covering points that underflow to 0 or overflow to inf (with infinite mass) do not
    // delimit real blocks; such blocks are dropped and that end can no longer be widened.
    std::size_t first = 0, last = bt.logs.size();
    while (first < last && !(cov.points[first] > 0.0)) ++first;
    const bool overflow = !cov.M && cov.points.back() == kInf;
    if (overflow) {
      while (last > first && cov.points[last] == kInf) --last;
    }
    const bool head_stuck = first > 0, tail_stuck = overflow;
    bt.logs = std::vector<double>(bt.logs.begin() + static_cast<std::ptrdiff_t>(first),
                                  bt.logs.begin() + static_cast<std::ptrdiff_t>(last));
    bt.k_min = cov.k_min + static_cast<int>(first);
    BlockNorm res = finish(bt, rho, cov.k_min + static_cast<int>(last) - 1);
    const double log_total = log_lp(bt.logs, rho);
    if (log_total == kInf) return res;

    std::vector<double> left(bt.logs.begin(), bt.logs.end());
    std::vector<double> right(bt.logs.rbegin(), bt.logs.rend());
    // Below x_{k_min} the factor 2^{k/r} only shrinks, so the single-block head term bounds
    // the rest when the l^rho sum is dominated by (sum of blocks)^{rho/q}. Above x_{k_max}
    // it grows and only the outward decay of the terms is evidence.
    const bool head_ok =
        end_settled(left, head_stuck ? kInf : bt.log_head, rho >= p.q(), log_total, rho);
    const bool tail_ok = (cov.M && cov.points.back() == kInf) ||
                         end_settled(right, tail_stuck ? kInf : bt.log_tail, false, log_total, rho);
    if (head_ok && tail_ok) return res;

    const bool can_widen = (!head_ok && !head_stuck && k_min > -kIndexCap) ||
                           (!tail_ok && !tail_stuck && k_max < kIndexCap);
    if (!can_widen) {
      res.value = kInf;
      return res;
    }
    if (!head_ok && !head_stuck) k_min = std::max(-kIndexCap, k_min - 80);
    if (!tail_ok && !tail_stuck) k_max = std::min(kIndexCap, k_max + 80);
  }
}

BlockDecomposition block_decompose_lhs(const ProblemInstance& p, const CoveringSequence& cov,
                                       const AtomicFunction& h, const QuadOptions& quad) {
  BlockDecomposition out;
  if (h.empty()) return out;
  const double q = p.q(), r = p.r();
  const auto& u = p.u();
  const auto& w = p.w();
  const auto& atoms = h.atoms();

  auto x_of = [&](int k) {
    if (cov.M && k == *cov.M + 1) return kInf;
    if (k >= cov.k_min && k <= cov.k_max()) return cov.x(k);
    return u.invert_cumulative(std::ldexp(1.0, k));
  };
  auto block_of = [&](double y) {
    const double U = u.cumulative(y);
    int k = static_cast<int>(std::ceil(std::log2(U))) - 1;
    while (std::ldexp(1.0, k + 1) < U) ++k;
    while (std::ldexp(1.0, k) >= U) --k;
    if (cov.M) k = std::min(k, *cov.M);
    return k;
  };

  std::vector<double> block_logs;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const int k = block_of(atoms[i].position);
    std::size_t j = i;
    while (j < atoms.size() && block_of(atoms[j].position) == k) ++j;
    // Atoms i..j-1 share block k; tails are closed at each atom.
    double tail = 0.0;
    std::vector<double> tails(j - i);
    for (std::size_t m = j; m-- > i;) {
      tail += atoms[m].mass;
      tails[m - i] = tail;
    }
    double prev = std::min(x_of(k), atoms[i].position);
    double integral = 0.0;
    for (std::size_t m = i; m < j; ++m) {
      integral += std::pow(tails[m - i], q) * w.integrate(prev, atoms[m].position);
      prev = atoms[m].position;
    }
    block_logs.push_back(k * kLn2 / r + ext_log(integral) / q);
    i = j;
  }
  out.block_term = ext_exp(log_lp(block_logs, r));

  std::vector<double> closed_tails(atoms.size());
  double acc = 0.0;
  for (std::size_t m = atoms.size(); m-- > 0;) {
    acc += atoms[m].mass;
    closed_tails[m] = acc;
  }
  auto log_integrand = [&](double t) {
    double best = kNegInf;
    for (std::size_t m = 0; m < atoms.size(); ++m) {
      const double y = atoms[m].position;
      if (!(y > t)) continue;
      best = std::max(best, (r / q) * w.log_integrate(t, y) + r * std::log(closed_tails[m]));
    }
    return log_mul(ext_log(u(t)), best);
  };
  std::vector<double> breaks;
  for (const auto& a : atoms) breaks.push_back(a.position);
  for (double b : u.breakpoints()) breaks.push_back(b);
  for (double b : w.breakpoints()) breaks.push_back(b);
  const QuadResult res = integrate_log(log_integrand, 0.0, atoms.back().position, breaks, quad);
  out.tail_term = ext_exp(res.log_value / r);
  return out;
}

GeomResult geom_equivalence(const WeightedSequence& tau, const WeightedSequence& a, double qexp,
                            GeomMode mode) {
  if (tau.first_index != a.first_index || tau.values.size() != a.values.size())
    throw DomainError("geom_equivalence: index sets differ");
  if (!(qexp > 0.0)) throw DomainError("geom_equivalence: exponent must be positive");
  const std::size_t n = tau.values.size();
  GeomResult res;
  res.alpha = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(tau.values[k] > 0.0)) throw PreconditionError("geom_equivalence: tau must be positive");
    if (!(a.values[k] >= 0.0)) throw DomainError("geom_equivalence: a must be non-negative");
    if (k > 0) res.alpha = std::min(res.alpha, tau.values[k] / tau.values[k - 1]);
  }
  if (!(res.alpha > 1.0))
    throw PreconditionError("geom_equivalence: tau is not geometrically increasing");
  std::vector<double> inner(n), lhs(n), rhs(n);
  double acc = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    acc = mode == GeomMode::sum ? acc + a.values[k] : std::max(acc, a.values[k]);
    inner[k] = acc;
  }
  for (std::size_t k = 0; k < n; ++k) {
    lhs[k] = tau.values[k] * inner[k];
    rhs[k] = tau.values[k] * a.values[k];
  }
  res.lhs = lp_norm(lhs, qexp);
  res.rhs = lp_norm(rhs, qexp);
  return res;
}

double lp_norm(const std::vector<double>& values, double p) {
  double peak = 0.0;
  for (double x : values) peak = std::max(peak, x);
  if (peak == 0.0 || p == kInf || peak == kInf) return peak;
  double s = 0.0;
  for (double x : values) s += std::pow(x / peak, p);
  return peak * std::pow(s, 1.0 / p);
}

EmbeddingResult embedding_rho(const WeightedSequence& v, const WeightedSequence& w, double r,
                              unsigned long long seed) {
  if (v.first_index != w.first_index || v.values.size() != w.values.size())
    throw DomainError("embedding_rho: index sets differ");
  if (!(r > 0.0)) throw DomainError("embedding_rho: r must be positive");
  const std::size_t n = v.values.size();
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(v.values[k] > 0.0) || !(w.values[k] > 0.0))
      throw DomainError("embedding_rho: weights must be positive");
    c[k] = w.values[k] / v.values[k];
  }
  const double rho = r < 1.0 ? r / (1.0 - r) : kInf;
  EmbeddingResult res;
  res.rho_norm = lp_norm(c, rho);

  std::vector<double> aw(n), av(n);
  const double round_down = 1.0 - 4.0 * static_cast<double>(n + 8) * std::numeric_limits<double>::epsilon();
  auto ratio = [&](const std::vector<double>& a) {
    for (std::size_t k = 0; k < n; ++k) {
      aw[k] = a[k] * w.values[k];
      av[k] = a[k] * v.values[k];
    }
    // Rounded down by a bound on the accumulated rounding error, so the result stays a lower bound.
    return lp_norm(aw, r) / lp_norm(av, 1.0) * round_down;
  };

  std::vector<double> a(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(a.begin(), a.end(), 0.0);
    a[k] = 1.0;
    res.bruteforce_lower = std::max(res.bruteforce_lower, ratio(a));
  }
  if (r < 1.0) {
    // Equality case of Hoelder: a_k v_k proportional to (w_k / v_k)^rho.
    const double peak = *std::max_element(c.begin(), c.end());
    for (std::size_t k = 0; k < n; ++k) a[k] = std::pow(c[k] / peak, rho) / v.values[k];
    res.bruteforce_lower = std::max(res.bruteforce_lower, ratio(a));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    for (std::size_t k = 0; k < n; ++k) a[k] = std::exp(unif(rng)) / v.values[k];
    res.bruteforce_lower = std::max(res.bruteforce_lower, ratio(a));
  }
  return res;
}

}  // namespace hardycert
