#include "hardycert/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"

namespace hardycert {

const char* to_string(Exactness e) {
  return e == Exactness::exact_convex ? "exact_convex" : "lower_bound";
}

namespace {

/// Prefix data of an atomic h for the three left-hand-side forms.
struct AtomTable {
  std::vector<double> y, log_m;
  std::vector<double> log_S;    // closed tails: log sum_{i >= j} m_i
  std::vector<double> seg_W;    // W(y_{j-1}, y_j), seg_W[0] unused
  std::vector<double> log_C;    // log sum_{i > j} S_i^q W(y_{i-1}, y_i)
};

AtomTable make_table(const PiecewisePower& w, double q, const std::vector<double>& y,
                     const std::vector<double>& m) {
  const std::size_t n = y.size();
  AtomTable t;
  t.y = y;
  t.log_m.resize(n);
  t.log_S.resize(n);
  t.seg_W.assign(n, 0.0);
  t.log_C.assign(n, kNegInf);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc += m[j];
    t.log_S[j] = std::log(acc);
    t.log_m[j] = std::log(m[j]);
  }
  for (std::size_t j = 1; j < n; ++j) t.seg_W[j] = w.integrate(y[j - 1], y[j]);
  for (std::size_t j = n - 1; j-- > 0;)
    t.log_C[j] = log_add(t.log_C[j + 1], q * t.log_S[j + 1] + ext_log(t.seg_W[j + 1]));
  return t;
}

/// log of the h-dependent integrand factor at x in (y_{j-1}, y_j].
double log_factor(const AtomTable& t, std::size_t j, double x, double W_xj, double q, double r,
                  LhsForm form) {
  switch (form) {
    case LhsForm::main:
      return (r / q) * log_add(q * t.log_S[j] + ext_log(W_xj), t.log_C[j]);
    case LhsForm::supremal: {
      double best = kNegInf;
      double W = W_xj;
      for (std::size_t i = j; i < t.y.size(); ++i) {
        if (i > j) W += t.seg_W[i];
        best = std::max(best, (r / q) * ext_log(W) + r * t.log_S[i]);
      }
      return best;
    }
    case LhsForm::kernel: {
      double s = kNegInf;
      double W = W_xj;
      for (std::size_t i = j; i < t.y.size(); ++i) {
        if (i > j) W += t.seg_W[i];
        s = log_add(s, t.log_m[i] + ext_log(W) / q);
      }
      return r * s;
    }
  }
  (void)x;
  return kNegInf;
}

double log_lhs_r_precise(const ProblemInstance& p, const AtomTable& t, LhsForm form,
                         const QuadOptions& quad) {
  const double q = p.q(), r = p.r();
  const auto& u = p.u();
  const auto& w = p.w();
  auto f = [&](double x) {
    const auto it = std::lower_bound(t.y.begin(), t.y.end(), x);
    if (it == t.y.end()) return kNegInf;
    const auto j = static_cast<std::size_t>(it - t.y.begin());
    const double W = w.integrate(x, t.y[j]);
    return log_mul(ext_log(u(x)), log_factor(t, j, x, W, q, r, form));
  };
  std::vector<double> breaks(t.y.begin(), t.y.end());
  for (double b : u.breakpoints()) breaks.push_back(b);
  for (double b : w.breakpoints()) breaks.push_back(b);
  return integrate_log(f, 0.0, t.y.back(), breaks, quad).log_value;
}

std::vector<double> positions(const AtomicFunction& h) {
  std::vector<double> y;
  for (const auto& a : h.atoms()) y.push_back(a.position);
  return y;
}

std::vector<double> masses(const AtomicFunction& h) {
  std::vector<double> m;
  for (const auto& a : h.atoms()) m.push_back(a.mass);
  return m;
}

/// Fixed-node quadrature of the same integrand, used inside the ascent.
class FastLhs {
 public:
  FastLhs(const ProblemInstance& p, LhsForm form) : p_(p), form_(form) {
    const PiecewisePower* fs[] = {&p.u(), &p.w()};
    breaks_ = merged_breakpoints(fs);
  }

  /// log of LHS(h)^r.
  double log_lhs_r(const std::vector<double>& y, const std::vector<double>& m) const {
    const AtomTable t = make_table(p_.w(), p_.q(), y, m);
    terms_.clear();
    const double ly0 = std::log(y.front());
    static constexpr std::array<double, 7> head{-30.0, -16.0, -8.0, -4.0, -2.0, -1.0, 0.0};
    for (std::size_t k = 0; k + 1 < head.size(); ++k) panel(t, 0, ly0 + head[k], ly0 + head[k + 1]);
    // Remainder below the first head panel, with the factor frozen at its left end.
    const double x0 = std::exp(ly0 + head.front());
    const double W0 = p_.w().integrate(x0, y.front());
    terms_.push_back(log_mul(p_.u().log_integrate(0.0, x0),
                             log_factor(t, 0, x0, W0, p_.q(), p_.r(), form_)));
    for (std::size_t j = 1; j < y.size(); ++j) {
      double a = std::log(y[j - 1]);
      const double b = std::log(y[j]);
      auto it = std::upper_bound(breaks_.begin(), breaks_.end(), y[j - 1]);
      for (; it != breaks_.end() && *it < y[j]; ++it) {
        const double c = std::log(*it);
        split(t, j, a, c);
        a = c;
      }
      split(t, j, a, b);
    }
    double peak = kNegInf;
    for (double v : terms_) peak = std::max(peak, v);
    if (peak == kNegInf || peak == kInf) return peak;
    double s = 0.0;
    for (double v : terms_) s += std::exp(v - peak);
    return peak + std::log(s);
  }

 private:
  static constexpr int kN = 6;

  void split(const AtomTable& t, std::size_t j, double a, double b) const {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / 2.0)));
    for (int k = 0; k < n; ++k) panel(t, j, a + (b - a) * k / n, a + (b - a) * (k + 1) / n);
  }

  void panel(const AtomTable& t, std::size_t j, double a, double b) const {
    static constexpr std::array<double, kN> x{-0.9324695142031521, -0.6612093864662645,
                                              -0.2386191860831969, 0.2386191860831969,
                                              0.6612093864662645,  0.9324695142031521};
    static constexpr std::array<double, kN> wt{0.1713244923791704, 0.3607615730481386,
                                               0.4679139345726910, 0.4679139345726910,
                                               0.3607615730481386, 0.1713244923791704};
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    if (!(half > 0.0)) return;
    const double lh = std::log(half);
    for (int i = 0; i < kN; ++i) {
      const double ly = mid + half * x[i];
      const double xv = std::exp(ly);
      const double W = xv < t.y[j] ? p_.w().integrate(xv, t.y[j]) : 0.0;
      const double lf =
          log_mul(ext_log(p_.u()(xv)), log_factor(t, j, xv, W, p_.q(), p_.r(), form_));
      terms_.push_back(lf + ly + std::log(wt[i]) + lh);
    }
  }

  const ProblemInstance& p_;
  LhsForm form_;
  std::vector<double> breaks_;
  mutable std::vector<double> terms_;
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double ratio_of(const ProblemInstance& p, const AtomicFunction& h, LhsForm form,
                const QuadOptions& quad) {
  const double rhs = rhs_eval(p, h);
  const double lhs = lhs_eval(p, h, form, quad);
  if (lhs == 0.0) return 0.0;
  return lhs / rhs;
}

}  // namespace

double lhs_eval(const ProblemInstance& p, const AtomicFunction& h, LhsForm form,
                const QuadOptions& quad) {
  if (h.empty()) return 0.0;
  const AtomTable t = make_table(p.w(), p.q(), positions(h), masses(h));
  return ext_exp(log_lhs_r_precise(p, t, form, quad) / p.r());
}

double rhs_eval(const ProblemInstance& p, const AtomicFunction& h) {
  double s = 0.0;
  for (const auto& a : h.atoms()) s += a.mass * p.v()(a.position);
  return s;
}

double rhs_eval_env(const ProblemInstance& p, const AtomicFunction& h) {
  double s = 0.0;
  for (const auto& a : h.atoms()) s += mul0(a.mass, p.v_up()(a.position));
  return s;
}

double lhs_eval_dual(const DualInstance& d, const AtomicFunction& g, const QuadOptions& quad) {
  if (g.empty()) return 0.0;
  const auto z = positions(g);
  const auto m = masses(g);
  const std::size_t n = z.size();
  // Closed heads T_j = sum_{i <= j} m_i and D_j = int_0^{z_j} T^q W.
  std::vector<double> log_T(n), log_D(n, kNegInf);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += m[j];
    log_T[j] = std::log(acc);
    if (j > 0)
      log_D[j] = log_add(log_D[j - 1], d.q * log_T[j - 1] + d.w.log_integrate(z[j - 1], z[j]));
  }
  auto f = [&](double x) {
    auto it = std::upper_bound(z.begin(), z.end(), x);
    if (it == z.begin()) return kNegInf;
    const auto j = static_cast<std::size_t>(it - z.begin()) - 1;
    const double J = log_add(log_D[j], d.q * log_T[j] + d.w.log_integrate(z[j], x));
    return log_mul(ext_log(d.u(x)), (d.r / d.q) * J);
  };
  std::vector<double> breaks(z.begin(), z.end());
  for (double b : d.u.breakpoints()) breaks.push_back(b);
  for (double b : d.w.breakpoints()) breaks.push_back(b);
  const QuadResult res = integrate_log(f, z.front(), kInf, breaks, quad);
  return ext_exp(res.log_value / d.r);
}

double rhs_eval_dual(const DualInstance& d, const AtomicFunction& g) {
  double s = 0.0;
  for (const auto& a : g.atoms()) s += a.mass * d.v(a.position);
  return s;
}

OracleResult dirac_scan(const ProblemInstance& p, const GridSpec& grid, bool raw_v,
                        const QuadOptions& quad) {
  if (!(grid.lo > 0.0) || !(grid.hi >= grid.lo) || grid.points < 1)
    throw DomainError("dirac_scan: invalid grid");
  OracleResult res;
  res.grid = grid;
  res.exactness =
      p.q() >= 1.0 && p.r() >= 1.0 ? Exactness::exact_convex : Exactness::lower_bound;

  auto log_ratio = [&](double ly) {
    const double y = std::exp(ly);
    const double denom = raw_v ? p.v().extremum(y, kInf, Extremum::einf) : p.v_up()(y);
    if (denom == 0.0) return kInf;
    const AtomicFunction h({{y, 1.0}});
    return ext_log(lhs_eval(p, h, LhsForm::main, quad)) - std::log(denom);
  };

  std::vector<double> ys;
  const double a = std::log(grid.lo), b = std::log(grid.hi);
  for (int i = 0; i < grid.points; ++i)
    ys.push_back(grid.points == 1 ? a : a + (b - a) * i / (grid.points - 1));
  for (const auto* f : {&p.u(), &p.v(), &p.w(), &p.v_up()}) {
    for (double x : f->breakpoints()) {
      if (x >= grid.lo && x <= grid.hi) ys.push_back(std::log(x));
    }
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  double best = kNegInf;
  std::size_t ib = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double v = log_ratio(ys[i]);
    if (v > best) {
      best = v;
      ib = i;
    }
    if (v == kInf) break;
  }
  double best_ly = ys[ib];
  if (best != kInf && ys.size() > 1) {
    double lo = ys[ib == 0 ? 0 : ib - 1];
    double hi = ys[std::min(ib + 1, ys.size() - 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = log_ratio(x1), f2 = log_ratio(x2);
    auto consider = [&](double x, double f) {
      if (f > best) {
        best = f;
        best_ly = x;
      }
    };
    consider(x1, f1);
    consider(x2, f2);
    while (hi - lo > 1e-12 && best != kInf) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = log_ratio(x2);
        consider(x2, f2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = log_ratio(x1);
        consider(x1, f1);
      }
    }
  }
  res.best_ratio = ext_exp(best);
  res.witness = AtomicFunction({{std::exp(best_ly), 1.0}});
  res.iterations = static_cast<int>(ys.size());
  return res;
}

OracleResult ascent_optimize(const ProblemInstance& p, int n_atoms, int iters, int restarts,
                             std::uint64_t seed, LhsForm form, const GridSpec& grid,
                             const QuadOptions& quad) {
  if (n_atoms < 1) throw DomainError("ascent_optimize: need at least one atom");
  if (iters < 0 || restarts < 1) throw DomainError("ascent_optimize: invalid budget");
  const FastLhs fast(p, form);
  const double r = p.r();
  const std::size_t n = static_cast<std::size_t>(n_atoms);
  const double la = std::log(grid.lo), lb = std::log(grid.hi);

  auto objective = [&](const std::vector<double>& y, const std::vector<double>& m) {
    double rhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) rhs += m[j] * p.v()(y[j]);
    return fast.log_lhs_r(y, m) / r - std::log(rhs);
  };

  OracleResult best;
  best.best_ratio = -1.0;
  best.exactness = Exactness::lower_bound;
  best.grid = grid;
  best.seed = seed;
  best.iterations = iters * restarts;

  for (int rs = 0; rs < restarts; ++rs) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rs + 1)));
    std::vector<double> y(n), m(n);
    if (rs == 0) {
      for (std::size_t j = 0; j < n; ++j) y[j] = std::exp(la + (lb - la) * (j + 0.5) / n);
      for (std::size_t j = 0; j < n; ++j) m[j] = 1.0 / p.v()(y[j]);
    } else {
      for (std::size_t j = 0; j < n; ++j) y[j] = std::exp(la + (lb - la) * uniform01(rng));
      std::sort(y.begin(), y.end());
      for (std::size_t j = 1; j < n; ++j) {
        if (!(y[j] > y[j - 1])) y[j] = std::nextafter(y[j - 1], kInf);
      }
      for (std::size_t j = 0; j < n; ++j) m[j] = std::exp(6.0 * uniform01(rng) - 3.0) / p.v()(y[j]);
    }

    double cur = iters > 0 ? objective(y, m) : 0.0;
    const double l_hi = std::log(2.0), l_lo = std::log1p(1e-4);
    for (int it = 0; it < iters; ++it) {
      const double frac = iters == 1 ? 0.0 : static_cast<double>(it) / (iters - 1);
      const double lf = l_hi * std::pow(l_lo / l_hi, frac);
      const double f = std::exp(lf);
      const std::size_t j = static_cast<std::size_t>(uniform01(rng) * n) % n;

      double best_val = cur;
      int best_move = -1;
      for (int move = 0; move < 4; ++move) {
        std::vector<double>& target = move < 2 ? m : y;
        const double old = target[j];
        const double nv = move % 2 == 0 ? old * f : old / f;
        if (move >= 2) {
          if ((j > 0 && !(nv > y[j - 1])) || (j + 1 < n && !(nv < y[j + 1]))) continue;
          if (!(nv > 0.0) || !std::isfinite(nv)) continue;
        }
        target[j] = nv;
        const double val = objective(y, m);
        target[j] = old;
        if (val > best_val + 1e-12) {
          best_val = val;
          best_move = move;
        }
      }
      if (best_move >= 0) {
        std::vector<double>& target = best_move < 2 ? m : y;
        target[j] = best_move % 2 == 0 ? target[j] * f : target[j] / f;
        cur = best_val;
      }
    }

    std::vector<Atom> atoms(n);
    for (std::size_t j = 0; j < n; ++j) atoms[j] = {y[j], m[j]};
    AtomicFunction h(std::move(atoms));
    const double ratio = ratio_of(p, h, form, quad);
    if (ratio > best.best_ratio) {
      best.best_ratio = ratio;
      best.witness = std::move(h);
    }
  }
  return best;
}

OracleResult estimate_constant(const ProblemInstance& p, const OracleBudget& budget) {
  const bool convex = p.q() >= 1.0 && p.r() >= 1.0;
  OracleResult best = dirac_scan(p, budget.grid, false, budget.quad);
  const double threshold =
      budget.reference && std::isfinite(*budget.reference) && *budget.reference > 0.0
          ? 1e6 * *budget.reference
          : 1e12;
  int above = best.best_ratio > threshold ? 1 : 0;
  // Widening j covers [lo / 10^{3j}, hi * 10^{3j}]. Only the two new end pieces are
  // scanned, at the density of the base grid; the rest is already in `best`.
  const double base_decades = std::log10(budget.grid.hi / budget.grid.lo);
  const int ext_points =
      base_decades > 0.0
          ? std::max(2, static_cast<int>(std::ceil(budget.grid.points * 3.0 / base_decades)))
          : std::max(2, budget.grid.points);
  for (int j = 1; j <= budget.widenings && best.best_ratio < kInf; ++j) {
    const double inner = std::pow(10.0, 3.0 * (j - 1)), outer = std::pow(10.0, 3.0 * j);
    const GridSpec lo_ext{budget.grid.lo / outer, budget.grid.lo / inner, ext_points};
    const GridSpec hi_ext{budget.grid.hi * inner, budget.grid.hi * outer, ext_points};
    for (const GridSpec& g : {lo_ext, hi_ext}) {
      const OracleResult s = dirac_scan(p, g, false, budget.quad);
      if (s.best_ratio > best.best_ratio) best = s;
    }
    above = best.best_ratio > threshold ? above + 1 : 0;
    if (above >= 2) {
      best.best_ratio = kInf;
      break;
    }
  }
  // For q, r >= 1 single atoms are extremal and the scan is already exact.
  if (!convex && best.best_ratio < kInf && budget.atoms > 0 && budget.restarts > 0) {
    const OracleResult a = ascent_optimize(p, budget.atoms, budget.iters, budget.restarts,
                                           budget.seed, LhsForm::main, budget.grid, budget.quad);
    if (a.best_ratio > best.best_ratio) best = a;
  }
  best.exactness = convex ? Exactness::exact_convex : Exactness::lower_bound;
  best.grid = budget.grid;
  best.seed = budget.seed;
  best.iterations = budget.iters * budget.restarts;
  return best;
}

FormComparison compare_forms(const ProblemInstance& p, const OracleBudget& budget) {
  FormComparison out;
  // On a single atom all forms coincide, so one scan serves both.
  const OracleResult scan = dirac_scan(p, budget.grid, false, budget.quad);
  out.supremal = scan;
  out.kernel = scan;
  if (scan.best_ratio == kInf) return out;
  const OracleResult s = ascent_optimize(p, budget.atoms, budget.iters, budget.restarts,
                                         budget.seed, LhsForm::supremal, budget.grid, budget.quad);
  if (s.best_ratio > out.supremal.best_ratio) out.supremal = s;
  const OracleResult k = ascent_optimize(p, budget.atoms, budget.iters, budget.restarts,
                                         budget.seed, LhsForm::kernel, budget.grid, budget.quad);
  if (k.best_ratio > out.kernel.best_ratio) out.kernel = k;
  const double cross = ratio_of(p, out.supremal.witness, LhsForm::kernel, budget.quad);
  if (cross > out.kernel.best_ratio) {
    out.kernel.best_ratio = cross;
    out.kernel.witness = out.supremal.witness;
  }
  return out;
}

}  // namespace hardycert
