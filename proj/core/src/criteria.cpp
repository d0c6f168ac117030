#include "hardycert/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardycert/discretization.hpp"
#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"
#include "hardycert/tail_sup.hpp"

namespace hardycert {

namespace {

struct ErrorSink {
  double max_rel = 0.0;
  void note(const QuadResult& r) {
    if (std::isfinite(r.log_value)) max_rel = std::max(max_rel, r.rel_error);
  }
};

QuadOptions nested(const QuadOptions& q) {
  QuadOptions inner = q;
  inner.rel_tol = std::max(q.rel_tol * 1e-2, 1e-13);
  return inner;
}

std::vector<double> breaks_of(std::initializer_list<const PiecewisePower*> fs) {
  std::vector<const PiecewisePower*> v(fs);
  return merged_breakpoints(v);
}

/// log int_0^t outer(x) (int_x^t base)^expo dx.
class InnerIntegral {
 public:
  InnerIntegral(const PiecewisePower& outer, const PiecewisePower& base, double expo,
                const QuadOptions& q, ErrorSink& sink)
      : outer_(outer), base_(base), expo_(expo), q_(q), sink_(sink),
        breaks_(breaks_of({&outer, &base})) {}

  double operator()(double t) const {
    auto f = [&](double x) {
      if (!(x < t)) return kNegInf;
      return log_mul(ext_log(outer_(x)), log_pow(base_.log_integrate(x, t), expo_));
    };
    std::vector<double> br;
    for (double b : breaks_) {
      if (b < t) br.push_back(b);
    }
    const QuadResult res = integrate_log(f, 0.0, t, br, q_);
    sink_.note(res);
    return res.log_value;
  }

 private:
  const PiecewisePower& outer_;
  const PiecewisePower& base_;
  double expo_;
  QuadOptions q_;
  ErrorSink& sink_;
  std::vector<double> breaks_;
};

double log_integral_0_inf(const LogIntegrand& f, const std::vector<double>& breaks,
                          const QuadOptions& q, ErrorSink& sink) {
  const QuadResult res = integrate_log(f, 0.0, kInf, breaks, q);
  sink.note(res);
  return res.log_value;
}

double log_sup(const std::function<double(double)>& f, const std::vector<double>& anchors,
               const SupOptions& s) {
  return sup_over_t(f, anchors, s).log_value;
}

/// exp(log_integral / p) with +inf and -inf passed through.
double root(double log_integral, double p) { return ext_exp(log_integral / p); }

double log_cum(const PiecewisePower& f, double t) { return f.log_integrate(0.0, t); }

std::array<double, 3> compute_G_impl(const ProblemInstance& p, const CriteriaOptions& o,
                                     ErrorSink& sink) {
  if (p.r() < 1.0) throw RegimeError("compute_G requires r >= 1");
  if (!p.sigma()) return {kInf, kInf, kInf};
  const double q = p.q(), r = p.r();
  const PiecewisePower& sigma = *p.sigma();
  const TailSup ts(p.w(), sigma);
  const PiecewisePower phi = sigma.pow(q) * p.w();
  const InnerIntegral LP(p.u(), p.w(), r / q, nested(o.quad), sink);
  const auto anchors = breaks_of({&p.u(), &p.w(), &sigma});

  const double g1 = log_sup([&](double t) { return LP(t) / r + std::log(sigma(t)); }, anchors,
                            o.sup);
  const double g2 = log_sup(
      [&](double t) { return log_cum(p.u(), t) / r + ts.log_sup(t, 1.0 / q, 1.0); }, anchors,
      o.sup);
  const double g3 = log_sup(
      [&](double t) { return log_cum(p.u(), t) / r + phi.log_integrate(t, kInf) / q; },
      anchors, o.sup);
  return {ext_exp(g1), ext_exp(g2), ext_exp(g3)};
}

std::array<double, 3> compute_F_impl(const ProblemInstance& p, const CriteriaOptions& o,
                                     ErrorSink& sink) {
  if (p.r() >= 1.0) throw RegimeError("compute_F requires r < 1");
  if (!p.sigma()) return {kInf, kInf, kInf};
  const double q = p.q(), r = p.r(), rp = *p.exps().rprime;
  const PiecewisePower& sigma = *p.sigma();
  const TailSup ts(p.w(), sigma);
  const PiecewisePower phi = sigma.pow(q) * p.w();
  const InnerIntegral LP(p.u(), p.w(), r / q, nested(o.quad), sink);
  const auto breaks = breaks_of({&p.u(), &p.w(), &sigma});
  const auto& u = p.u();

  const double f1 = log_integral_0_inf(
      [&](double t) {
        return rp * log_cum(u, t) + std::log(u(t)) + ts.log_sup(t, rp / q, rp);
      },
      breaks, o.quad, sink);
  const double f2 = log_integral_0_inf(
      [&](double t) {
        const double s = ts.log_sup(t, r / q, rp);
        if (s == kNegInf) return kNegInf;
        return rp * LP(t) + std::log(u(t)) + s;
      },
      breaks, o.quad, sink);
  const double f3 = log_integral_0_inf(
      [&](double t) {
        return rp * log_cum(u, t) + (rp / q) * phi.log_integrate(t, kInf) + std::log(u(t));
      },
      breaks, o.quad, sink);
  return {root(f1, rp), root(f2, rp), root(f3, rp)};
}

std::array<double, 2> supremal_impl(const ProblemInstance& p, const CriteriaOptions& o,
                                    ErrorSink& sink) {
  const double q = p.q(), r = p.r();
  const auto& u = p.u();
  const auto& v = p.v();
  const PiecewisePower vinv = v.reciprocal();
  const TailSup tr(p.w(), vinv);
  const InnerIntegral LP(u, p.w(), r / q, nested(o.quad), sink);
  const auto breaks = breaks_of({&u, &p.w(), &v});

  if (r >= 1.0) {
    const double d1 = log_sup(
        [&](double t) { return LP(t) / r - ext_log(v.extremum(t, kInf, Extremum::einf)); },
        breaks, o.sup);
    const double d2 = log_sup(
        [&](double t) { return log_cum(u, t) / r + tr.log_sup(t, 1.0 / q, 1.0); }, breaks, o.sup);
    return {ext_exp(d1), ext_exp(d2)};
  }
  const double rp = *p.exps().rprime;
  const double e1 = log_integral_0_inf(
      [&](double t) { return rp * log_cum(u, t) + std::log(u(t)) + tr.log_sup(t, rp / q, rp); },
      breaks, o.quad, sink);
  const double e2 = log_integral_0_inf(
      [&](double t) {
        const double s = tr.log_sup(t, r / q, rp);
        if (s == kNegInf) return kNegInf;
        return rp * LP(t) + std::log(u(t)) + s;
      },
      breaks, o.quad, sink);
  return {root(e1, rp), root(e2, rp)};
}

std::array<double, 2> kernel_impl(const PiecewisePower& omega, const PiecewisePower& v, double p,
                                  const PiecewisePower& kb, const CriteriaOptions& o,
                                  ErrorSink& sink) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("kernel_criteria: exponent must be positive");
  const double head = kb.pieces().front().hi == kInf ? 1.0 : kb.pieces().front().hi;
  if (kb.integrate(0.0, head) == kInf || kb.pieces().front().coeff <= 0.0)
    throw PreconditionError("kernel_criteria: kernel base must be integrable and positive at 0");
  const PiecewisePower vinv = v.reciprocal();
  const TailSup tk(kb, vinv);
  const InnerIntegral Kp(omega, kb, p, nested(o.quad), sink);
  const auto breaks = breaks_of({&omega, &kb, &v});

  if (p >= 1.0) {
    const double o1 = log_sup(
        [&](double t) { return Kp(t) / p - ext_log(v.extremum(t, kInf, Extremum::einf)); }, breaks,
        o.sup);
    const double o2 = log_sup(
        [&](double t) { return log_cum(omega, t) / p + tk.log_sup(t, 1.0, 1.0); }, breaks, o.sup);
    return {ext_exp(o1), ext_exp(o2)};
  }
  const double pp = p / (1.0 - p);
  const double k1 = log_integral_0_inf(
      [&](double t) { return pp * log_cum(omega, t) + ext_log(omega(t)) + tk.log_sup(t, pp, pp); },
      breaks, o.quad, sink);
  const double k2 = log_integral_0_inf(
      [&](double t) {
        const double s = tk.log_sup(t, p, pp);
        if (s == kNegInf) return kNegInf;
        return pp * Kp(t) + ext_log(omega(t)) + s;
      },
      breaks, o.quad, sink);
  return {root(k1, pp), root(k2, pp)};
}

double tail_B_impl(const ProblemInstance& p, const PiecewisePower& vm, const CriteriaOptions& o,
                   ErrorSink& sink) {
  if (!vm.is_nondecreasing()) throw PreconditionError("tail_criterion_B: v_mono must be non-decreasing");
  for (const auto& piece : vm.pieces()) {
    if (piece.coeff == 0.0) return kInf;
  }
  const double q = p.q(), r = p.r();
  const auto& u = p.u();
  const PiecewisePower psi = vm.pow(-q) * p.w();
  const auto breaks = breaks_of({&u, &p.w(), &vm});
  if (r >= 1.0) {
    return ext_exp(log_sup(
        [&](double t) { return log_cum(u, t) / r + psi.log_integrate(t, kInf) / q; }, breaks,
        o.sup));
  }
  const double rp = *p.exps().rprime;
  const double b = log_integral_0_inf(
      [&](double t) {
        return rp * log_cum(u, t) + (rp / q) * psi.log_integrate(t, kInf) + std::log(u(t));
      },
      breaks, o.quad, sink);
  return root(b, rp);
}

}  // namespace

double CriteriaReport::value(const std::string& name) const {
  for (const auto& nv : values) {
    if (nv.name == name) return nv.value;
  }
  throw std::out_of_range("criteria report has no entry " + name);
}

bool CriteriaReport::has(const std::string& name) const {
  return std::any_of(values.begin(), values.end(),
                     [&](const NamedValue& nv) { return nv.name == name; });
}

std::array<double, 3> CriteriaReport::triple() const {
  return {values.at(0).value, values.at(1).value, values.at(2).value};
}

std::array<double, 3> compute_G(const ProblemInstance& p, const CriteriaOptions& opts) {
  ErrorSink sink;
  return compute_G_impl(p, opts, sink);
}

std::array<double, 3> compute_F(const ProblemInstance& p, const CriteriaOptions& opts) {
  ErrorSink sink;
  return compute_F_impl(p, opts, sink);
}

std::array<double, 2> supremal_criteria(const ProblemInstance& p, const CriteriaOptions& opts) {
  ErrorSink sink;
  return supremal_impl(p, opts, sink);
}

std::array<double, 2> kernel_criteria(const PiecewisePower& outer, const PiecewisePower& v,
                                      double exponent, const PiecewisePower& kernel_base,
                                      const CriteriaOptions& opts) {
  ErrorSink sink;
  return kernel_impl(outer, v, exponent, kernel_base, opts, sink);
}

double tail_criterion_B(const ProblemInstance& p, const PiecewisePower& v_mono,
                        const CriteriaOptions& opts) {
  ErrorSink sink;
  return tail_B_impl(p, v_mono, opts, sink);
}

CriteriaReport criteria_constant(const ProblemInstance& p, const CriteriaOptions& opts) {
  ErrorSink sink;
  CriteriaReport rep;
  const bool low = p.r() < 1.0;
  rep.regime = low ? Regime::r_lt_1 : Regime::r_ge_1;

  const auto triple = low ? compute_F_impl(p, opts, sink) : compute_G_impl(p, opts, sink);
  const char* tn = low ? "F" : "G";
  for (int i = 0; i < 3; ++i) rep.values.push_back({tn + std::to_string(i + 1), triple[i]});

  const auto pair = supremal_impl(p, opts, sink);
  const char* pn = low ? "E" : "D";
  for (int i = 0; i < 2; ++i) rep.values.push_back({pn + std::to_string(i + 1), pair[i]});

  if (p.q() == 1.0) {
    const auto kp = kernel_impl(p.u(), p.v(), p.r(), p.w(), opts, sink);
    const char* kn = p.r() >= 1.0 ? "O" : "K";
    for (int i = 0; i < 2; ++i) rep.values.push_back({kn + std::to_string(i + 1), kp[i]});
  }

  const BlockNorm a = discrete_block_A_auto(p, p.v_up(), opts.k_min, opts.k_max);
  rep.values.push_back({"A", a.value});
  rep.values.push_back({"B", tail_B_impl(p, p.v_up(), opts, sink)});

  rep.aggregate = triple[0] + triple[1] + triple[2];
  rep.quadrature_error = sink.max_rel;
  return rep;
}

}  // namespace hardycert
