#include "hardycert/instance.hpp"

#include <cmath>
#include <string>

#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"

namespace hardycert {

Exponents Exponents::make(double q, double r) {
  if (!(q > 0.0) || !std::isfinite(q)) throw InvariantError("q must be a positive finite number");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvariantError("r must be a positive finite number");
  Exponents e;
  e.q = q;
  e.r = r;
  if (r < 1.0) {
    e.rprime = r / (1.0 - r);
    e.rho = *e.rprime;
  } else {
    e.rho = kInf;
  }
  return e;
}

namespace {

void require_weight(const PiecewisePower& f, const char* name) {
  if (f.role() != WeightRole::weight)
    throw InvariantError(std::string(name) + " must be a weight");
}

}  // namespace

ProblemInstance::ProblemInstance(PiecewisePower u, PiecewisePower v, PiecewisePower w, double q,
                                 double r)
    : u_(std::move(u)),
      v_(std::move(v)),
      w_(std::move(w)),
      exps_(Exponents::make(q, r)),
      v_up_(v_.envelope(Direction::up)) {
  require_weight(u_, "u");
  require_weight(v_, "v");
  require_weight(w_, "w");
  // v_up of a positive piecewise power function is either identically zero or
  // positive everywhere, so checking the first piece decides the case.
  if (v_up_.pieces().front().coeff > 0.0) sigma_ = v_up_.reciprocal();
}

ProblemInstance ProblemInstance::with_u(PiecewisePower u) const {
  return ProblemInstance(std::move(u), v_, w_, q(), r());
}

ProblemInstance ProblemInstance::with_v(PiecewisePower v) const {
  return ProblemInstance(u_, std::move(v), w_, q(), r());
}

ProblemInstance ProblemInstance::with_w(PiecewisePower w) const {
  return ProblemInstance(u_, v_, std::move(w), q(), r());
}

DualInstance dualize(const ProblemInstance& p) {
  return DualInstance{p.u().reflected(true), p.v().reflected(false), p.w().reflected(true), p.q(),
                      p.r()};
}

ProblemInstance dualize(const DualInstance& d) {
  return ProblemInstance(d.u.reflected(true).with_role(WeightRole::weight),
                         d.v.reflected(false).with_role(WeightRole::weight),
                         d.w.reflected(true).with_role(WeightRole::weight), d.q, d.r);
}

}  // namespace hardycert
