#pragma once

#include <optional>

#include "hardycert/weightfn.hpp"

namespace hardycert {

struct Exponents {
  double q = 1.0;
  double r = 1.0;
  /// r / (1 - r); only meaningful when r < 1.
  std::optional<double> rprime;
  /// 1/rho = (1/r - 1)_+, so rho = rprime for r < 1 and +inf otherwise.
  double rho = 0.0;

  static Exponents make(double q, double r);
  bool r_below_one() const { return r < 1.0; }
};

/// (u, v, w, q, r) together with the cached envelope v_up and sigma = 1 / v_up.
class ProblemInstance {
 public:
  ProblemInstance(PiecewisePower u, PiecewisePower v, PiecewisePower w, double q, double r);

  const PiecewisePower& u() const { return u_; }
  const PiecewisePower& v() const { return v_; }
  const PiecewisePower& w() const { return w_; }
  const Exponents& exps() const { return exps_; }
  double q() const { return exps_.q; }
  double r() const { return exps_.r; }

  const PiecewisePower& v_up() const { return v_up_; }
  /// sigma(s) = esup_{tau >= s} 1/v(tau); empty when v_up vanishes, i.e. sigma = inf.
  const std::optional<PiecewisePower>& sigma() const { return sigma_; }

  ProblemInstance with_u(PiecewisePower u) const;
  ProblemInstance with_v(PiecewisePower v) const;
  ProblemInstance with_w(PiecewisePower w) const;

 private:
  PiecewisePower u_, v_, w_;
  Exponents exps_;
  PiecewisePower v_up_;
  std::optional<PiecewisePower> sigma_;
};

/// The inequality obtained by x -> 1/x:
///   (int_0^inf (int_0^x (int_0^t g)^q W(t) dt)^{r/q} U(x) dx)^{1/r} <= C int g V.
/// U and W are densities and pick up the Jacobian x^-2, V does not. The
/// reflected weights need not satisfy the weight condition at 0, hence role general.
struct DualInstance {
  PiecewisePower u, v, w;
  double q, r;
};

DualInstance dualize(const ProblemInstance& p);
ProblemInstance dualize(const DualInstance& d);

}  // namespace hardycert
