#include "hardycert/tail_sup.hpp"

#include <algorithm>
#include <cmath>

#include "hardycert/extended.hpp"

namespace hardycert {

namespace {

constexpr double kExponentEps = 1e-12;

}  // namespace

TailSup::TailSup(PiecewisePower w, std::optional<PiecewisePower> m)
    : w_(std::move(w)), m_(std::move(m)) {
  if (!m_) return;
  const PiecewisePower* fs[] = {&w_, &*m_};
  auto cuts = merged_breakpoints(fs);
  double lo = 0.0;
  cuts.push_back(kInf);
  for (double hi : cuts) {
    const double probe = hi == kInf ? kInf : hi;
    const auto& wp = probe == kInf ? w_.pieces().back() : w_.pieces()[w_.piece_index(probe)];
    const auto& mp = probe == kInf ? m_->pieces().back() : m_->pieces()[m_->piece_index(probe)];
    segments_.push_back({lo, hi, wp, mp});
    lo = hi;
  }
}

double TailSup::log_sup(double t, double a, double b) const {
  // W(t, .) is non-decreasing, so without the multiplier the sup sits at infinity.
  if (b == 0.0) return a * std::log(w_.integrate(t, kInf));
  if (!m_) return kInf;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const Segment& s) { return v < s.hi; });
  double best = kNegInf;
  double w_lo = 0.0;  // W(t, lo)
  for (; it != segments_.end(); ++it) {
    const double lo = std::max(it->lo, t);
    const double hi = it->hi;
    const PowerPiece& wp = it->w;
    const PowerPiece& mp = it->m;
    const double c = wp.coeff;
    const double g = wp.exponent + 1.0;
    const double d = mp.coeff;
    const double e = mp.exponent;

    auto log_f = [&](double s) {
      const double W = w_lo + wp.integral(lo, s);
      return log_mul(log_pow(ext_log(W), a), log_pow(ext_log(mp.value_at(s)), b));
    };

    if (w_lo > 0.0) best = std::max(best, log_f(lo));
    if (hi < kInf) best = std::max(best, log_f(hi));

    const double be = b * e;
    if (be != 0.0 && c > 0.0 && d > 0.0) {
      double s_star = kNaN;
      if (g != 0.0) {
        const double K = w_lo - c * std::pow(lo, g) / g;
        const double denom = c * (a + be / g);
        if (denom != 0.0) {
          const double sg = -be * K / denom;
          if (sg > 0.0) s_star = std::pow(sg, 1.0 / g);
        }
      } else {
        const double K = w_lo - c * std::log(lo);
        s_star = std::exp((-a * c / be - K) / c);
      }
      if (s_star > lo && s_star < hi) best = std::max(best, log_f(s_star));
    }

    if (hi == kInf) {
      if (c == 0.0) {
        // w vanishes on the tail: W stays at w_lo.
        const double kappa = be;
        if (w_lo > 0.0) {
          if (kappa > kExponentEps) return kInf;
          if (std::abs(kappa) <= kExponentEps)
            best = std::max(best, log_mul(log_pow(ext_log(w_lo), a), log_pow(ext_log(d), b)));
        }
        break;
      }
      if (g > 0.0) {
        const double kappa = a * g + be;
        if (kappa > kExponentEps) return kInf;
        if (std::abs(kappa) <= kExponentEps)
          best = std::max(best, log_mul(a * std::log(c / g), log_pow(ext_log(d), b)));
      } else if (g == 0.0) {
        if (be >= 0.0) return kInf;
      } else {
        const double kappa = be;
        if (kappa > kExponentEps) return kInf;
        if (std::abs(kappa) <= kExponentEps) {
          const double w_inf = w_lo + wp.integral(lo, kInf);
          best = std::max(best, log_mul(log_pow(ext_log(w_inf), a), log_pow(ext_log(d), b)));
        }
      }
      break;
    }
    w_lo += wp.integral(lo, hi);
  }
  return best;
}

}  // namespace hardycert
