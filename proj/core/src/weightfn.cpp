#include "hardycert/weightfn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"

namespace hardycert {

namespace {

// Relative slack when deciding whether a computed crossover sits on a piece end.
constexpr double kCrossoverSlack = 1e-12;

std::string describe_piece(std::size_t i, const PowerPiece& p) {
  std::ostringstream os;
  os << "piece " << i << " (" << p.lo << ", " << p.hi << "] coeff=" << p.coeff
     << " exponent=" << p.exponent;
  return os.str();
}

PowerPiece constant_piece(double lo, double hi, double value) {
  return PowerPiece{lo, hi, value, 0.0};
}

}  // namespace

double PowerPiece::value_at(double x) const {
  if (coeff == 0.0) return 0.0;
  if (exponent == 0.0) return coeff;
  return coeff * std::pow(x, exponent);
}

double PowerPiece::left_limit() const {
  if (coeff == 0.0) return 0.0;
  if (lo > 0.0) return value_at(lo);
  if (exponent > 0.0) return 0.0;
  if (exponent == 0.0) return coeff;
  return kInf;
}

double PowerPiece::right_limit() const {
  if (coeff == 0.0) return 0.0;
  if (hi < kInf) return value_at(hi);
  if (exponent < 0.0) return 0.0;
  if (exponent == 0.0) return coeff;
  return kInf;
}

double PowerPiece::integral(double a, double b) const {
  if (coeff == 0.0 || !(a < b)) return 0.0;
  const double g = exponent + 1.0;
  if (g == 0.0) {
    if (a == 0.0 || b == kInf) return kInf;
    return coeff * std::log(b / a);
  }
  if (a == 0.0) {
    if (g < 0.0 || b == kInf) return kInf;
    return coeff * std::pow(b, g) / g;
  }
  if (b == kInf) {
    if (g > 0.0) return kInf;
    return coeff * std::pow(a, g) / (-g);
  }
  // (b^g - a^g) / g factored around the larger power: accurate for b close to a and free
  // of 0 * inf when the smaller power underflows.
  const double z = g * std::log(b / a);
  if (z >= 0.0) return coeff * std::pow(b, g) * -std::expm1(-z) / g;
  return coeff * std::pow(a, g) * -std::expm1(z) / -g;
}

double PowerPiece::log_integral(double a, double b) const {
  if (coeff == 0.0 || !(a < b)) return kNegInf;
  const double lc = std::log(coeff);
  const double g = exponent + 1.0;
  if (a == 0.0) {
    if (g <= 0.0 || b == kInf) return kInf;
    return lc + g * std::log(b) - std::log(g);
  }
  if (b == kInf) {
    if (g >= 0.0) return kInf;
    return lc + g * std::log(a) - std::log(-g);
  }
  const double ratio = b / a;
  const double lr = std::isfinite(ratio) ? std::log(ratio) : std::log(b) - std::log(a);
  if (g == 0.0) return lc + std::log(lr);
  const double z = g * lr;
  if (z >= 0.0) return lc + g * std::log(b) + std::log(-std::expm1(-z)) - std::log(g);
  return lc + g * std::log(a) + std::log(-std::expm1(z)) - std::log(-g);
}

PiecewisePower::PiecewisePower(std::vector<PowerPiece> pieces, WeightRole role)
    : pieces_(std::move(pieces)), role_(role) {
  if (pieces_.empty()) throw InvariantError("piecewise power: no pieces");
  if (pieces_.front().lo != 0.0)
    throw InvariantError("piecewise power: first piece must start at 0");
  if (pieces_.back().hi != kInf)
    throw InvariantError("piecewise power: last piece must end at infinity");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.lo < p.hi)) throw InvariantError("empty interval in " + describe_piece(i, p));
    if (!(p.coeff >= 0.0) || !std::isfinite(p.coeff))
      throw InvariantError("negative or non-finite coefficient in " + describe_piece(i, p));
    if (!std::isfinite(p.exponent))
      throw InvariantError("non-finite exponent in " + describe_piece(i, p));
    if (i + 1 < pieces_.size() && p.hi != pieces_[i + 1].lo)
      throw InvariantError("pieces not contiguous at " + describe_piece(i, p));
    if (role_ == WeightRole::weight && p.coeff <= 0.0)
      throw InvariantError("weight must be positive: " + describe_piece(i, p));
  }
  if (role_ == WeightRole::weight && !(pieces_.front().exponent > -1.0))
    throw InvariantError("weight is not locally integrable at 0 (first exponent <= -1)");
}

PiecewisePower PiecewisePower::constant(double c, WeightRole role) {
  return power(c, 0.0, role);
}

PiecewisePower PiecewisePower::power(double coeff, double exponent, WeightRole role) {
  return PiecewisePower({PowerPiece{0.0, kInf, coeff, exponent}}, role);
}

std::vector<double> PiecewisePower::breakpoints() const {
  std::vector<double> out;
  out.reserve(pieces_.size());
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back(pieces_[i].hi);
  return out;
}

std::size_t PiecewisePower::piece_index(double x) const {
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const PowerPiece& p, double v) { return p.hi < v; });
  if (it == pieces_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - pieces_.begin());
}

double PiecewisePower::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("eval: x must be positive");
  if (x == kInf) return limit_at_infinity();
  return pieces_[piece_index(x)].value_at(x);
}

double PiecewisePower::integrate(double a, double b) const {
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("integrate: need 0 <= a <= b");
  if (a == b) return 0.0;
  double sum = 0.0;
  for (std::size_t i = piece_index(a > 0.0 ? a : pieces_.front().hi); i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.lo >= b) break;
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (!(lo < hi)) continue;
    const double part = p.integral(lo, hi);
    if (part == kInf) return kInf;
    sum += part;
  }
  return sum;
}

double PiecewisePower::log_integrate(double a, double b) const {
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("log_integrate: need 0 <= a <= b");
  double acc = kNegInf;
  if (a == b) return acc;
  for (std::size_t i = piece_index(a > 0.0 ? a : pieces_.front().hi); i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.lo >= b) break;
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (!(lo < hi)) continue;
    acc = log_add(acc, p.log_integral(lo, hi));
    if (acc == kInf) return kInf;
  }
  return acc;
}

double PiecewisePower::total_mass() const { return integrate(0.0, kInf); }

double PiecewisePower::extremum(double a, double b, Extremum mode) const {
  if (!(a >= 0.0) || !(a < b)) throw DomainError("extremum: need 0 <= a < b");
  double best = mode == Extremum::einf ? kInf : 0.0;
  bool any = false;
  for (const auto& p : pieces_) {
    if (p.hi <= a) continue;
    if (p.lo >= b) break;
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    const double at_lo = lo == p.lo ? p.left_limit() : p.value_at(lo);
    const double at_hi = hi == p.hi ? p.right_limit() : p.value_at(hi);
    const double v = mode == Extremum::einf ? std::min(at_lo, at_hi) : std::max(at_lo, at_hi);
    best = mode == Extremum::einf ? std::min(best, v) : std::max(best, v);
    any = true;
  }
  if (!any) throw DomainError("extremum: empty interval");
  return best;
}

PiecewisePower PiecewisePower::envelope(Direction dir) const {
  if (dir == Direction::up) {
    if (is_nondecreasing()) return simplified().with_role(WeightRole::general);
    std::vector<PowerPiece> out;
    double running = kInf;  // einf over (hi, inf) of the pieces already swept
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      const PowerPiece& p = *it;
      if (p.coeff == 0.0) {
        out.push_back(constant_piece(p.lo, p.hi, 0.0));
        running = 0.0;
      } else if (p.exponent > 0.0) {
        if (running == kInf) {
          out.push_back(p);
        } else {
          const double cross = std::pow(running / p.coeff, 1.0 / p.exponent);
          if (cross >= p.hi * (1.0 - kCrossoverSlack)) {
            out.push_back(p);
          } else if (cross <= p.lo * (1.0 + kCrossoverSlack)) {
            out.push_back(constant_piece(p.lo, p.hi, running));
          } else {
            out.push_back(constant_piece(cross, p.hi, running));
            out.push_back(PowerPiece{p.lo, cross, p.coeff, p.exponent});
          }
        }
        running = std::min(running, p.left_limit());
      } else {
        const double floor = p.exponent < 0.0 ? p.right_limit() : p.coeff;
        running = std::min(running, floor);
        out.push_back(constant_piece(p.lo, p.hi, running));
      }
    }
    std::reverse(out.begin(), out.end());
    return PiecewisePower(std::move(out), WeightRole::general).simplified();
  }

  if (is_nonincreasing()) return simplified().with_role(WeightRole::general);
  std::vector<PowerPiece> out;
  double running = kInf;  // einf over (0, lo] of the pieces already swept
  for (const PowerPiece& p : pieces_) {
    if (p.coeff == 0.0) {
      out.push_back(constant_piece(p.lo, p.hi, 0.0));
      running = 0.0;
    } else if (p.exponent < 0.0) {
      if (running == kInf) {
        out.push_back(p);
      } else {
        const double cross = std::pow(running / p.coeff, 1.0 / p.exponent);
        if (cross <= p.lo * (1.0 + kCrossoverSlack)) {
          out.push_back(p);
        } else if (cross >= p.hi * (1.0 - kCrossoverSlack)) {
          out.push_back(constant_piece(p.lo, p.hi, running));
        } else {
          out.push_back(constant_piece(p.lo, cross, running));
          out.push_back(PowerPiece{cross, p.hi, p.coeff, p.exponent});
        }
      }
      running = std::min(running, p.right_limit());
    } else {
      const double floor = p.exponent > 0.0 ? p.left_limit() : p.coeff;
      running = std::min(running, floor);
      out.push_back(constant_piece(p.lo, p.hi, running));
    }
  }
  return PiecewisePower(std::move(out), WeightRole::general).simplified();
}

double PiecewisePower::invert_cumulative(double m) const {
  if (!(m > 0.0)) throw DomainError("invert_cumulative: mass must be positive");
  if (m >= total_mass()) return kInf;
  double cum = 0.0;
  for (const auto& p : pieces_) {
    const double mass = p.integral(p.lo, p.hi);
    if (mass != kInf && cum + mass < m) {
      cum += mass;
      continue;
    }
    if (p.coeff == 0.0) continue;
    const double need = m - cum;
    const double g = p.exponent + 1.0;
    double x;
    if (g == 0.0) {
      if (p.lo == 0.0) throw PreconditionError("invert_cumulative: non-integrable at 0");
      x = p.lo * std::exp(need / p.coeff);
    } else if (p.lo == 0.0) {
      if (g < 0.0) throw PreconditionError("invert_cumulative: non-integrable at 0");
      x = std::pow(g * need / p.coeff, 1.0 / g);
    } else {
      // lo^g + g*need/c, written relative to lo^g to avoid cancellation for g < 0
      const double lo_g = std::pow(p.lo, g);
      x = p.lo * std::exp(std::log1p(g * need / (p.coeff * lo_g)) / g);
    }
    x = std::clamp(x, p.lo, p.hi);
    // Newton polish on int_lo^x; the closed forms above lose a few digits for large |1/g|.
    for (int it = 0; it < 2 && x > p.lo && x < p.hi; ++it) {
      const double fx = p.value_at(x);
      if (!(fx > 0.0) || !std::isfinite(fx)) break;
      const double nx = x - (p.integral(p.lo, x) - need) / fx;
      if (!(nx > p.lo && nx <= p.hi)) break;
      x = nx;
    }
    return x;
  }
  return kInf;
}

PiecewisePower PiecewisePower::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor))
    throw DomainError("scaled: factor must be finite and non-negative");
  auto pieces = pieces_;
  for (auto& p : pieces) p.coeff *= factor;
  return PiecewisePower(std::move(pieces), factor > 0.0 ? role_ : WeightRole::general);
}

PiecewisePower PiecewisePower::pow(double p) const {
  auto pieces = pieces_;
  for (auto& piece : pieces) {
    if (piece.coeff == 0.0) {
      if (p <= 0.0) throw DomainError("pow: zero piece raised to a non-positive power");
      continue;
    }
    piece.coeff = std::pow(piece.coeff, p);
    piece.exponent *= p;
  }
  return PiecewisePower(std::move(pieces), WeightRole::general);
}

PiecewisePower PiecewisePower::reciprocal() const { return pow(-1.0); }

PiecewisePower PiecewisePower::reflected(bool density) const {
  std::vector<PowerPiece> out;
  out.reserve(pieces_.size());
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    PowerPiece q;
    q.lo = it->hi == kInf ? 0.0 : 1.0 / it->hi;
    q.hi = it->lo == 0.0 ? kInf : 1.0 / it->lo;
    q.coeff = it->coeff;
    q.exponent = it->coeff == 0.0 ? 0.0 : -it->exponent - (density ? 2.0 : 0.0);
    out.push_back(q);
  }
  return PiecewisePower(std::move(out), WeightRole::general);
}

bool PiecewisePower::is_nondecreasing() const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.coeff > 0.0 && p.exponent < 0.0) return false;
    if (i + 1 < pieces_.size()) {
      const double end = p.right_limit();
      const double next = pieces_[i + 1].left_limit();
      if (end > next * (1.0 + kCrossoverSlack)) return false;
    }
  }
  return true;
}

bool PiecewisePower::is_nonincreasing() const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.coeff > 0.0 && p.exponent > 0.0) return false;
    if (i + 1 < pieces_.size()) {
      const double end = p.right_limit();
      const double next = pieces_[i + 1].left_limit();
      if (next > end * (1.0 + kCrossoverSlack)) return false;
    }
  }
  return true;
}

PiecewisePower PiecewisePower::simplified() const {
  std::vector<PowerPiece> out;
  for (auto p : pieces_) {
    if (p.coeff == 0.0) p.exponent = 0.0;
    if (!out.empty() && out.back().coeff == p.coeff && out.back().exponent == p.exponent) {
      out.back().hi = p.hi;
    } else {
      out.push_back(p);
    }
  }
  return PiecewisePower(std::move(out), role_);
}

PiecewisePower PiecewisePower::with_role(WeightRole role) const {
  return PiecewisePower(pieces_, role);
}

double PiecewisePower::limit_at_zero() const { return pieces_.front().left_limit(); }

double PiecewisePower::limit_at_infinity() const { return pieces_.back().right_limit(); }

std::vector<double> merged_breakpoints(std::span<const PiecewisePower* const> fs) {
  std::vector<double> out;
  for (const auto* f : fs) {
    const auto b = f->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewisePower operator*(const PiecewisePower& a, const PiecewisePower& b) {
  const PiecewisePower* both[] = {&a, &b};
  auto cuts = merged_breakpoints(both);
  cuts.push_back(kInf);
  std::vector<PowerPiece> out;
  double lo = 0.0;
  for (double hi : cuts) {
    const double probe = hi == kInf ? (lo > 0.0 ? 2.0 * lo : 1.0) : hi;
    const auto& pa = a.pieces()[a.piece_index(probe)];
    const auto& pb = b.pieces()[b.piece_index(probe)];
    const double c = mul0(pa.coeff, pb.coeff);
    out.push_back(PowerPiece{lo, hi, c, c == 0.0 ? 0.0 : pa.exponent + pb.exponent});
    lo = hi;
  }
  return PiecewisePower(std::move(out), WeightRole::general).simplified();
}

}  // namespace hardycert
