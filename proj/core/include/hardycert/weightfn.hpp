#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hardycert {

/// x -> coeff * x^exponent on the half-open interval (lo, hi].
struct PowerPiece {
  double lo = 0.0;
  double hi = 0.0;  // may be +inf
  double coeff = 0.0;
  double exponent = 0.0;

  double value_at(double x) const;
  /// Limit of the piece formula as x -> lo from the right (handles lo = 0).
  double left_limit() const;
  /// Value at hi, or the limit at infinity when hi = inf.
  double right_limit() const;
  /// Exact integral of the piece formula over [a, b] with lo <= a <= b <= hi.
  double integral(double a, double b) const;
  /// log of integral(a, b), free of underflow and overflow.
  double log_integral(double a, double b) const;

  bool operator==(const PowerPiece&) const = default;
};

enum class WeightRole { weight, general };
enum class Extremum { einf, esup };
enum class Direction { up, dn };

/// A non-negative function on (0, inf) built from finitely many power pieces.
///
/// Pieces are contiguous, cover (0, inf) exactly and are right-closed, so the
/// function is left-continuous at every breakpoint. With role `weight` every
/// coefficient is positive and the first exponent exceeds -1, which is exactly
/// 0 < int_0^x f < inf for all x > 0.
class PiecewisePower {
 public:
  PiecewisePower(std::vector<PowerPiece> pieces, WeightRole role = WeightRole::weight);

  static PiecewisePower constant(double c, WeightRole role = WeightRole::weight);
  static PiecewisePower power(double coeff, double exponent,
                              WeightRole role = WeightRole::weight);

  const std::vector<PowerPiece>& pieces() const { return pieces_; }
  WeightRole role() const { return role_; }
  std::size_t size() const { return pieces_.size(); }

  /// Interior breakpoints (finite piece ends), ascending.
  std::vector<double> breakpoints() const;
  /// Index of the piece owning x, i.e. lo < x <= hi.
  std::size_t piece_index(double x) const;

  /// f(x) for x > 0; throws DomainError otherwise.
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  /// Exact int_a^b f for 0 <= a <= b <= inf; +inf when divergent.
  double integrate(double a, double b) const;
  /// log int_a^b f, accurate where the integral itself under- or overflows.
  double log_integrate(double a, double b) const;
  double cumulative(double x) const { return integrate(0.0, x); }
  double total_mass() const;

  /// Essential inf / sup over (a, b], limits included at 0+ and infinity.
  double extremum(double a, double b, Extremum mode) const;

  /// Greatest non-decreasing (up) or non-increasing (dn) minorant.
  PiecewisePower envelope(Direction dir) const;

  /// Unique x with int_0^x f = m, or +inf once m reaches the total mass.
  double invert_cumulative(double m) const;

  PiecewisePower scaled(double factor) const;
  /// Pointwise f^p; zero pieces are only allowed for p > 0.
  PiecewisePower pow(double p) const;
  /// Pointwise 1/f; every coefficient must be positive.
  PiecewisePower reciprocal() const;
  /// x -> f(1/x) * x^-2 when `density`, otherwise x -> f(1/x).
  PiecewisePower reflected(bool density) const;

  bool is_nondecreasing() const;
  bool is_nonincreasing() const;
  /// Merges adjacent pieces that carry the same formula.
  PiecewisePower simplified() const;
  PiecewisePower with_role(WeightRole role) const;

  /// Limit of f at 0+ and at infinity.
  double limit_at_zero() const;
  double limit_at_infinity() const;

  bool operator==(const PiecewisePower& other) const {
    return pieces_ == other.pieces_;
  }

 private:
  std::vector<PowerPiece> pieces_;
  WeightRole role_;
};

/// Pointwise product of two piecewise power functions (breakpoints merged).
PiecewisePower operator*(const PiecewisePower& a, const PiecewisePower& b);

/// Sorted union of the breakpoints of several functions.
std::vector<double> merged_breakpoints(std::span<const PiecewisePower* const> fs);

}  // namespace hardycert
