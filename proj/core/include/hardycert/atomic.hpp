#pragma once

#include <vector>

namespace hardycert {

struct Atom {
  double position;
  double mass;
  bool operator==(const Atom&) const = default;
};

/// h = sum_j m_j delta_{y_j} with strictly increasing positions and positive masses.
class AtomicFunction {
 public:
  AtomicFunction() = default;
  explicit AtomicFunction(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// Closed tail int_[t, inf) h.
  double tail(double t) const;
  AtomicFunction scaled(double factor) const;
  /// Atom j moved to 1/y_j, mass kept.
  AtomicFunction reflected() const;

  bool operator==(const AtomicFunction&) const = default;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace hardycert
