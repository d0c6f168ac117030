#include "hardycert/atomic.hpp"

#include <algorithm>
#include <cmath>

#include "hardycert/errors.hpp"

namespace hardycert {

AtomicFunction::AtomicFunction(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.position > 0.0) || !std::isfinite(a.position))
      throw InvariantError("atom positions must be positive and finite");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw InvariantError("atom masses must be positive and finite");
    if (i > 0 && !(atoms_[i - 1].position < a.position))
      throw InvariantError("atom positions must be strictly increasing");
  }
}

double AtomicFunction::tail(double t) const {
  double s = 0.0;
  for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->position >= t; ++it) s += it->mass;
  return s;
}

AtomicFunction AtomicFunction::scaled(double factor) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.mass *= factor;
  return AtomicFunction(std::move(atoms));
}

AtomicFunction AtomicFunction::reflected() const {
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it)
    atoms.push_back({1.0 / it->position, it->mass});
  return AtomicFunction(std::move(atoms));
}

}  // namespace hardycert
