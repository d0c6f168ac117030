#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spec_io.hpp"

namespace hardycert::cli {

/// One of the four (q, r) regimes.
struct RegimeSel {
  bool q_ge_1 = true;
  bool r_ge_1 = true;

  std::string label() const;
  /// Parses labels such as "q<1,r>=1".
  static RegimeSel parse(const std::string& label);
  bool operator==(const RegimeSel&) const = default;
};

/// Random instance with 1-4 pieces per weight. With probability 3/4 the tails
/// are tuned so that the criteria are finite; otherwise exponents are free.
/// `fixed_q` pins q (the regime's q flag is then ignored).
InstanceSpec gen_random_instance(std::uint64_t seed, RegimeSel regime,
                                 std::optional<double> fixed_q = std::nullopt);

}  // namespace hardycert::cli
