#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardycert/hardycert.hpp"

namespace hardycert::cli {

using Json = nlohmann::ordered_json;

/// Malformed input (exit code 2). Invariant violations surface as InvariantError (exit 3).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOverrides {
  std::optional<int> atoms, iters, restarts, grid_points;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_lo, grid_hi;
};

struct InstanceSpec {
  double q = 1.0;
  double r = 1.0;
  std::vector<PowerPiece> u, v, w;
  OracleOverrides oracle;
  std::optional<int> k_min, k_max;

  /// Builds the validated instance; throws InvariantError on weight violations.
  ProblemInstance instance() const;
};

/// Numbers pass through, +inf becomes the string "inf".
Json extended(double x);
/// Accepts numbers and the strings "inf" / "-inf".
double read_extended(const Json& j, const std::string& field);

Json pieces_to_json(const std::vector<PowerPiece>& pieces);
std::vector<PowerPiece> pieces_from_json(const Json& j, const std::string& field);

InstanceSpec parse_spec(const std::string& text);
Json spec_to_json(const InstanceSpec& spec);

Json parse_json_text(const std::string& text);
std::string read_file(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace hardycert::cli
