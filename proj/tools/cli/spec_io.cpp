#include "spec_io.hpp"

#include <fstream>
#include <sstream>

namespace hardycert::cli {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

double read_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field + ": expected a number");
  return j.get<double>();
}

template <class T>
std::optional<T> optional_int(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  const Json& j = obj.at(key);
  if (!j.is_number_integer()) throw InputError(where + "." + key + ": expected an integer");
  return j.get<T>();
}

std::optional<double> optional_number(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return read_number(obj.at(key), where + "." + key);
}

}  // namespace

ProblemInstance InstanceSpec::instance() const {
  return ProblemInstance(PiecewisePower(u), PiecewisePower(v), PiecewisePower(w), q, r);
}

Json extended(double x) {
  if (x == kInf) return "inf";
  if (x == kNegInf) return "-inf";
  return x;
}

double read_extended(const Json& j, const std::string& field) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return kNegInf;
    throw InputError(field + ": expected a number or \"inf\", got \"" + s + "\"");
  }
  return read_number(j, field);
}

Json pieces_to_json(const std::vector<PowerPiece>& pieces) {
  Json arr = Json::array();
  for (const auto& p : pieces) {
    Json o;
    o["lo"] = p.lo;
    o["hi"] = p.hi == kInf ? Json(nullptr) : Json(p.hi);
    o["coeff"] = p.coeff;
    o["exponent"] = p.exponent;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::vector<PowerPiece> pieces_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected a list of pieces");
  if (j.empty()) throw InputError(field + ": pieces list is empty");
  std::vector<PowerPiece> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = field + "[" + std::to_string(i) + "]";
    const Json& o = j[i];
    if (!o.is_object()) throw InputError(where + ": expected an object");
    PowerPiece p;
    p.lo = read_number(require(o, "lo", where), where + ".lo");
    const Json& hi = require(o, "hi", where);
    p.hi = hi.is_null() ? kInf : read_extended(hi, where + ".hi");
    p.coeff = read_number(require(o, "coeff", where), where + ".coeff");
    p.exponent = read_number(require(o, "exponent", where), where + ".exponent");
    out.push_back(p);
  }
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("JSON syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
}

InstanceSpec parse_spec(const std::string& text) {
  const Json j = parse_json_text(text);
  if (!j.is_object()) throw InputError("spec: expected a JSON object");
  InstanceSpec s;
  s.q = read_number(require(j, "q", "spec"), "q");
  s.r = read_number(require(j, "r", "spec"), "r");
  if (!(s.q > 0.0)) throw InputError("q: must be positive");
  if (!(s.r > 0.0)) throw InputError("r: must be positive");
  s.u = pieces_from_json(require(j, "u", "spec"), "u");
  s.v = pieces_from_json(require(j, "v", "spec"), "v");
  s.w = pieces_from_json(require(j, "w", "spec"), "w");
  if (j.contains("oracle")) {
    const Json& o = j.at("oracle");
    if (!o.is_object()) throw InputError("oracle: expected an object");
    s.oracle.atoms = optional_int<int>(o, "atoms", "oracle");
    s.oracle.iters = optional_int<int>(o, "iters", "oracle");
    s.oracle.restarts = optional_int<int>(o, "restarts", "oracle");
    s.oracle.grid_points = optional_int<int>(o, "grid_points", "oracle");
    s.oracle.seed = optional_int<std::uint64_t>(o, "seed", "oracle");
    s.oracle.grid_lo = optional_number(o, "grid_lo", "oracle");
    s.oracle.grid_hi = optional_number(o, "grid_hi", "oracle");
  }
  if (j.contains("covering")) {
    const Json& c = j.at("covering");
    if (!c.is_object()) throw InputError("covering: expected an object");
    s.k_min = optional_int<int>(c, "k_min", "covering");
    s.k_max = optional_int<int>(c, "k_max", "covering");
  }
  return s;
}

Json spec_to_json(const InstanceSpec& spec) {
  Json j;
  j["q"] = spec.q;
  j["r"] = spec.r;
  j["u"] = pieces_to_json(spec.u);
  j["v"] = pieces_to_json(spec.v);
  j["w"] = pieces_to_json(spec.w);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace hardycert::cli
