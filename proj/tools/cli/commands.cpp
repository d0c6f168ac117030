#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace hardycert::cli {

namespace {

const char* regime_name(Regime r) { return r == Regime::r_ge_1 ? "r>=1" : "r<1"; }

Json maybe(const std::optional<double>& x) { return x ? extended(*x) : Json(nullptr); }

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : ""; }

void emit(const Json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

std::string strip_json_ext(const std::string& path) {
  const std::string ext = ".json";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size());
  return path;
}

}  // namespace

Json criteria_json(const InstanceSpec& spec, const CriteriaReport& report, double elapsed_seconds) {
  Json j;
  j["regime"] = regime_name(report.regime);
  j["q"] = spec.q;
  j["r"] = spec.r;
  Json values = Json::object();
  Json finite = Json::object();
  for (const auto& nv : report.values) {
    values[nv.name] = extended(nv.value);
    finite[nv.name] = std::isfinite(nv.value);
  }
  j["values"] = std::move(values);
  j["finite"] = std::move(finite);
  j["aggregate"] = extended(report.aggregate);
  j["aggregate_finite"] = std::isfinite(report.aggregate);
  j["quadrature_error"] = report.quadrature_error;
  j["elapsed_seconds"] = elapsed_seconds;
  return j;
}

Json oracle_json(const OracleResult& result) {
  Json j;
  j["best_ratio"] = extended(result.best_ratio);
  j["exactness"] = to_string(result.exactness);
  j["seed"] = result.seed;
  Json atoms = Json::array();
  for (const auto& a : result.witness.atoms()) {
    atoms.push_back(Json{{"position", a.position}, {"mass", a.mass}});
  }
  j["witness"] = std::move(atoms);
  j["grid"] = Json{{"lo", result.grid.lo}, {"hi", result.grid.hi}, {"points", result.grid.points}};
  j["iterations"] = result.iterations;
  return j;
}

Json partition_json(const PiecewisePower& u, const CoveringSequence& cov) {
  Json j;
  j["k_min"] = cov.k_min;
  j["k_max"] = cov.k_max();
  j["total_mass"] = extended(cov.total_mass);
  j["M"] = cov.M ? Json(*cov.M) : Json(nullptr);
  j["truncated"] = cov.truncated;
  Json pts = Json::array();
  for (int k = cov.k_min; k <= cov.k_max(); ++k) {
    const double x = cov.x(k);
    const double cum = std::isinf(x) ? cov.total_mass : u.cumulative(x);
    pts.push_back(Json{{"k", k}, {"x", extended(x)}, {"cumulative", extended(cum)}});
  }
  j["points"] = std::move(pts);
  return j;
}

OracleBudget oracle_budget(OracleBudget b, const OracleOverrides& spec, const BudgetFlags& flags) {
  if (spec.atoms) b.atoms = *spec.atoms;
  if (spec.iters) b.iters = *spec.iters;
  if (spec.restarts) b.restarts = *spec.restarts;
  if (spec.grid_points) b.grid.points = *spec.grid_points;
  if (spec.seed) b.seed = *spec.seed;
  if (spec.grid_lo) b.grid.lo = *spec.grid_lo;
  if (spec.grid_hi) b.grid.hi = *spec.grid_hi;
  if (flags.atoms) b.atoms = *flags.atoms;
  if (flags.iters) b.iters = *flags.iters;
  if (flags.restarts) b.restarts = *flags.restarts;
  if (flags.seed) b.seed = *flags.seed;
  if (b.atoms < 1) throw InputError("atoms: must be at least 1");
  if (b.iters < 0) throw InputError("iters: must be non-negative");
  if (b.restarts < 1) throw InputError("restarts: must be at least 1");
  if (b.grid.points < 2) throw InputError("grid_points: must be at least 2");
  if (!(b.grid.lo > 0.0) || !(b.grid.hi > b.grid.lo) || std::isinf(b.grid.hi))
    throw InputError("grid: need 0 < grid_lo < grid_hi < inf");
  return b;
}

OracleBudget sweep_budget() {
  OracleBudget b;
  b.grid.points = 256;
  b.atoms = 16;
  b.iters = 400;
  b.restarts = 2;
  b.widenings = 2;
  return b;
}

VerifyConfig parse_verify_config(const std::string& text) {
  const Json j = parse_json_text(text);
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  VerifyConfig c;
  auto integer = [&](const char* key) -> std::optional<long long> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_integer()) throw InputError(std::string(key) + ": expected an integer");
    return j.at(key).get<long long>();
  };
  auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number()) throw InputError(std::string(key) + ": expected a number");
    return j.at(key).get<double>();
  };
  if (auto v = integer("count")) c.count = static_cast<int>(*v);
  if (auto v = integer("seed")) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = number("upper_band")) c.upper_band = *v;
  if (auto v = number("lower_band")) c.lower_band = *v;
  if (auto v = number("kernel_band")) c.kernel_band = *v;
  if (auto v = integer("widenings")) c.widenings = static_cast<int>(*v);
  if (j.contains("check_forms")) {
    if (!j.at("check_forms").is_boolean()) throw InputError("check_forms: expected a boolean");
    c.check_forms = j.at("check_forms").get<bool>();
  }
  if (j.contains("regimes")) {
    const Json& r = j.at("regimes");
    if (!r.is_array() || r.empty()) throw InputError("regimes: expected a non-empty list");
    c.regimes.clear();
    for (const auto& s : r) {
      if (!s.is_string()) throw InputError("regimes: expected strings");
      c.regimes.push_back(RegimeSel::parse(s.get<std::string>()));
    }
  }
  if (j.contains("inject")) {
    const Json& in = j.at("inject");
    if (!in.is_array()) throw InputError("inject: expected a list of specs");
    for (const auto& s : in) c.inject.push_back(parse_spec(s.dump()));
  }
  if (j.contains("budget")) {
    // Reuse the spec parser for the budget block.
    Json wrapper = {{"q", 1}, {"r", 1}};
    const Json unit = Json::array({Json{{"lo", 0}, {"hi", nullptr}, {"coeff", 1}, {"exponent", 0}}});
    wrapper["u"] = wrapper["v"] = wrapper["w"] = unit;
    wrapper["oracle"] = j.at("budget");
    c.budget = parse_spec(wrapper.dump()).oracle;
  }
  if (c.count < 1) throw InputError("count: must be at least 1");
  if (!(c.upper_band > 0.0) || !(c.lower_band > 0.0) || !(c.kernel_band > 0.0))
    throw InputError("bands: must be positive");
  if (c.widenings < 1) throw InputError("widenings: must be at least 1");
  return c;
}

std::vector<VerifyRow> run_verify(const VerifyConfig& cfg, const BudgetFlags& flags) {
  if (cfg.count < 1) throw InputError("count: must be at least 1");
  OracleBudget base = oracle_budget(sweep_budget(), cfg.budget, flags);
  base.widenings = cfg.widenings;
  std::vector<VerifyRow> rows;
  for (int i = 0; i < cfg.count; ++i) {
    VerifyRow row;
    row.index = i;
    if (i < static_cast<int>(cfg.inject.size())) {
      row.source = "injected";
      row.spec = cfg.inject[i];
      row.regime = RegimeSel{row.spec.q >= 1.0, row.spec.r >= 1.0}.label();
    } else {
      const RegimeSel regime = cfg.regimes[static_cast<std::size_t>(i) % cfg.regimes.size()];
      row.source = "generated";
      row.seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(i);
      row.spec = gen_random_instance(row.seed, regime);
      row.regime = regime.label();
    }
    const ProblemInstance p = row.spec.instance();
    const CriteriaReport report = criteria_constant(p);
    row.aggregate = report.aggregate;

    OracleBudget budget = base;
    if (std::isfinite(row.aggregate)) budget.reference = row.aggregate;
    row.oracle = estimate_constant(p, budget).best_ratio;

    if (std::isfinite(row.aggregate)) {
      if (std::isinf(row.oracle)) {
        row.violations.push_back("oracle unbounded while the aggregate is finite");
      } else if (row.oracle > 0.0) {
        const double lr = std::log2(row.aggregate / row.oracle);
        row.log2_ratio = lr;
        if (lr < -cfg.upper_band) row.violations.push_back("oracle above 2^upper_band * aggregate");
        if (lr > cfg.lower_band) row.violations.push_back("aggregate above 2^lower_band * oracle");
      }
    }

    if (row.spec.q == 1.0) {
      const bool small = report.has("K1");
      const double ks = small ? report.value("K1") + report.value("K2")
                              : report.value("O1") + report.value("O2");
      if (std::isfinite(ks) != std::isfinite(row.aggregate)) {
        row.violations.push_back("kernel criteria and aggregate disagree on finiteness");
      } else if (std::isfinite(ks) && ks > 0.0) {
        row.kernel_log2 = std::log2(row.aggregate / ks);
        if (std::abs(*row.kernel_log2) > cfg.kernel_band)
          row.violations.push_back("kernel criteria outside kernel_band");
      }
    }

    if (cfg.check_forms) {
      const FormComparison fc = compare_forms(p, budget);
      const double s = fc.supremal.best_ratio, k = fc.kernel.best_ratio;
      if (std::isfinite(s) && std::isfinite(k) && s > 0.0) {
        row.forms_log2 = std::log2(k / s);
        if (*row.forms_log2 < cfg.forms_min - 1e-9 || *row.forms_log2 > cfg.forms_max)
          row.violations.push_back("kernel/supremal ratio outside [2^forms_min, 2^forms_max]");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json verify_json(const VerifyConfig& cfg, const std::vector<VerifyRow>& rows) {
  Json j;
  j["count"] = cfg.count;
  j["seed"] = cfg.seed;
  j["upper_band"] = cfg.upper_band;
  j["lower_band"] = cfg.lower_band;
  j["kernel_band"] = cfg.kernel_band;
  int passed = 0;
  Json list = Json::array();
  Json failures = Json::array();
  for (const auto& r : rows) {
    Json o;
    o["index"] = r.index;
    o["source"] = r.source;
    o["seed"] = r.seed;
    o["regime"] = r.regime;
    o["q"] = r.spec.q;
    o["r"] = r.spec.r;
    o["aggregate"] = extended(r.aggregate);
    o["oracle"] = extended(r.oracle);
    o["log2_ratio"] = maybe(r.log2_ratio);
    o["kernel_log2"] = maybe(r.kernel_log2);
    o["forms_log2"] = maybe(r.forms_log2);
    o["pass"] = r.pass();
    if (r.pass()) {
      ++passed;
    } else {
      o["violations"] = r.violations;
      failures.push_back(Json{{"index", r.index}, {"spec", spec_to_json(r.spec)}});
    }
    list.push_back(std::move(o));
  }
  j["passed"] = passed;
  j["failed"] = static_cast<int>(rows.size()) - passed;
  j["instances"] = std::move(list);
  j["failures"] = std::move(failures);
  return j;
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::ostringstream s;
  s << "index,source,seed,regime,q,r,aggregate,oracle,log2_ratio,kernel_log2,forms_log2,pass\n";
  for (const auto& r : rows) {
    s << r.index << ',' << r.source << ',' << r.seed << ",\"" << r.regime << "\"," << fmt(r.spec.q)
      << ',' << fmt(r.spec.r) << ',' << fmt(r.aggregate) << ',' << fmt(r.oracle) << ','
      << fmt(r.log2_ratio) << ',' << fmt(r.kernel_log2) << ',' << fmt(r.forms_log2) << ','
      << (r.pass() ? 1 : 0) << '\n';
  }
  return s.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Criteria, extremal search and verification for iterated Hardy-type inequalities"};
  app.require_subcommand(1);

  std::string spec_path, out_path, config_path;
  std::optional<int> atoms, iters, restarts, count, kmin, kmax;
  std::optional<std::uint64_t> seed;
  std::optional<double> upper, lower;

  auto* c_criteria = app.add_subcommand("criteria", "Evaluate every criterion functional");
  c_criteria->add_option("--spec", spec_path, "Instance spec (JSON)")->required();
  c_criteria->add_option("--out", out_path, "Report path (stdout when omitted)");

  auto* c_oracle = app.add_subcommand("oracle", "Estimate the best constant with atomic h");
  c_oracle->add_option("--spec", spec_path, "Instance spec (JSON)")->required();
  c_oracle->add_option("--out", out_path, "Report path (stdout when omitted)");
  c_oracle->add_option("--seed", seed, "RNG seed");
  c_oracle->add_option("--atoms", atoms, "Atoms per candidate");
  c_oracle->add_option("--iters", iters, "Ascent iterations per restart");
  c_oracle->add_option("--restarts", restarts, "Ascent restarts");

  auto* c_verify = app.add_subcommand("verify", "Random equivalence sweep");
  c_verify->add_option("--config", config_path, "Sweep config (JSON)");
  c_verify->add_option("--out", out_path, "Summary path; a .csv table is written next to it");
  c_verify->add_option("--seed", seed, "Sweep seed");
  c_verify->add_option("--count", count, "Number of instances");
  c_verify->add_option("--upper-band", upper, "log2 bound on oracle / aggregate");
  c_verify->add_option("--lower-band", lower, "log2 bound on aggregate / oracle");
  c_verify->add_option("--atoms", atoms, "Atoms per candidate");
  c_verify->add_option("--iters", iters, "Ascent iterations per restart");
  c_verify->add_option("--restarts", restarts, "Ascent restarts");

  auto* c_partition = app.add_subcommand("partition", "Dyadic covering sequence of u");
  c_partition->add_option("--spec", spec_path, "Instance spec (JSON)")->required();
  c_partition->add_option("--out", out_path, "Report path (stdout when omitted)");
  c_partition->add_option("--kmin", kmin, "Smallest index");
  c_partition->add_option("--kmax", kmax, "Largest index");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (c_criteria->parsed()) {
      const InstanceSpec spec = parse_spec(read_file(spec_path));
      const auto t0 = std::chrono::steady_clock::now();
      const CriteriaReport report = criteria_constant(spec.instance());
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      emit(criteria_json(spec, report, dt.count()), out_path, out);
      return kPass;
    }
    if (c_oracle->parsed()) {
      const InstanceSpec spec = parse_spec(read_file(spec_path));
      const OracleBudget budget =
          oracle_budget(OracleBudget{}, spec.oracle, BudgetFlags{atoms, iters, restarts, seed});
      emit(oracle_json(estimate_constant(spec.instance(), budget)), out_path, out);
      return kPass;
    }
    if (c_partition->parsed()) {
      const InstanceSpec spec = parse_spec(read_file(spec_path));
      const int lo = kmin.value_or(spec.k_min.value_or(-10));
      const int hi = kmax.value_or(spec.k_max.value_or(10));
      if (lo > hi) throw InputError("kmin must not exceed kmax");
      const ProblemInstance p = spec.instance();
      emit(partition_json(p.u(), covering_sequence(p.u(), lo, hi)), out_path, out);
      return kPass;
    }
    if (c_verify->parsed()) {
      VerifyConfig cfg;
      if (!config_path.empty()) cfg = parse_verify_config(read_file(config_path));
      if (count) cfg.count = *count;
      if (seed) cfg.seed = *seed;
      if (upper) cfg.upper_band = *upper;
      if (lower) cfg.lower_band = *lower;
      if (cfg.count < 1) throw InputError("count: must be at least 1");
      if (!(cfg.upper_band > 0.0) || !(cfg.lower_band > 0.0))
        throw InputError("bands: must be positive");
      const auto rows = run_verify(cfg, BudgetFlags{atoms, iters, restarts, std::nullopt});
      const Json summary = verify_json(cfg, rows);
      emit(summary, out_path, out);
      if (!out_path.empty()) {
        const std::string stem = strip_json_ext(out_path);
        write_text(stem + ".csv", verify_csv(rows));
        for (const auto& r : rows) {
          if (!r.pass())
            write_text(stem + ".fail-" + std::to_string(r.index) + ".json",
                       spec_to_json(r.spec).dump(2) + "\n");
        }
      }
      for (const auto& r : rows) {
        if (!r.pass()) {
          err << "instance " << r.index << " failed: " << r.violations.front() << "\n";
        }
      }
      return summary["failed"].get<int>() == 0 ? kPass : kViolation;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariantError;
  }
  return kInputError;
}

}  // namespace hardycert::cli
