#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hardycert;
using namespace hardycert::testing;

namespace {

AtomicFunction random_atoms(std::mt19937_64& rng, int max_atoms) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int n = 1 + static_cast<int>(U(rng) * max_atoms);
  std::vector<double> pos;
  while (static_cast<int>(pos.size()) < n) pos.push_back(std::pow(10.0, -2.0 + 4.0 * U(rng)));
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::vector<Atom> atoms;
  for (double y : pos) atoms.push_back({y, std::pow(10.0, -1.0 + 2.0 * U(rng))});
  return AtomicFunction(atoms);
}

OracleBudget small_budget() {
  OracleBudget b;
  b.grid.points = 256;
  b.atoms = 8;
  b.iters = 200;
  b.restarts = 2;
  b.widenings = 2;
  return b;
}

}  // namespace

TEST_CASE("atomic functions") {
  CHECK_THROWS_AS(AtomicFunction({{2.0, 1.0}, {1.0, 1.0}}), InvariantError);
  CHECK_THROWS_AS(AtomicFunction({{1.0, 0.0}}), InvariantError);
  CHECK_THROWS_AS(AtomicFunction({{0.0, 1.0}}), InvariantError);
  const AtomicFunction h({{1.0, 1.0}, {2.0, 3.0}});
  CHECK(h.tail(2.0) == 3.0);
  CHECK(h.tail(1.5) == 3.0);
  CHECK(h.tail(1.0) == 4.0);
  CHECK(h.tail(2.5) == 0.0);
}

TEST_CASE("lhs and rhs examples") {
  const auto p = canonical();
  CHECK(lhs_eval(p, AtomicFunction{}) == 0.0);
  CHECK(rhs_eval(p, AtomicFunction{}) == 0.0);
  const AtomicFunction unit({{1.0, 1.0}});
  CHECK(lhs_eval(p, unit) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rhs_eval(p, unit) == 1.0);
  CHECK(rhs_eval(p, AtomicFunction({{1.0, 1.0}, {2.0, 3.0}})) == 13.0);
  const AtomicFunction two({{0.5, 1.0}, {3.0, 0.25}});
  CHECK(lhs_eval(p, two.scaled(2.0)) == doctest::Approx(2.0 * lhs_eval(p, two)).epsilon(1e-14));
}

TEST_CASE("lhs agrees with nested Simpson on random instances") {
  std::mt19937_64 rng(8);
  const cli::RegimeSel regimes[] = {{false, false}, {false, true}, {true, false}, {true, true}};
  for (int i = 0; i < 16; ++i) {
    const auto p = random_instance(500 + i, regimes[i % 4]);
    const auto h = random_atoms(rng, 6);
    for (auto form : {LhsForm::main}) {
      const double fast = lhs_eval(p, h, form);
      const double brute = brute_lhs(p, h);
      CAPTURE(i);
      CAPTURE(fast);
      CAPTURE(brute);
      if (std::isinf(brute) || std::isinf(fast)) continue;
      CHECK(rel_close(fast, brute, 1e-6));
    }
  }
}

TEST_CASE("adding an atom never decreases the lhs") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_instance(700 + i, {i % 2 == 0, i % 3 == 0});
    const auto h = random_atoms(rng, 5);
    auto atoms = h.atoms();
    const double y = std::pow(10.0, -2.0 + 4.0 * U(rng));
    if (std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.position == y; })) continue;
    atoms.push_back({y, 0.5});
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    // Up to the quadrature tolerance: the new atom may carry a negligible share.
    for (auto form : {LhsForm::main, LhsForm::supremal, LhsForm::kernel}) {
      CHECK(lhs_eval(p, AtomicFunction(atoms), form) >= lhs_eval(p, h, form) * (1.0 - 1e-8));
    }
  }
}

TEST_CASE("kernel form dominates the supremal form") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_instance(900 + i, {i % 2 == 0, i % 4 < 2});
    const auto h = random_atoms(rng, 6);
    CHECK(lhs_eval(p, h, LhsForm::kernel) >= lhs_eval(p, h, LhsForm::supremal) * (1.0 - 1e-9));
  }
}

TEST_CASE("dirac scan") {
  const auto p = canonical();
  const auto res = dirac_scan(p, GridSpec{1e-3, 1e3, 64});
  CHECK(res.best_ratio == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(res.exactness == Exactness::exact_convex);
  CHECK(res.witness.size() == 1);
  const ProblemInstance lin(one(), PiecewisePower::power(1.0, 1.0), one(), 1.0, 1.0);
  const double small = dirac_scan(lin, GridSpec{1e-3, 1e3, 64}).best_ratio;
  const double wide = dirac_scan(lin, GridSpec{1e-6, 1e6, 64}).best_ratio;
  CHECK(wide > 100.0 * small);
  // Single grid point.
  const auto one_pt = dirac_scan(p, GridSpec{3.0, 3.0, 1});
  CHECK(one_pt.best_ratio ==
        doctest::Approx(lhs_eval(p, AtomicFunction({{3.0, 1.0}})) / p.v_up()(3.0)).epsilon(1e-14));
  CHECK(dirac_scan(steep_tail_instance(), GridSpec{}).exactness == Exactness::lower_bound);
}

TEST_CASE("raw v scan matches the envelope scan") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    const auto p = random_instance(seed, {true, true});
    const GridSpec g{1e-4, 1e4, 200};
    const auto a = dirac_scan(p, g, false);
    const auto b = dirac_scan(p, g, true);
    CHECK(rel_close(a.best_ratio, b.best_ratio, 1e-9));
  }
}

TEST_CASE("ascent") {
  const auto p = canonical();
  const auto res = ascent_optimize(p, 8, 300, 2, 7);
  CHECK(res.best_ratio >= 0.5 * (1.0 - 1e-6));
  CHECK(res.best_ratio <= 0.5 * (1.0 + 1e-6));
  CHECK(res.exactness == Exactness::lower_bound);
  // No iterations: the ratio of the initial atom.
  const auto idle = ascent_optimize(steep_tail_instance(), 1, 0, 1, 3);
  REQUIRE(idle.witness.size() == 1);
  CHECK(idle.best_ratio == doctest::Approx(lhs_eval(steep_tail_instance(), idle.witness) /
                                           rhs_eval(steep_tail_instance(), idle.witness))
                               .epsilon(1e-12));
  // Same seed, scaled v.
  const auto q = steep_tail_instance();
  const auto a = ascent_optimize(q, 4, 100, 2, 11);
  const auto b = ascent_optimize(q.with_v(q.v().scaled(5.0)), 4, 100, 2, 11);
  CHECK(b.best_ratio == doctest::Approx(a.best_ratio / 5.0).epsilon(1e-12));
  CHECK_THROWS(ascent_optimize(q, 0, 10, 1, 1));
}

TEST_CASE("ascent is deterministic") {
  const auto p = random_instance(3, {false, false});
  const auto a = ascent_optimize(p, 6, 150, 3, 42);
  const auto b = ascent_optimize(p, 6, 150, 3, 42);
  CHECK(a.best_ratio == b.best_ratio);
  CHECK(a.witness == b.witness);
}

TEST_CASE("estimate_constant") {
  const auto res = estimate_constant(canonical(), small_budget());
  CHECK(res.best_ratio == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(res.exactness == Exactness::exact_convex);
  const ProblemInstance dead(one(), PiecewisePower::power(1.0, -0.5), one(), 1.0, 1.0);
  CHECK(estimate_constant(dead, small_budget()).best_ratio == kInf);
  const auto low = estimate_constant(steep_tail_instance(), small_budget());
  CHECK(low.exactness == Exactness::lower_bound);
  CHECK(std::isfinite(low.best_ratio));
}

TEST_CASE("dual inequality preserves ratios") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_instance(300 + i, {i % 2 == 0, i % 4 < 2});
    const auto d = dualize(p);
    const auto h = random_atoms(rng, 5);
    const double ratio = lhs_eval(p, h) / rhs_eval(p, h);
    const double dual = lhs_eval_dual(d, h.reflected()) / rhs_eval_dual(d, h.reflected());
    CHECK(rel_close(ratio, dual, 1e-6));
  }
}

TEST_CASE("form comparison") {
  const auto fc = compare_forms(canonical(), small_budget());
  CHECK(fc.kernel.best_ratio >= fc.supremal.best_ratio * (1.0 - 1e-12));
  CHECK(fc.kernel.best_ratio <= 64.0 * fc.supremal.best_ratio);
}
