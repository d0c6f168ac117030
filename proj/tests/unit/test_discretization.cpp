#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hardycert;
using namespace hardycert::testing;

namespace {

PiecewisePower mass_three() { return two_piece(0.0, -2.0, 1.0, 2.0); }

WeightedSequence seq(int first, std::vector<double> v) { return WeightedSequence{first, std::move(v)}; }

}  // namespace

TEST_CASE("covering sequence of the identity cumulative") {
  const auto cov = covering_sequence(one(), -2, 2);
  REQUIRE(cov.points.size() == 5);
  for (int k = -2; k <= 2; ++k) CHECK(cov.x(k) == doctest::Approx(std::ldexp(1.0, k)).epsilon(1e-15));
  CHECK_FALSE(cov.M);
  CHECK(cov.total_mass == kInf);
  CHECK_FALSE(cov.truncated);
}

TEST_CASE("covering sequence with finite mass") {
  const auto u = mass_three();
  const auto cov = covering_sequence(u, -1, 5);
  REQUIRE(cov.M);
  CHECK(*cov.M == 1);
  CHECK(cov.truncated);
  CHECK(cov.k_max() == 2);
  CHECK(cov.x(-1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cov.x(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cov.x(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cov.x(2) == kInf);
  CHECK(brute_cumulative(u, cov.x(1)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(brute_cumulative(u, cov.x(-1)) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("exact power of two mass") {
  // Total mass 4: M = 1 so that x_2 = inf and 2^M <= mass holds with room.
  const auto u = two_piece(0.0, -2.0, 1.0, 3.0);
  const auto cov = covering_sequence(u, 0, 4);
  REQUIRE(cov.M);
  CHECK(*cov.M == 1);
  CHECK(cov.x(2) == kInf);
}

TEST_CASE("covering property on random weights") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = cli::gen_random_instance(1000 + trial, {true, true});
    const PiecewisePower uu(spec.u);
    const auto cov = covering_sequence(uu, -30, 30);
    for (int k = cov.k_min; k <= cov.k_max(); ++k) {
      const double x = cov.x(k);
      if (std::isinf(x)) {
        CHECK(cov.M);
        CHECK(k == *cov.M + 1);
        continue;
      }
      // A steep jump of u can make a single ulp of x worth more than 1e-10 of the mass.
      const double ulp_mass = 4.0 * uu(x) * (std::nextafter(x, kInf) - x);
      CHECK(std::abs(uu.cumulative(x) - std::ldexp(1.0, k)) <= 1e-10 * std::ldexp(1.0, k) + ulp_mass);
      if (k > cov.k_min) CHECK(x > cov.x(k - 1));
    }
    if (cov.M) {
      CHECK(std::ldexp(1.0, *cov.M) <= cov.total_mass);
      CHECK(cov.total_mass <= std::ldexp(1.0, *cov.M + 1));
    }
  }
}

TEST_CASE("block norm A") {
  const auto p = canonical();
  // v_mono = 1: blocks of int w over [2^k, 2^{k+1}] give 2^k * 2^k.
  const auto cov = covering_sequence(one(), -3, 3);
  const auto a1 = discrete_block_A(p, cov, one());
  CHECK(a1.value == doctest::Approx(std::ldexp(1.0, 2) * std::ldexp(1.0, 2)).epsilon(1e-14));
  CHECK(a1.argmax_k == 2);
  // v_mono = x: 2^k ln 2 per block, so the truncated sup sits at the last block.
  const auto vx = PiecewisePower::power(1.0, 1.0);
  const auto ax = discrete_block_A(p, covering_sequence(one(), -3, 6), vx);
  CHECK(ax.value == doctest::Approx(std::ldexp(1.0, 5) * std::log(2.0)).epsilon(1e-13));
  CHECK(discrete_block_A_auto(p, vx).value == kInf);
  // Homogeneity in v_mono.
  const auto ax2 = discrete_block_A(p, covering_sequence(one(), -3, 6), vx.scaled(2.0));
  CHECK(ax2.value == doctest::Approx(ax.value / 2.0).epsilon(1e-14));
  CHECK(discrete_block_A_auto(p, PiecewisePower::power(1.0, 2.0)).value ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(discrete_block_A(p, cov, two_piece(0.0, -1.0)), PreconditionError);
}

TEST_CASE("block decomposition of the left-hand side") {
  const auto p = canonical();
  const auto cov = covering_sequence(p.u(), -40, 40);
  const auto zero = block_decompose_lhs(p, cov, AtomicFunction{});
  CHECK(zero.block_term == 0.0);
  CHECK(zero.tail_term == 0.0);
  const AtomicFunction h({{1.0, 1.0}});
  const auto d = block_decompose_lhs(p, cov, h);
  const double total = d.block_term + d.tail_term;
  CHECK(total / 0.5 >= 0.125);
  CHECK(total / 0.5 <= 8.0);
  const auto d2 = block_decompose_lhs(p, cov, h.scaled(2.0));
  CHECK(d2.block_term == doctest::Approx(2.0 * d.block_term).epsilon(1e-14));
  CHECK(d2.tail_term == doctest::Approx(2.0 * d.tail_term).epsilon(1e-12));
}

TEST_CASE("geometric sequence equivalences") {
  std::vector<double> tau(11), ones(11, 1.0), single(11, 0.0);
  for (int k = 0; k <= 10; ++k) tau[k] = std::ldexp(1.0, k);
  single[10] = 3.0;
  const auto s = geom_equivalence(seq(0, tau), seq(0, single), kInf, GeomMode::sum);
  CHECK(s.lhs == doctest::Approx(1024.0 * 3.0));
  CHECK(s.rhs == doctest::Approx(1024.0 * 3.0));
  CHECK(s.alpha == doctest::Approx(2.0));
  const auto z = geom_equivalence(seq(0, tau), seq(0, std::vector<double>(11, 0.0)), 1.0, GeomMode::sup);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  const auto f = geom_equivalence(seq(0, tau), seq(0, ones), 1.0, GeomMode::sum);
  CHECK(f.lhs == doctest::Approx(4083.0));
  CHECK(f.rhs == doctest::Approx(2047.0));
  CHECK(f.lhs / f.rhs <= 4.0);
  std::vector<double> flat(11, 1.0);
  CHECK_THROWS_AS(geom_equivalence(seq(0, flat), seq(0, ones), 1.0, GeomMode::sum), PreconditionError);
}

TEST_CASE("geometric equivalence bands on random sequences") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(U(rng) * 30);
    const double alpha = 1.5 + 2.5 * U(rng);
    std::vector<double> tau(n), a(n);
    double t = std::pow(10.0, -3.0 + 6.0 * U(rng));
    for (int k = 0; k < n; ++k) {
      t *= alpha * (1.0 + U(rng));
      tau[k] = t;
      a[k] = std::pow(10.0, -4.0 + 8.0 * U(rng));
    }
    const double qs[] = {0.4, 1.0, 2.5, kInf};
    for (double qexp : qs) {
      for (auto mode : {GeomMode::sum, GeomMode::sup}) {
        const auto g = geom_equivalence(seq(-5, tau), seq(-5, a), qexp, mode);
        CHECK(g.alpha >= alpha * (1.0 - 1e-12));
        CHECK(g.lhs >= g.rhs * (1.0 - 1e-12));
        CHECK(g.lhs <= 64.0 * g.rhs);
      }
    }
  }
}

TEST_CASE("embedding norm examples") {
  const auto e = embedding_rho(seq(0, {1.0, 1.0}), seq(0, {1.0, 1.0}), 0.5);
  CHECK(e.rho_norm == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.bruteforce_lower == doctest::Approx(2.0).epsilon(1e-12));
  const auto big = embedding_rho(seq(0, {1.0, 2.0, 4.0}), seq(0, {3.0, 1.0, 2.0}), 2.0);
  CHECK(big.rho_norm == doctest::Approx(3.0));
  CHECK(big.bruteforce_lower == doctest::Approx(3.0));
  const auto same = embedding_rho(seq(0, {1.0, 5.0}), seq(0, {1.0, 5.0}), 1.0);
  CHECK(same.rho_norm == doctest::Approx(1.0));
  CHECK(lp_norm({3.0, 4.0}, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm({3.0, 4.0}, kInf) == 4.0);
  CHECK(lp_norm({1e300, 1e300}, 1.0) == doctest::Approx(2e300));
}

TEST_CASE("embedding norm is attained") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (double r : {0.3, 0.5, 1.0, 2.0}) {
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 1 + static_cast<int>(U(rng) * 12);
      std::vector<double> v(n), w(n);
      for (int k = 0; k < n; ++k) {
        v[k] = std::pow(10.0, -2.0 + 4.0 * U(rng));
        w[k] = std::pow(10.0, -2.0 + 4.0 * U(rng));
      }
      const auto e = embedding_rho(seq(0, v), seq(0, w), r, trial + 1);
      CHECK(e.bruteforce_lower <= e.rho_norm * (1.0 + 1e-12));
      CHECK(e.rho_norm <= e.bruteforce_lower * (1.0 + 1e-6));
    }
  }
}
