#include "generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hardycert::cli {

namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  int below(int n) { return std::min(n - 1, static_cast<int>(unit() * n)); }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> breakpoints(Stream& s, int n_pieces) {
  std::vector<double> b;
  while (static_cast<int>(b.size()) < n_pieces - 1) {
    const double x = std::pow(10.0, s.uniform(-2.0, 2.0));
    if (std::find(b.begin(), b.end(), x) == b.end()) b.push_back(x);
  }
  std::sort(b.begin(), b.end());
  return b;
}

std::vector<PowerPiece> build(Stream& s, int n_pieces, double first_exp, double last_exp) {
  const auto cuts = breakpoints(s, n_pieces);
  std::vector<PowerPiece> out;
  double lo = 0.0;
  for (int i = 0; i < n_pieces; ++i) {
    const double hi = i + 1 < n_pieces ? cuts[i] : kInf;
    double e = s.uniform(-2.0, 3.0);
    if (i == 0) e = first_exp;
    if (i + 1 == n_pieces && i > 0) e = last_exp;
    out.push_back({lo, hi, s.uniform(0.2, 5.0), e});
    lo = hi;
  }
  return out;
}

}  // namespace

std::string RegimeSel::label() const {
  return std::string(q_ge_1 ? "q>=1" : "q<1") + "," + (r_ge_1 ? "r>=1" : "r<1");
}

RegimeSel RegimeSel::parse(const std::string& label) {
  for (bool qg : {false, true}) {
    for (bool rg : {false, true}) {
      const RegimeSel r{qg, rg};
      if (r.label() == label) return r;
    }
  }
  throw InputError("unknown regime \"" + label + "\" (expected e.g. \"q<1,r>=1\")");
}

InstanceSpec gen_random_instance(std::uint64_t seed, RegimeSel regime,
                                 std::optional<double> fixed_q) {
  const std::uint64_t tag = (regime.q_ge_1 ? 2u : 0u) + (regime.r_ge_1 ? 1u : 0u);
  Stream s(seed * 0x9E3779B97F4A7C15ULL + tag);
  InstanceSpec spec;
  spec.q = regime.q_ge_1 ? s.uniform(1.0, 3.0) : s.uniform(0.4, 0.9);
  spec.r = regime.r_ge_1 ? s.uniform(1.0, 3.0) : s.uniform(0.35, 0.85);
  if (fixed_q) spec.q = *fixed_q;
  const double q = spec.q, r = spec.r;
  const bool finite = s.unit() < 0.75;

  auto pieces = [&] { return finite ? 2 + s.below(3) : 1 + s.below(4); };
  const int nu = pieces(), nv = pieces(), nw = pieces();

  const double a0 = s.uniform(-0.9, 2.0);
  const double b0 = s.uniform(-0.9, 2.0);
  double g0 = s.uniform(-0.9, 2.0);
  double a1 = s.uniform(-2.0, 2.5);
  double b1 = s.uniform(-2.0, 2.5);
  double g1 = s.uniform(-2.0, 2.5);
  if (finite) {
    // Balance U^{1/r} (int sigma^q w)^{1/q} ~ t^{(a+1)/r + (g+1)/q - b} so that it
    // decays at both ends with a margin.
    const double m0 = s.uniform(0.2, 1.0);
    const double m1 = s.uniform(0.2, 1.0);
    g0 = std::max(g0, q * (b0 - (a0 + 1.0) / r + m0) - 1.0);
    b1 = s.uniform(0.5, 2.5);
    a1 = s.uniform(-0.9, 1.0);
    g1 = q * (b1 - (a1 + 1.0) / r - m1) - 1.0;
  }
  spec.u = build(s, nu, a0, a1);
  spec.v = build(s, nv, b0, b1);
  spec.w = build(s, nw, g0, g1);
  return spec;
}

}  // namespace hardycert::cli
