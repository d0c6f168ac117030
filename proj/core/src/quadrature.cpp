#include "hardycert/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <vector>

#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"

namespace hardycert {

namespace {

constexpr int kNodes = 8;
constexpr double kLn10 = std::numbers::ln10;

struct GaussRule {
  std::array<double, kNodes> x{};
  std::array<double, kNodes> log_w{};
};

GaussRule make_rule() {
  GaussRule rule;
  for (int i = 0; i < kNodes; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (kNodes + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= kNodes; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kNodes * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.x[i] = z;
    rule.log_w[i] = std::log(2.0 / ((1.0 - z * z) * dp * dp));
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

struct Divergent {};

struct Panel {
  double l, r;
  double half_l, half_r;  // log values of the two half-panel rules
  double value;           // log of the refined estimate
  double err;             // log of |coarse - refined|
};

class Engine {
 public:
  explicit Engine(const LogIntegrand& f) : f_(f) {}

  double gauss(double l, double r) const {
    const auto& g = rule();
    const double half = 0.5 * (r - l);
    const double mid = 0.5 * (r + l);
    const double log_half = std::log(half);
    std::array<double, kNodes> terms{};
    double peak = kNegInf;
    for (int i = 0; i < kNodes; ++i) {
      const double y = mid + half * g.x[i];
      const double lf = f_(std::exp(y));
      if (std::isnan(lf)) throw DomainError("integrand returned NaN");
      if (lf == kInf) throw Divergent{};
      terms[i] = lf + y + g.log_w[i] + log_half;
      peak = std::max(peak, terms[i]);
    }
    if (peak == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - peak);
    return peak + std::log(s);
  }

  Panel make(double l, double r, double coarse) const {
    const double mid = 0.5 * (l + r);
    Panel p{l, r, gauss(l, mid), gauss(mid, r), 0.0, 0.0};
    p.value = log_add(p.half_l, p.half_r);
    const double peak = std::max(coarse, p.value);
    if (peak == kNegInf) {
      p.err = kNegInf;
    } else {
      const double d = std::abs(std::exp(coarse - peak) - std::exp(p.value - peak));
      p.err = d > 0.0 ? peak + std::log(d) : kNegInf;
    }
    return p;
  }

  Panel make(double l, double r) const { return make(l, r, gauss(l, r)); }

 private:
  const LogIntegrand& f_;
};

double log_sum(const std::vector<Panel>& panels) {
  double s = kNegInf;
  for (const auto& p : panels) s = log_add(s, p.value);
  return s;
}

}  // namespace

QuadOptions QuadOptions::from_env() {
  QuadOptions o;
  if (const char* env = std::getenv("HARDYCERT_QUAD_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && std::isfinite(v)) o.rel_tol = v;
  }
  return o;
}

QuadResult integrate_log(const LogIntegrand& log_f, double a, double b,
                         std::span<const double> breaks, const QuadOptions& opts) {
  if (!(a >= 0.0) || !(b > a)) throw DomainError("integrate_log: need 0 <= a < b");
  const Engine eng(log_f);
  const bool open_left = a == 0.0;
  const bool open_right = b == kInf;
  const double ya = open_left ? kNegInf : std::log(a);
  const double yb = open_right ? kInf : std::log(b);

  std::vector<double> anchors;
  for (double x : breaks) {
    if (x > a && x < b) anchors.push_back(std::log(x));
  }
  if (!open_left) anchors.push_back(ya);
  if (!open_right) anchors.push_back(yb);
  if (anchors.empty()) anchors.push_back(0.0);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  const double c0 = open_left ? anchors.front() - 1.0 : ya;
  const double c1 = open_right ? anchors.back() + 1.0 : yb;

  std::vector<double> cuts{c0};
  for (double y : anchors) {
    if (y > c0 && y < c1) cuts.push_back(y);
  }
  cuts.push_back(c1);

  std::vector<Panel> panels;
  double remainder = kNegInf;  // log of extrapolated tail mass beyond the last tail panel
  try {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double gap = cuts[i + 1] - cuts[i];
      const int n = std::max(1, static_cast<int>(std::ceil(gap / opts.panel_width)));
      for (int k = 0; k < n; ++k) {
        const double l = cuts[i] + gap * k / n;
        const double r = k + 1 == n ? cuts[i + 1] : cuts[i] + gap * (k + 1) / n;
        panels.push_back(eng.make(l, r));
      }
    }

    const double tail_width = 2.0 * opts.panel_width;
    const int max_tail = static_cast<int>(std::ceil(opts.tail_decades * kLn10 / tail_width));
    auto march = [&](double edge, double dir) -> bool {
      double total = log_sum(panels);
      double prev = kNaN;
      double ratio = kInf;
      int zero_run = 0;
      for (int k = 0; k < max_tail; ++k) {
        const double y0 = edge + dir * tail_width * k;
        const double y1 = edge + dir * tail_width * (k + 1);
        panels.push_back(eng.make(std::min(y0, y1), std::max(y0, y1)));
        const double cur = panels.back().value;
        total = log_add(total, cur);
        if (cur == kNegInf) {
          if (++zero_run >= 2) return true;
          prev = cur;
          continue;
        }
        zero_run = 0;
        if (!std::isnan(prev) && prev > kNegInf) {
          ratio = std::exp(cur - prev);
          if (ratio < 1.0 - 1e-9) {
            const double rem = cur + std::log(ratio / (1.0 - ratio));
            if (rem < std::log(opts.tail_tol) + total) {
              remainder = log_add(remainder, rem);
              return true;
            }
          }
        }
        prev = cur;
      }
      if (!(ratio < 1.0 - 1e-9)) return false;
      remainder = log_add(remainder, prev + std::log(ratio / (1.0 - ratio)));
      return true;
    };
    if (open_left && !march(c0, -1.0)) return {kInf, 0.0, true};
    if (open_right && !march(c1, 1.0)) return {kInf, 0.0, true};

    const double scale = log_add(log_sum(panels), remainder);
    if (scale == kNegInf) return {kNegInf, 0.0, true};

    std::vector<double> val(panels.size()), err(panels.size());
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;
    double total_v = 0.0, total_e = 0.0;
    auto recompute = [&] {
      total_v = 0.0;
      total_e = 0.0;
      for (std::size_t i = 0; i < panels.size(); ++i) {
        total_v += val[i];
        total_e += err[i];
      }
    };
    for (std::size_t i = 0; i < panels.size(); ++i) {
      val[i] = ext_exp(panels[i].value - scale);
      err[i] = ext_exp(panels[i].err - scale);
      heap.emplace(err[i], i);
    }
    recompute();
    const double rem_v = ext_exp(remainder - scale);

    int splits = 0;
    bool converged = true;
    while (total_e > opts.rel_tol * (total_v + rem_v)) {
      if (static_cast<int>(panels.size()) >= opts.max_panels || heap.empty()) {
        converged = false;
        break;
      }
      const auto [e, idx] = heap.top();
      heap.pop();
      const Panel parent = panels[idx];
      const double mid = 0.5 * (parent.l + parent.r);
      if (!(mid > parent.l && mid < parent.r)) continue;  // cannot split further
      const Panel left = eng.make(parent.l, mid, parent.half_l);
      const Panel right = eng.make(mid, parent.r, parent.half_r);
      total_v -= val[idx];
      total_e -= err[idx];
      panels[idx] = left;
      val[idx] = ext_exp(left.value - scale);
      err[idx] = ext_exp(left.err - scale);
      panels.push_back(right);
      val.push_back(ext_exp(right.value - scale));
      err.push_back(ext_exp(right.err - scale));
      total_v += val[idx] + val.back();
      total_e += err[idx] + err.back();
      heap.emplace(err[idx], idx);
      heap.emplace(err.back(), panels.size() - 1);
      if (++splits % 128 == 0) recompute();
    }
    recompute();
    const double sum = total_v + rem_v;
    QuadResult res;
    res.log_value = scale + std::log(sum);
    res.rel_error = (total_e + (open_left || open_right ? rem_v * 1e-3 : 0.0)) / sum;
    res.converged = converged;
    return res;
  } catch (const Divergent&) {
    return {kInf, 0.0, true};
  }
}

SupResult sup_over_t(const std::function<double(double)>& log_F, std::span<const double> anchors,
                     const SupOptions& opts) {
  std::vector<double> lnA;
  for (double a : anchors) {
    if (a > 0.0 && std::isfinite(a)) lnA.push_back(std::log(a));
  }
  if (lnA.empty()) lnA.push_back(0.0);
  std::sort(lnA.begin(), lnA.end());
  lnA.erase(std::unique(lnA.begin(), lnA.end()), lnA.end());

  const double ext = opts.extend_decades * kLn10;
  const double step = opts.far_step_decades * kLn10;
  const int n_far = std::max(
      2, static_cast<int>((opts.far_decades - opts.extend_decades) / opts.far_step_decades));

  std::vector<double> core{lnA.front() - ext};
  core.insert(core.end(), lnA.begin(), lnA.end());
  core.push_back(lnA.back() + ext);

  std::vector<double> ys;
  for (int k = n_far; k >= 1; --k) ys.push_back(core.front() - step * k);
  const std::size_t core_begin = ys.size();
  for (std::size_t i = 0; i + 1 < core.size(); ++i) {
    ys.push_back(core[i]);
    const double gap = core[i + 1] - core[i];
    for (int j = 1; j <= opts.per_interval; ++j)
      ys.push_back(core[i] + gap * j / (opts.per_interval + 1));
  }
  ys.push_back(core.back());
  const std::size_t core_end = ys.size();
  for (int k = 1; k <= n_far; ++k) ys.push_back(core.back() + step * k);

  auto eval = [&](double y) {
    const double v = log_F(std::exp(y));
    if (std::isnan(v)) throw DomainError("sup_over_t: objective returned NaN");
    return v;
  };
  std::vector<double> fs(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    fs[i] = eval(ys[i]);
    if (fs[i] == kInf) return {kInf, std::exp(ys[i])};
  }

  SupResult best{kNegInf, std::exp(ys[core_begin])};
  std::size_t ib = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i] > best.log_value) {
      best = {fs[i], std::exp(ys[i])};
      ib = i;
    }
  }
  if (best.log_value == kNegInf) return best;

  // Boundary trends: f0 is the outermost probe, f1 and f2 the next ones inward.
  auto boundary = [&](double f0, double f1, double f2, double t_limit) -> bool {
    if (f0 == kNegInf) return true;
    const double d = f1 == kNegInf ? kInf : f0 - f1;
    if (d / step <= opts.growth_slope) return true;
    const double d2 = f2 == kNegInf ? kInf : f1 - f2;
    if (d2 > 0.0 && std::isfinite(d2) && d / d2 < 0.8) {
      const double rho = d / d2;
      const double limit = f0 + d * rho / (1.0 - rho);
      if (limit > best.log_value) best = {limit, t_limit};
      return true;
    }
    return false;
  };
  if (!boundary(fs[0], fs[1], fs[2], 0.0)) return {kInf, 0.0};
  const std::size_t n = fs.size();
  if (!boundary(fs[n - 1], fs[n - 2], fs[n - 3], kInf)) return {kInf, kInf};
  (void)core_end;

  // Golden-section refinement between the neighbours of the best candidate.
  double lo = ys[ib == 0 ? 0 : ib - 1];
  double hi = ys[std::min(ib + 1, n - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  auto consider = [&](double x, double f) {
    if (f == kInf) throw Divergent{};
    if (f > best.log_value) best = {f, std::exp(x)};
  };
  try {
    consider(x1, f1);
    consider(x2, f2);
    while (hi - lo > opts.golden_tol) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = eval(x2);
        consider(x2, f2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = eval(x1);
        consider(x1, f1);
      }
    }
  } catch (const Divergent&) {
    return {kInf, std::exp(0.5 * (lo + hi))};
  }
  return best;
}

}  // namespace hardycert
