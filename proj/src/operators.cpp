#include "grandlp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grandlp/errors.hpp"
#include "grandlp/extremum.hpp"
#include "grandlp/parallel.hpp"
#include "grandlp/quadrature.hpp"

namespace grandlp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Young constants

namespace {

// log(x)/x, with the limit 0 at infinity.
double log_over(double x) { return std::isinf(x) ? 0.0 : std::log(x) / x; }

double conjugate(double x) {
  if (std::isinf(x)) return 1.0;
  if (x == 1.0) return kInfinity;
  return x / (x - 1.0);
}

}  // namespace

YoungTriple YoungTriple::from_pq(double p, double q) {
  if (!(p >= 1) || !(q >= 1) || std::isnan(p) || std::isnan(q)) {
    throw RejectedInput("Young triple needs p, q >= 1");
  }
  const double sum = 1.0 / p + 1.0 / q;
  if (sum < 1.0 - 1e-12 || sum > 2.0 + 1e-12) {
    throw RejectedInput("Young triple needs 1 <= 1/p + 1/q <= 2");
  }
  YoungTriple y;
  y.p = p;
  y.q = q;
  const double inv_r = std::max(0.0, sum - 1.0);
  y.r = inv_r == 0.0 ? kInfinity : 1.0 / inv_r;
  y.s = conjugate(p);
  y.t = conjugate(q);
  y.z = conjugate(y.r);
  return y;
}

double young_constant(double p, double q, int n) {
  if (n < 1) throw RejectedInput("young_constant: dimension must be >= 1");
  const auto y = YoungTriple::from_pq(p, q);
  const double l = log_over(y.p) - log_over(y.s) + log_over(y.q) - log_over(y.t) -
                   log_over(y.r) + log_over(y.z);
  return std::exp(0.5 * n * l);
}

double young_constant_as_displayed(double p, double q, int n) {
  if (n < 1) throw RejectedInput("young_constant: dimension must be >= 1");
  const auto y = YoungTriple::from_pq(p, q);
  const double l = log_over(y.p) - log_over(y.s) + log_over(y.q) - log_over(y.t) +
                   log_over(y.r) - log_over(y.z);
  return std::exp(0.5 * n * l);
}

void to_json(json& j, const InequalityReport& r) {
  j = {{"theorem", r.theorem}, {"lhs", r.lhs},   {"rhs", r.rhs},
       {"ratio", r.ratio},     {"pass", r.pass}, {"grid", r.grid}};
  j["empirical_constant"] = r.empirical_constant ? json(*r.empirical_constant) : json(nullptr);
}

namespace {

InequalityReport make_report(std::string theorem, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.theorem = std::move(theorem);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs > 0 ? lhs / rhs : std::numeric_limits<double>::infinity();
  r.pass = std::isfinite(lhs) && lhs <= rhs * (1 + tol);
  return r;
}

// Interior points of a bounded interval, away from the ends by 2% of its width.
std::vector<double> interior(const ExponentInterval& d, int n) {
  const double w = d.b() - d.a();
  return linspace(d.a() + 0.02 * w, d.b() - 0.02 * w, n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Tensor

InequalityReport tensor_check(const RadialFunction& f, const WeightedSpace& X1,
                              const PsiFunction& psi1, const RadialFunction& g,
                              const WeightedSpace& X2, const PsiFunction& psi2) {
  const PsiFunction psi = product(psi1, psi2);
  const auto joint = g_norm_of(
      [&](double p) { return lp_norm(f, X1, p).value * lp_norm(g, X2, p).value; }, psi);
  double nf = g_norm(f, psi1, X1).norm;
  double ng = g_norm(g, psi2, X2).norm;
  // Each factor is a supremum, so it is at least its value at the best joint
  // sample; near an endpoint the separate searches can fall short of it
  // by quadrature noise.
  if (!joint.samples.empty()) {
    const double p = std::max_element(joint.samples.begin(), joint.samples.end(),
                                      [](const auto& x, const auto& y) { return x[1] < y[1]; })
                         ->at(0);
    nf = std::max(nf, lp_norm(f, X1, p).value / psi1(p));
    ng = std::max(ng, lp_norm(g, X2, p).value / psi2(p));
  }
  auto rep = make_report("lemma1", joint.norm, nf * ng, 1e-9);
  rep.grid = {{"a", psi.domain().a()},
              {"b", psi.domain().b()},
              {"p_star", joint.p_star},
              {"attained", to_string(joint.attained)}};
  return rep;
}

double tensor_lp_direct(const RadialFunction& f, const WeightedSpace& X1, const RadialFunction& g,
                        const WeightedSpace& X2, double p) {
  if (f.is_closure()) throw UnsupportedInput("tensor_lp_direct needs a piecewise f");
  check_finite(f, X1, p);
  check_finite(g, X2, p);
  const double d1 = X1.degree();
  // Inner integral of |f(r) g(rho)|^p over rho for a fixed r.
  auto slice = [&](double t) {
    const double fr = f(std::exp(t));
    if (fr == 0.0) return 0.0;
    const double inner = lp_norm_quadrature(g.scaled(fr), X2, p).value;
    return std::exp(d1 * t) * std::pow(inner, p) / X2.radial_factor();
  };
  const double lo = f.support_lo(), hi = f.support_hi();
  std::vector<double> nodes;
  if (lo > 0) nodes.push_back(std::log(lo));
  for (double b : f.breakpoints()) {
    if (b > lo && b < hi) nodes.push_back(std::log(b));
  }
  if (std::isfinite(hi)) nodes.push_back(std::log(hi));
  if (nodes.empty()) nodes.push_back(0.0);
  std::sort(nodes.begin(), nodes.end());
  double total = 0.0;
  if (lo == 0.0) total += integrate_half_line(slice, nodes.front(), -1, 1e-10).value;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    total += integrate_finite(slice, nodes[i], nodes[i + 1], 1e-10).value;
  }
  if (std::isinf(hi)) total += integrate_half_line(slice, nodes.back(), +1, 1e-10).value;
  return std::pow(X1.radial_factor() * X2.radial_factor() * total, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Multiplicative

InequalityReport product_check(const RadialFunction& f, const PsiFunction& psi1,
                               const RadialFunction& g, const PsiFunction& psi2,
                               const WeightedSpace& X) {
  const PsiFunction psi3 = mult_inf(psi1, psi2);
  const RadialFunction fg = multiply(f, g);
  const auto lhs = g_norm(fg, psi3, X);
  const double rhs = g_norm(f, psi1, X).norm * g_norm(g, psi2, X).norm;
  auto rep = make_report("th2", lhs.norm, rhs, 1e-9);
  rep.empirical_constant = rep.ratio;

  int checked = 0, skipped = 0;
  double worst = 0.0;
  for (double r : interior(psi3.domain(), 9)) {
    const auto win = mult_inf_window(psi1.domain(), psi2.domain(), r);
    for (double p : linspace(win.p_lo, win.p_hi, 11)) {
      if (p <= 1.0) continue;
      const double q = p / (p - 1.0);
      try {
        const double left = lp_norm(fg, X, r).value;
        const double right = lp_norm(f, X, p * r).value * lp_norm(g, X, q * r).value;
        worst = std::max(worst, left / right);
        ++checked;
      } catch (const DivergenceError&) {
        ++skipped;
      }
    }
  }
  rep.grid = {{"A1", psi3.domain().a()},         {"B1", psi3.domain().b()},
              {"p_star", lhs.p_star},            {"attained", to_string(lhs.attained)},
              {"holder_checked", checked},       {"holder_skipped", skipped},
              {"holder_max_ratio", worst}};
  rep.pass = rep.pass && worst <= 1 + 1e-9;
  return rep;
}

// ---------------------------------------------------------------------------
// Convolution

std::shared_ptr<const RadialFunction> ConvolutionCache::get(const RadialFunction& f,
                                                            const RadialFunction& g) {
  json key = {f, g};
  const std::string k = key.dump();
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  }
  auto h = std::make_shared<const RadialFunction>(convolve1d(f, g));
  std::lock_guard lock(mu_);
  return cache_.emplace(k, std::move(h)).first->second;
}

InequalityReport convolution_check(const RadialFunction& f, const PsiFunction& psi1,
                                   const RadialFunction& g, const PsiFunction& psi2,
                                   ConvolutionCache* cache) {
  const PsiFunction tau = conv_inf(psi1, psi2);
  const WeightedSpace H = WeightedSpace::half_line();
  const auto h = cache ? cache->get(f, g) : std::make_shared<const RadialFunction>(convolve1d(f, g));
  const auto lhs = g_norm(*h, tau, H);
  const double rhs = g_norm(f, psi1, H).norm * g_norm(g, psi2, H).norm;
  auto rep = make_report("th5", lhs.norm, rhs, 1e-6);
  rep.empirical_constant = rep.ratio;

  int checked = 0, skipped = 0;
  double worst = 0.0;
  for (double r : interior(tau.domain(), 7)) {
    const auto win = conv_inf_window(psi1.domain(), psi2.domain(), r);
    for (double p : linspace(win.p_lo, win.p_hi, 7)) {
      const double inv_q = 1.0 + 1.0 / r - 1.0 / p;
      if (!(inv_q > 0) || inv_q > 1) continue;
      const double q = 1.0 / inv_q;
      try {
        const double left = lp_norm(*h, H, r).value;
        const double right = young_constant(p, q, 1) * lp_norm(f, H, p).value * lp_norm(g, H, q).value;
        worst = std::max(worst, left / right);
        ++checked;
      } catch (const DivergenceError&) {
        ++skipped;
      }
    }
  }
  rep.grid = {{"A3", tau.domain().a()},        {"B3", tau.domain().b()},
              {"p_star", lhs.p_star},          {"attained", to_string(lhs.attained)},
              {"young_checked", checked},      {"young_skipped", skipped},
              {"young_max_ratio", worst}};
  rep.pass = rep.pass && worst <= 1 + 1e-6;
  return rep;
}

// ---------------------------------------------------------------------------
// Sobolev

namespace {

void check_vanishes_at_infinity(const RadialFunction& u) {
  if (u.is_closure()) throw UnsupportedInput("Sobolev check needs a piecewise profile");
  for (const auto& pc : u.pieces()) {
    if (pc.coeff != 0.0 && std::isinf(pc.r_hi()) && !(pc.power < 0)) {
      throw RejectedInput("Sobolev check needs u(r) -> 0 as r -> infinity");
    }
  }
}

}  // namespace

InequalityReport sobolev_check(const RadialFunction& u, const PsiFunction& psi,
                               const SobolevConfig& cfg) {
  check_vanishes_at_infinity(u);
  const PsiFunction nu = sobolev_nu(psi, cfg.n, cfg.m);
  const WeightedSpace X(cfg.n, 0.0), Y(cfg.m, 0.0);
  const RadialFunction grad = gradient_modulus(u, X);
  const auto lhs = g_norm(u, nu, Y);
  const auto rhs = g_norm(grad, psi, X);
  InequalityReport rep;
  rep.theorem = "th3";
  rep.lhs = lhs.norm;
  rep.rhs = rhs.norm;
  rep.ratio = rhs.norm > 0 ? lhs.norm / rhs.norm : std::numeric_limits<double>::infinity();
  rep.empirical_constant = rep.ratio;
  rep.pass = std::isfinite(rep.ratio) && rep.ratio > 0;
  rep.grid = {{"n", cfg.n},
              {"m", cfg.m},
              {"A2", nu.domain().a()},
              {"B2", nu.domain().b()},
              {"lhs_attained", to_string(lhs.attained)},
              {"rhs_attained", to_string(rhs.attained)}};
  return rep;
}

InequalityReport sobolev_lp_step(const RadialFunction& u, const PsiFunction& psi,
                                 const SobolevConfig& cfg, int points) {
  check_vanishes_at_infinity(u);
  const ExponentInterval dom = sobolev_domain(psi.domain(), cfg.n, cfg.m);
  const WeightedSpace X(cfg.n, 0.0), Y(cfg.m, 0.0);
  const RadialFunction grad = gradient_modulus(u, X);
  double worst = 0.0, worst_q = 0.0;
  int checked = 0, skipped = 0;
  for (double q : interior(dom, points)) {
    const double p = q * cfg.n / (q + cfg.m);
    try {
      const double ratio = lp_norm(u, Y, q).value /
                           (std::pow(q, 1.0 - 1.0 / cfg.n) * lp_norm(grad, X, p).value);
      if (ratio > worst) {
        worst = ratio;
        worst_q = q;
      }
      ++checked;
    } catch (const DivergenceError&) {
      ++skipped;
    }
  }
  InequalityReport rep;
  rep.theorem = "th3-lp";
  rep.lhs = worst;
  rep.rhs = worst;
  rep.ratio = 1.0;
  rep.empirical_constant = worst;
  rep.pass = checked >= 8 && std::isfinite(worst) && worst > 0;
  rep.grid = {{"n", cfg.n}, {"m", cfg.m}, {"checked", checked}, {"skipped", skipped},
              {"q_worst", worst_q}};
  return rep;
}

// ---------------------------------------------------------------------------
// Shift family on the circle

RadialFunction shift(const RadialFunction& u, double eps) { return u.shifted(eps); }

namespace {

std::vector<double> profile_cuts(const RadialFunction& u) {
  std::vector<double> c = u.breakpoints();
  if (!u.is_closure()) {
    for (const auto& pc : u.pieces()) {
      if (pc.logpow > 0 || !pc.L.is_unit()) c.push_back(pc.scale - pc.shift);
    }
  }
  return c;
}

// Sorted cut points with near-duplicates (rounding of mapped cuts) merged, so
// no sliver segment repeats a singular end.
void merge_close(std::vector<double>& nodes, double period) {
  std::vector<double> out;
  for (double x : nodes) {
    if (!out.empty() && x - out.back() <= 1e-12 * period) {
      if (x == period) out.back() = period;
      continue;
    }
    out.push_back(x);
  }
  nodes = std::move(out);
}

// Whether |u| blows up as the argument tends to 0 from above.
bool singular_at_zero(const RadialFunction& u) {
  if (u.is_closure()) return u.closure().origin == 0.0 && u.closure().lower_exponent() < 0;
  for (const auto& pc : u.pieces()) {
    if (pc.coeff != 0.0 && pc.r_lo() == 0.0 && pc.shift == 0.0 && (pc.power < 0 || pc.logpow > 0)) {
      return true;
    }
  }
  return false;
}

// Integral over [xa, xb]. With a singular left end the first half is taken in
// s = log(x - xa) on panels of doubling width down to x - xa = 1e-200 w, where
// the weak singularities near p-critical exponents become slowly decaying
// exponentials. Below that the integrand is a pure power c d^k, integrated in
// closed form with k read off two samples.
double integrate_segment(const EndpointAwareIntegrand& f, double xa, double xb, bool singular_left) {
  if (!singular_left) return integrate_finite(f, xa, xb).value;
  const double w = xb - xa, h = 0.5 * w;
  auto g = [&](double s) {
    const double d = std::exp(s);
    return d * f(xa + d, d, w - d);
  };
  const double s_hi = std::log(h), s_lo = std::log(1e-200 * w);
  double total = 0.0;
  for (double hi = s_hi, width = 1.0; hi > s_lo; width *= 2) {
    const double lo = std::max(s_lo, hi - width);
    total += integrate_finite(g, lo, hi).value;
    hi = lo;
  }
  const double d0 = std::exp(s_lo), d1 = std::exp(s_lo - 10.0);
  const double f0 = f(xa + d0, d0, w - d0), f1 = f(xa + d1, d1, w - d1);
  if (f0 > 0 && f1 > 0) {
    const double k = std::log(f0 / f1) / 10.0;
    if (!(k > -1)) throw DivergenceError("integrand is not integrable at the segment start");
    total += d0 * f0 / (k + 1);
  }
  const double right =
      integrate_finite([&](double x, double from_a, double to_b) { return f(x, h + from_a, to_b); }, xa + h, xb)
          .value;
  return total + right;
}

}  // namespace

double periodic_lp(const RadialFunction& u, double p, double period) {
  if (!(p > 0)) throw RejectedInput("periodic_lp: p must be positive");
  std::vector<double> nodes{0.0, period};
  for (double c : profile_cuts(u)) {
    if (c > 0 && c < period) nodes.push_back(c);
  }
  std::sort(nodes.begin(), nodes.end());
  merge_close(nodes, period);
  const bool sing = singular_at_zero(u);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double xa = nodes[i], xb = nodes[i + 1];
    total += integrate_segment(
        [&](double, double from_a, double to_b) {
          const double x = from_a <= to_b ? xa + from_a : xb - to_b;
          return std::pow(std::abs(u(x)), p);
        },
        xa, xb, sing && i == 0);
  }
  return std::pow(total, 1.0 / p);
}

double periodic_shift_diff_lp(const RadialFunction& u, double eps, double delta, double p,
                              double period) {
  if (!(p > 0)) throw RejectedInput("periodic_shift_diff_lp: p must be positive");
  const double P = period;
  const double shifts[2] = {std::fmod(std::fmod(eps, P) + P, P), std::fmod(std::fmod(delta, P) + P, P)};
  std::vector<double> nodes{0.0, P};
  const auto cuts = profile_cuts(u);
  for (double c : shifts) {
    if (c > 0) nodes.push_back(P - c);
    for (double b : cuts) {
      double x = std::fmod(b - c + P, P);
      if (x > 0 && x < P) nodes.push_back(x);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  merge_close(nodes, P);
  const bool sing = singular_at_zero(u);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double xa = nodes[i], xb = nodes[i + 1];
    const double mid = 0.5 * (xa + xb);
    // Argument offsets at both segment ends for each shift; an offset that
    // should vanish is snapped to zero so the singular end stays exact.
    double lo[2], hi[2];
    for (int k = 0; k < 2; ++k) {
      const double wrap = mid + shifts[k] >= P ? P : 0.0;
      lo[k] = xa + shifts[k] - wrap;
      hi[k] = xb + shifts[k] - wrap;
      if (std::abs(lo[k]) < 1e-12 * P) lo[k] = 0.0;
      if (std::abs(hi[k] - P) < 1e-12 * P) hi[k] = P;
    }
    const double w = xb - xa;
    auto diff = [&](double from_a, double to_b) {
      double v[2];
      for (int k = 0; k < 2; ++k) {
        const double arg = from_a <= to_b ? lo[k] + from_a : hi[k] - to_b;
        v[k] = u(arg);
      }
      return v[0] - v[1];
    };
    // Zeros of the difference are kinks of |.|^p; cutting there keeps the
    // tanh-sinh rule on smooth pieces.
    std::vector<double> offs{0.0};
    constexpr int kSamples = 64;
    double o_prev = w / kSamples, d_prev = diff(o_prev, w - o_prev);
    for (int j = 2; j < kSamples; ++j) {
      const double o = w * j / kSamples, d = diff(o, w - o);
      if (d_prev * d < 0) {
        double l = o_prev, r = o;
        for (int it = 0; it < 80 && r - l > 1e-15 * w; ++it) {
          const double m = 0.5 * (l + r);
          (diff(m, w - m) * d_prev < 0 ? r : l) = m;
        }
        offs.push_back(0.5 * (l + r));
      }
      o_prev = o;
      d_prev = d;
    }
    offs.push_back(w);
    for (std::size_t k = 0; k + 1 < offs.size(); ++k) {
      const double oa = offs[k], ob = offs[k + 1];
      total += integrate_segment(
          [&](double, double from_a, double to_b) {
            return std::pow(std::abs(diff(oa + from_a, (w - ob) + to_b)), p);
          },
          xa + oa, xa + ob, k == 0 && sing && (lo[0] == 0.0 || lo[1] == 0.0));
    }
  }
  return std::pow(total, 1.0 / p);
}

std::vector<double> shift_grid(double eps0, int K) {
  if (!(eps0 > 0) || K < 3) throw RejectedInput("shift grid needs eps0 > 0 and K >= 3");
  std::vector<double> out;
  for (int k = 1; k < K; ++k) out.push_back(eps0 * k / K);
  return out;
}

ShiftGapRound min_shift_gap(const RadialFunction& u, const PsiFunction& psi,
                            const std::vector<double>& eps_grid, double period) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    for (std::size_t j = i + 1; j < eps_grid.size(); ++j) {
      if (eps_grid[i] != eps_grid[j]) pairs.emplace_back(i, j);
    }
  }
  if (pairs.empty()) throw RejectedInput("shift grid needs two distinct values");
  // Lebesgue measure on the circle is translation invariant, so the gap only
  // depends on delta - eps mod period; one pair per distinct difference.
  std::map<long long, std::size_t> by_diff;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double diff = std::fmod(eps_grid[pairs[k].second] - eps_grid[pairs[k].first] + period, period);
    by_diff.emplace(std::llround(diff / period * 1e12), k);
  }
  std::vector<std::size_t> reps;
  for (const auto& [key, k] : by_diff) reps.push_back(k);
  std::vector<double> gaps(reps.size());
  parallel_for(reps.size(), [&](std::size_t i) {
    const auto& pr = pairs[reps[i]];
    const double e = eps_grid[pr.first], d = eps_grid[pr.second];
    gaps[i] = g_norm_of([&](double p) { return periodic_shift_diff_lp(u, e, d, p, period); }, psi)
                  .norm;
  });
  const auto it = std::min_element(gaps.begin(), gaps.end());
  const auto& best = pairs[reps[static_cast<std::size_t>(it - gaps.begin())]];
  return {static_cast<int>(eps_grid.size()) + 1, *it, eps_grid[best.first], eps_grid[best.second]};
}

double noncompact_gap(const RadialFunction& u, const PsiFunction& psi,
                      const std::vector<double>& eps_grid, double period) {
  const auto rep = in_g0([&](double p) { return periodic_lp(u, p, period); }, psi);
  if (rep.in_g0) {
    throw Inapplicable("u lies in G^0(psi); the shift witness needs u outside G^0");
  }
  return min_shift_gap(u, psi, eps_grid, period).min_gap;
}

}  // namespace grandlp
