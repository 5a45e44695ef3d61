#include "grandlp/measure.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "grandlp/errors.hpp"
#include "grandlp/extremum.hpp"
#include "grandlp/psi.hpp"
#include "grandlp/quadrature.hpp"

namespace grandlp {

std::string to_string(LpMethod m) {
  return m == LpMethod::exact_gamma ? "exact-gamma" : "quadrature";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool reaches_zero(const Piece& pc) {
  return pc.coeff != 0.0 && pc.shift == 0.0 && pc.x_lo() == 0.0;
}

bool reaches_infinity(const Piece& pc) { return pc.coeff != 0.0 && std::isinf(pc.x_hi()); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

[[noreturn]] void diverge(std::size_t index, const char* where, double p, double power,
                          double degree) {
  std::string msg = "|f|_p diverges at r -> " + std::string(where) + " for piece " +
                    std::to_string(index) + " at p = " + fmt(p) + " (p e + n + sigma = " +
                    fmt(p * power + degree) + ")";
  if (power != 0.0) msg += "; critical exponent " + fmt(-degree / power);
  throw DivergenceError(msg);
}

bool overlapping(const Piece& x, const Piece& y) {
  return std::min(x.r_hi(), y.r_hi()) > std::max(x.r_lo(), y.r_lo());
}

bool pairwise_disjoint(const std::vector<Piece>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].coeff != 0.0 && ps[j].coeff != 0.0 && overlapping(ps[i], ps[j])) return false;
    }
  }
  return true;
}

// Radii where some piece has a kink in |log x| at x = 1.
std::vector<double> log_kinks(const RadialFunction& f) {
  std::vector<double> out;
  if (f.is_closure()) return out;
  for (const auto& pc : f.pieces()) {
    if (pc.logpow > 0 || !pc.L.is_unit()) {
      const double r = pc.scale - pc.shift;
      if (r > 0) out.push_back(r);
    }
  }
  return out;
}

// int_0^inf r^(d-1) |f|^p dr for piecewise functions, integrated in t = log r.
QuadResult radial_integral(const RadialFunction& f, double d, double p) {
  const double lo = f.support_lo(), hi = f.support_hi();
  if (!(hi > lo)) return {};
  std::vector<double> cuts = f.breakpoints();
  const auto kinks = log_kinks(f);
  cuts.insert(cuts.end(), kinks.begin(), kinks.end());
  std::vector<double> nodes;
  if (lo > 0) nodes.push_back(std::log(lo));
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts) {
    if (c > lo && c < hi) nodes.push_back(std::log(c));
  }
  if (std::isfinite(hi)) nodes.push_back(std::log(hi));
  if (nodes.empty()) nodes.push_back(f.pieces().empty() ? 0.0 : std::log(f.pieces()[0].scale));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto integrand = [&](double t) {
    const double la = f.log_abs_at_log(t);
    if (la == kNegInf) return 0.0;
    return std::exp(d * t + p * la);
  };
  QuadResult total;
  auto add = [&](const QuadResult& q) {
    total.value += q.value;
    total.abs_error += q.abs_error;
  };
  if (lo == 0.0) add(integrate_half_line(integrand, nodes.front(), -1));
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    add(integrate_finite(integrand, nodes[i], nodes[i + 1]));
  }
  if (std::isinf(hi)) add(integrate_half_line(integrand, nodes.back(), +1));
  return total;
}

// Integral of r^(d-1) (v (r/x)^k |log r/log x|^l)^p beyond the node x, towards 0
// when x < 1 and towards infinity when x > 1; kappa = +-(kp + d) > 0.
double log_tail_integral(double v, double x, double k, double kappa, double l, double p) {
  const double L0 = std::abs(std::log(x));
  const double a = l * p + 1;
  const double lg = p * std::log(v) - k * p * std::log(x) - (a - 1) * std::log(L0) +
                    std::log(boost::math::gamma_q(a, kappa * L0)) + std::lgamma(a) - a * std::log(kappa);
  return std::exp(lg);
}

// Same integral for a numeric closure, following its interpolation model.
QuadResult closure_integral(const NumericClosure& cl, double d, double p) {
  using boost::math::quadrature::gauss;
  QuadResult total;
  const auto& g = cl.grid;
  const auto& v = cl.values;
  const double o0 = g[0] - cl.origin;
  // Lower tail.
  if (v[0] != 0.0) {
    const double k = cl.lower_exponent();
    const double amp = std::pow(std::abs(v[0]), p);
    if (cl.origin == 0.0 && cl.head_logpow != 0.0 && g[0] < 1) {
      total.value += log_tail_integral(std::abs(v[0]), g[0], k, k * p + d, cl.head_logpow, p);
    } else if (cl.origin == 0.0) {
      total.value += amp * std::pow(g[0], d) / (k * p + d);
    } else if (d == 1.0) {
      total.value += amp * o0 / (k * p + 1.0);
    } else {
      auto q = integrate_finite(
          [&](double, double from_a, double) {
            return std::pow(cl.origin + from_a, d - 1) * amp * std::pow(from_a / o0, k * p);
          },
          cl.origin, g[0]);
      total.value += q.value;
      total.abs_error += q.abs_error;
    }
  }
  // Interior intervals.
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double v0 = v[i], v1 = v[i + 1];
    if (v0 == 0.0 && v1 == 0.0) continue;
    double hi10, hi7;
    if (v0 * v1 > 0) {
      const double u0 = std::log(g[i] - cl.origin), u1 = std::log(g[i + 1] - cl.origin);
      const double l0 = std::log(std::abs(v0)), l1 = std::log(std::abs(v1));
      auto h = [&](double u) {
        const double w = (u - u0) / (u1 - u0);
        const double off = std::exp(u);
        return off * std::pow(cl.origin + off, d - 1) * std::exp(p * ((1 - w) * l0 + w * l1));
      };
      hi10 = gauss<double, 10>::integrate(h, u0, u1);
      hi7 = gauss<double, 7>::integrate(h, u0, u1);
    } else {
      auto h = [&](double r) {
        const double w = (r - g[i]) / (g[i + 1] - g[i]);
        return std::pow(r, d - 1) * std::pow(std::abs((1 - w) * v0 + w * v1), p);
      };
      hi10 = gauss<double, 10>::integrate(h, g[i], g[i + 1]);
      hi7 = gauss<double, 7>::integrate(h, g[i], g[i + 1]);
    }
    total.value += hi10;
    total.abs_error += std::abs(hi10 - hi7);
  }
  // Upper tail.
  if (cl.power_tail && v.back() != 0.0) {
    const double k = cl.upper_exponent();
    if (cl.tail_logpow != 0.0 && g.back() > 1) {
      total.value += log_tail_integral(std::abs(v.back()), g.back(), k, -(k * p + d), cl.tail_logpow, p);
    } else {
      total.value += std::pow(std::abs(v.back()), p) * std::pow(g.back(), d) / (-(k * p + d));
    }
  }
  return total;
}

void check_finite_closure(const NumericClosure& cl, double d, double p) {
  if (cl.values.front() != 0.0) {
    const double k = cl.lower_exponent();
    if (cl.origin == 0.0 ? !(k * p + d > 0) : !(k * p > -1)) {
      throw DivergenceError("|f|_p diverges at the lower edge of the sampled function (tail exponent " +
                            fmt(k) + ", p = " + fmt(p) + ")");
    }
  }
  if (cl.power_tail && cl.values.back() != 0.0) {
    const double k = cl.upper_exponent();
    if (!(k * p + d < 0)) {
      throw DivergenceError("|f|_p diverges at r -> infinity for the sampled function (tail exponent " +
                            fmt(k) + ", p = " + fmt(p) + ")");
    }
  }
}

void check_p(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw RejectedInput("Lp exponent must be positive and finite");
}

LpResult finish(const QuadResult& integral, const WeightedSpace& X, double p, LpMethod m) {
  const double I = X.radial_factor() * integral.value;
  if (!(I > 0)) return {0.0, 0.0, m};
  const double value = std::pow(I, 1.0 / p);
  const double err = value * X.radial_factor() * integral.abs_error / (p * I);
  return {value, err, m};
}

}  // namespace

void check_finite(const RadialFunction& f, const WeightedSpace& X, double p) {
  check_p(p);
  const double d = X.degree();
  if (f.is_closure()) {
    check_finite_closure(f.closure(), d, p);
    return;
  }
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double k = p * ps[i].power + d;
    if (reaches_zero(ps[i]) && !(k > 0)) diverge(i, "0", p, ps[i].power, d);
    if (reaches_infinity(ps[i]) && !(k < 0)) diverge(i, "infinity", p, ps[i].power, d);
  }
}

bool exact_gamma_applies(const Piece& pc) {
  if (!pc.L.is_unit() || pc.shift != 0.0) return false;
  if (pc.region == Region::inner || pc.region == Region::outer) return true;
  return pc.region == Region::interval && pc.logpow == 0.0;
}

double lp_norm_exact_gamma(const Piece& pc, const WeightedSpace& X, double p) {
  if (!exact_gamma_applies(pc)) {
    throw NotExact("exact-gamma path needs an unshifted inner/outer piece with unit L; use quadrature");
  }
  check_finite(RadialFunction({pc}), X, p);
  if (pc.coeff == 0.0) return 0.0;
  const double d = X.degree();
  const double k = std::fma(p, pc.power, d);
  const double log_pre = p * std::log(std::abs(pc.coeff)) + d * std::log(pc.scale);
  if (pc.region == Region::interval) {
    double body;
    if (pc.x0 == 0.0) {
      body = std::pow(pc.x1, k) / k;
    } else if (k == 0.0) {
      body = std::log(pc.x1 / pc.x0);
    } else {
      body = std::pow(pc.x0, k) * std::expm1(k * std::log(pc.x1 / pc.x0)) / k;
    }
    return std::exp(log_pre) * body;
  }
  const double ap = pc.logpow * p;
  return std::exp(log_pre + std::lgamma(ap + 1.0) - (ap + 1.0) * std::log(std::abs(k)));
}

LpResult lp_norm_quadrature(const RadialFunction& f, const WeightedSpace& X, double p) {
  check_finite(f, X, p);
  const double d = X.degree();
  const QuadResult q = f.is_closure() ? closure_integral(f.closure(), d, p) : radial_integral(f, d, p);
  return finish(q, X, p, LpMethod::quadrature);
}

LpResult lp_norm(const RadialFunction& f, const WeightedSpace& X, double p) {
  check_finite(f, X, p);
  if (f.is_closure() || !pairwise_disjoint(f.pieces())) return lp_norm_quadrature(f, X, p);
  const double d = X.degree();
  QuadResult total;
  bool all_exact = true;
  for (const auto& pc : f.pieces()) {
    if (pc.coeff == 0.0) continue;
    if (exact_gamma_applies(pc)) {
      total.value += lp_norm_exact_gamma(pc, X, p);
    } else {
      all_exact = false;
      const auto q = radial_integral(RadialFunction({pc}), d, p);
      total.value += q.value;
      total.abs_error += q.abs_error;
    }
  }
  return finish(total, X, p, all_exact ? LpMethod::exact_gamma : LpMethod::quadrature);
}

// ---------------------------------------------------------------------------
// Convolution

namespace {

void check_locally_integrable(const RadialFunction& f, const char* name) {
  if (f.is_closure()) {
    const auto& cl = f.closure();
    if (cl.origin == 0.0 && cl.values.front() != 0.0 && !(cl.lower_exponent() > -1)) {
      throw DivergenceError(std::string("convolution integrand diverges: ") + name +
                            " is not integrable at 0");
    }
    return;
  }
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (reaches_zero(ps[i]) && !(ps[i].power > -1)) {
      throw DivergenceError(std::string("convolution integrand diverges: piece ") +
                            std::to_string(i) + " of " + name + " is not integrable at 0 (power " +
                            fmt(ps[i].power) + ")");
    }
  }
}

std::vector<double> cut_points(const RadialFunction& f) {
  auto c = f.breakpoints();
  const auto k = log_kinks(f);
  c.insert(c.end(), k.begin(), k.end());
  return c;
}

double convolve_unchecked(const RadialFunction& f, const RadialFunction& g,
                          const std::vector<double>& fc, const std::vector<double>& gc, double t) {
  if (!(t > 0)) return 0.0;
  const double lo = std::max({0.0, f.support_lo(), t - g.support_hi()});
  const double hi = std::min({t, f.support_hi(), t - g.support_lo()});
  if (!(hi > lo)) return 0.0;
  std::vector<double> nodes{lo, hi};
  for (double b : fc) {
    if (b > lo && b < hi) nodes.push_back(b);
  }
  for (double b : gc) {
    const double y = t - b;
    if (y > lo && y < hi) nodes.push_back(y);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double ya = nodes[i], yb = nodes[i + 1];
    // Use whichever endpoint distance is exact for y and for t - y.
    auto h = [&](double, double from_a, double to_b) {
      const double y = from_a <= to_b ? ya + from_a : yb - to_b;
      const double ty = to_b < from_a ? (t - yb) + to_b : (t - ya) - from_a;
      const double fv = f(y);
      if (fv == 0.0) return 0.0;
      return fv * g(ty);
    };
    total += integrate_finite(h, ya, yb, 1e-11).value;
  }
  return total;
}

}  // namespace

double convolve_at(const RadialFunction& f, const RadialFunction& g, double t) {
  check_locally_integrable(f, "f");
  check_locally_integrable(g, "g");
  return convolve_unchecked(f, g, cut_points(f), cut_points(g), t);
}

std::vector<double> default_convolution_grid(const RadialFunction& f, const RadialFunction& g) {
  const double s0 = f.support_lo() + g.support_lo();
  const double S = f.support_hi() + g.support_hi();
  const bool finite = std::isfinite(S);
  const double span = finite ? S - s0 : 1e8;
  if (!(span > 1e-8)) throw RejectedInput("convolution support is too narrow for the default grid");
  std::vector<double> off = geomspace(1e-8, span, 2048);
  if (finite) {
    const auto lin = linspace(0.0, span, 257);
    off.insert(off.end(), lin.begin() + 1, lin.end());
  }
  // f * g can have cusps where a kink of f meets a kink of g; cluster nodes
  // geometrically on both sides of every such point.
  std::vector<double> fk = cut_points(f), gk = cut_points(g);
  fk.push_back(f.support_lo());
  gk.push_back(g.support_lo());
  const auto near = geomspace(1e-8, 0.25 * std::min(1.0, span), 128);
  for (double x : fk) {
    for (double y : gk) {
      const double c = x + y - s0;
      if (!(c > 0) || !(c < span)) continue;
      for (double o : near) {
        if (c - o > 0) off.push_back(c - o);
        if (c + o < span) off.push_back(c + o);
      }
      off.push_back(c);
    }
  }
  std::sort(off.begin(), off.end());
  off.erase(std::unique(off.begin(), off.end()), off.end());
  for (auto& o : off) o += s0;
  return off;
}

namespace {

struct EdgeLaw {
  double power;
  double logpow;
};

// Dominant power (and its log power) of the pieces that reach infinity.
std::optional<EdgeLaw> tail_law(const RadialFunction& f) {
  if (f.is_closure()) return std::nullopt;
  std::optional<EdgeLaw> e;
  for (const auto& pc : f.pieces()) {
    if (!reaches_infinity(pc)) continue;
    if (!pc.L.is_unit()) return std::nullopt;
    if (!e || pc.power > e->power || (pc.power == e->power && pc.logpow > e->logpow)) {
      e = EdgeLaw{pc.power, pc.logpow};
    }
  }
  return e;
}

// Law of f at the lower edge of its support; power 0 for a jump or a smooth start.
std::optional<EdgeLaw> edge_law(const RadialFunction& f) {
  if (f.is_closure()) return std::nullopt;
  const double lo = f.support_lo();
  std::optional<EdgeLaw> e;
  for (const auto& pc : f.pieces()) {
    if (pc.r_lo() != lo) continue;
    if (!pc.L.is_unit()) return std::nullopt;
    const EdgeLaw k = (lo == 0.0 && pc.shift == 0.0) ? EdgeLaw{pc.power, pc.logpow} : EdgeLaw{0.0, 0.0};
    if (!e || k.power < e->power || (k.power == e->power && k.logpow > e->logpow)) e = k;
  }
  return e;
}

// Law of (f * g)(t) ~ c t^k (log t)^l as t -> inf, when it follows from the tails.
std::optional<EdgeLaw> convolution_tail_law(const RadialFunction& f, const RadialFunction& g) {
  const auto lf = tail_law(f), lg = tail_law(g);
  if (f.is_closure() || g.is_closure() || (!lf && !lg)) return std::nullopt;
  if ((std::isinf(f.support_hi()) && !lf) || (std::isinf(g.support_hi()) && !lg)) return std::nullopt;
  // A compactly supported factor acts like an integrable one.
  const EdgeLaw x = lf.value_or(EdgeLaw{-kInfinity, 0.0}), y = lg.value_or(EdgeLaw{-kInfinity, 0.0});
  if (x.power > -1 && y.power > -1) return EdgeLaw{1 + x.power + y.power, x.logpow + y.logpow};
  if (x.power < -1 && y.power < -1) {
    if (x.power == y.power) return EdgeLaw{x.power, std::max(x.logpow, y.logpow)};
    return x.power > y.power ? x : y;
  }
  if (x.power > -1 && y.power < -1) return x;
  if (y.power > -1 && x.power < -1) return y;
  return std::nullopt;
}

}  // namespace

RadialFunction convolve1d(const RadialFunction& f, const RadialFunction& g,
                          std::vector<double> grid) {
  check_locally_integrable(f, "f");
  check_locally_integrable(g, "g");
  const double s0 = f.support_lo() + g.support_lo();
  const bool infinite = std::isinf(f.support_hi()) || std::isinf(g.support_hi());
  if (grid.empty()) grid = default_convolution_grid(f, g);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw RejectedInput("convolution grid must be strictly increasing");
  }
  if (!(grid.front() > s0)) throw RejectedInput("convolution grid must start above the support edge");
  const auto fc = cut_points(f), gc = cut_points(g);
  NumericClosure cl;
  cl.grid = grid;
  cl.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cl.values[i] = convolve_unchecked(f, g, fc, gc, grid[i]);
  }
  cl.origin = s0;
  cl.power_tail = infinite;
  if (infinite) {
    if (const auto law = convolution_tail_law(f, g)) {
      cl.tail_exponent = law->power;
      cl.tail_logpow = law->logpow;
    }
  }
  // Near the origin (f * g)(s0 + u) ~ c u^(1 + ef + eg) |log u|^(lf + lg).
  const auto ef = edge_law(f), eg = edge_law(g);
  if (ef && eg) {
    cl.head_exponent = 1.0 + ef->power + eg->power;
    cl.head_logpow = ef->logpow + eg->logpow;
  }
  return RadialFunction(std::move(cl));
}

// ---------------------------------------------------------------------------
// Gradient

namespace {

Piece in_x_range(Piece p, double lo, double hi) {
  if (lo == 0.0 && hi == 1.0) {
    p.region = Region::inner;
  } else if (lo == 1.0 && std::isinf(hi)) {
    p.region = Region::outer;
  } else if (lo == 0.0 && std::isinf(hi)) {
    p.region = Region::all;
  } else {
    p.region = Region::interval;
    p.x0 = lo;
    p.x1 = hi;
  }
  return p;
}

}  // namespace

RadialFunction gradient_modulus(const RadialFunction& u, const WeightedSpace&) {
  if (u.is_closure()) throw UnsupportedInput("gradient of a numeric closure");
  std::vector<Piece> out;
  for (const auto& pc : u.pieces()) {
    if (pc.coeff == 0.0) continue;
    if (!pc.L.is_unit()) throw UnsupportedInput("gradient needs pieces with unit L");
    if (pc.logpow != 0.0 && pc.logpow < 1.0) {
      throw UnsupportedInput("gradient needs log powers equal to 0 or at least 1");
    }
    const double lo = pc.x_lo(), hi = pc.x_hi();
    if (pc.power != 0.0) {
      Piece d = pc;
      d.coeff = pc.coeff * pc.power / pc.scale;
      d.power = pc.power - 1.0;
      out.push_back(d);
    }
    if (pc.logpow != 0.0) {
      Piece d = pc;
      d.power = pc.power - 1.0;
      d.logpow = pc.logpow - 1.0;
      const double c = pc.coeff * pc.logpow / pc.scale;
      if (hi <= 1.0) {
        d.coeff = -c;
        out.push_back(in_x_range(d, lo, hi));
      } else if (lo >= 1.0) {
        d.coeff = c;
        out.push_back(in_x_range(d, lo, hi));
      } else {
        d.coeff = -c;
        out.push_back(in_x_range(d, lo, 1.0));
        d.coeff = c;
        out.push_back(in_x_range(d, 1.0, hi));
      }
    }
  }
  if (pairwise_disjoint(out)) {
    for (auto& p : out) p.coeff = std::abs(p.coeff);
  }
  return RadialFunction(std::move(out));
}

}  // namespace grandlp
