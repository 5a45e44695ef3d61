#include "grandlp/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "grandlp/errors.hpp"
#include "grandlp/psi.hpp"

namespace grandlp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// WeightedSpace

WeightedSpace::WeightedSpace(int n, double sigma) : n_(n), sigma_(sigma), one_sided_(false) {
  if (n < 1) throw RejectedInput("weighted space: dimension must be >= 1");
  if (!(n + sigma > 0)) throw RejectedInput("weighted space: need n + sigma > 0");
}

WeightedSpace WeightedSpace::half_line() { return WeightedSpace(1, 0.0, true); }

double WeightedSpace::omega() const {
  return std::pow(std::numbers::pi, 0.5 * n_) / std::tgamma(0.5 * n_ + 1.0);
}

double WeightedSpace::Omega() const { return n_ * omega(); }

double WeightedSpace::R() const { return std::pow(degree() / Omega(), 1.0 / degree()); }

// ---------------------------------------------------------------------------
// Piece

namespace {

bool in_region_log(const Piece& pc, double log_x) {
  switch (pc.region) {
    case Region::inner: return log_x < 0;
    case Region::outer: return log_x > 0;
    case Region::interval:
      return log_x >= std::log(pc.x0) && log_x <= std::log(pc.x1);
    case Region::all: return true;
  }
  return false;
}

double piece_log_x(const Piece& pc, double log_r) {
  if (pc.shift == 0.0) return log_r - std::log(pc.scale);
  if (log_r > 700) return log_r + std::log1p(pc.shift * std::exp(-log_r)) - std::log(pc.scale);
  return std::log(std::exp(log_r) + pc.shift) - std::log(pc.scale);
}

}  // namespace

double Piece::value(double r) const {
  if (coeff == 0.0) return 0.0;
  const double x = (r + shift) / scale;
  if (!(x > 0)) return 0.0;
  const double log_x = std::log(x);
  if (!in_region_log(*this, log_x)) return 0.0;
  double v = coeff * std::pow(x, power);
  if (logpow != 0.0) v *= std::pow(std::abs(log_x), logpow);
  if (!L.is_unit()) v *= L(std::abs(log_x));
  return v;
}

double Piece::log_abs_at_log(double log_r, int* sign) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (sign) *sign = coeff >= 0 ? 1 : -1;
  if (coeff == 0.0) return kNegInf;
  const double log_x = piece_log_x(*this, log_r);
  if (!in_region_log(*this, log_x)) return kNegInf;
  double lg = std::log(std::abs(coeff)) + power * log_x;
  if (logpow != 0.0) lg += logpow * std::log(std::abs(log_x));
  if (!L.is_unit()) lg += std::log(L(std::abs(log_x)));
  return lg;
}

double Piece::x_lo() const {
  switch (region) {
    case Region::inner: return 0.0;
    case Region::outer: return 1.0;
    case Region::interval: return x0;
    case Region::all: return 0.0;
  }
  return 0.0;
}

double Piece::x_hi() const {
  switch (region) {
    case Region::inner: return 1.0;
    case Region::outer: return kInfinity;
    case Region::interval: return x1;
    case Region::all: return kInfinity;
  }
  return kInfinity;
}

double Piece::r_lo() const { return std::max(0.0, scale * x_lo() - shift); }

double Piece::r_hi() const {
  const double hi = x_hi();
  if (std::isinf(hi)) return kInfinity;
  return std::max(0.0, scale * hi - shift);
}

bool Piece::pure() const {
  return L.is_unit() && shift == 0.0 && (region == Region::inner || region == Region::outer);
}

Piece inner_piece(double power, double logpow, SlowlyVarying L, double coeff) {
  Piece p;
  p.region = Region::inner;
  p.power = power;
  p.logpow = logpow;
  p.L = L;
  p.coeff = coeff;
  return p;
}

Piece outer_piece(double power, double logpow, SlowlyVarying L, double coeff) {
  Piece p = inner_piece(power, logpow, L, coeff);
  p.region = Region::outer;
  return p;
}

Piece interval_piece(double x0, double x1, double power, double coeff) {
  if (!(x0 >= 0) || !(x1 > x0) || !std::isfinite(x1)) {
    throw RejectedInput("interval piece needs 0 <= x0 < x1 < inf");
  }
  Piece p;
  p.region = Region::interval;
  p.x0 = x0;
  p.x1 = x1;
  p.power = power;
  p.coeff = coeff;
  return p;
}

Piece everywhere_piece(double power, double coeff) {
  Piece p;
  p.region = Region::all;
  p.power = power;
  p.coeff = coeff;
  return p;
}

// ---------------------------------------------------------------------------
// NumericClosure

double NumericClosure::lower_exponent() const {
  if (!std::isnan(head_exponent)) return head_exponent;
  const double v0 = std::abs(values[0]), v1 = std::abs(values[1]);
  if (!(v0 > 0 && v1 > 0)) return 0.0;
  return std::log(v1 / v0) / std::log((grid[1] - origin) / (grid[0] - origin));
}

double NumericClosure::upper_exponent() const {
  if (!std::isnan(tail_exponent)) return tail_exponent;
  const std::size_t n = grid.size();
  const double v0 = std::abs(values[n - 2]), v1 = std::abs(values[n - 1]);
  if (!(v0 > 0 && v1 > 0)) return 0.0;
  return std::log(v1 / v0) / std::log(grid[n - 1] / grid[n - 2]);
}

double NumericClosure::value(double r) const {
  if (r <= origin) return 0.0;
  if (r < grid.front()) {
    const double u = r - origin, u0 = grid[0] - origin;
    double v = values[0] * std::pow(u / u0, lower_exponent());
    if (head_logpow != 0.0 && u0 < 1) v *= std::pow(std::log(u) / std::log(u0), head_logpow);
    return v;
  }
  if (r > grid.back()) {
    if (!power_tail) return 0.0;
    const double T = grid.back();
    double v = values.back() * std::pow(r / T, upper_exponent());
    if (tail_logpow != 0.0 && T > 1) v *= std::pow(std::log(r) / std::log(T), tail_logpow);
    return v;
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), r);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == grid.size()) return values.back();
  i -= 1;
  const double v0 = values[i], v1 = values[i + 1];
  if (v0 * v1 > 0) {
    const double o = r - origin, o0 = grid[i] - origin, o1 = grid[i + 1] - origin;
    const double w = std::log(o / o0) / std::log(o1 / o0);
    const double mag = std::exp((1 - w) * std::log(std::abs(v0)) + w * std::log(std::abs(v1)));
    return v0 > 0 ? mag : -mag;
  }
  const double w = (r - grid[i]) / (grid[i + 1] - grid[i]);
  return (1 - w) * v0 + w * v1;
}

// ---------------------------------------------------------------------------
// RadialFunction

RadialFunction::RadialFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (!(p.scale > 0)) throw RejectedInput("piece scale must be positive");
    if (!(p.shift >= 0)) throw RejectedInput("piece shift must be >= 0");
    if (!(p.logpow >= 0)) throw RejectedInput("piece logpow must be >= 0");
    if (p.region == Region::interval && !(p.x1 > p.x0 && p.x0 >= 0)) {
      throw RejectedInput("interval piece needs 0 <= x0 < x1");
    }
  }
}

RadialFunction::RadialFunction(NumericClosure closure) {
  const auto& g = closure.grid;
  if (g.size() < 2 || g.size() != closure.values.size()) {
    throw RejectedInput("numeric closure needs >= 2 grid points and matching values");
  }
  if (!(g.front() > closure.origin)) throw RejectedInput("closure grid must start above origin");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw RejectedInput("closure grid must be strictly increasing");
  }
  closure_ = std::move(closure);
}

const NumericClosure& RadialFunction::closure() const {
  if (!closure_) throw UnsupportedInput("function is not a numeric closure");
  return *closure_;
}

double RadialFunction::operator()(double r) const {
  if (closure_) return closure_->value(r);
  double s = 0.0;
  for (const auto& p : pieces_) s += p.value(r);
  return s;
}

double RadialFunction::log_abs_at_log(double log_r) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (closure_) {
    const double v = closure_->value(std::exp(log_r));
    return v == 0.0 ? kNegInf : std::log(std::abs(v));
  }
  double best = kNegInf;
  int count = 0;
  // Two passes: find the dominant term, then sum relative to it.
  for (const auto& p : pieces_) {
    const double lg = p.log_abs_at_log(log_r, nullptr);
    if (lg > kNegInf) {
      ++count;
      best = std::max(best, lg);
    }
  }
  if (count <= 1) return best;
  double sum = 0.0;
  for (const auto& p : pieces_) {
    int sign = 1;
    const double lg = p.log_abs_at_log(log_r, &sign);
    if (lg > kNegInf) sum += sign * std::exp(lg - best);
  }
  if (sum == 0.0) return kNegInf;
  return best + std::log(std::abs(sum));
}

RadialFunction RadialFunction::scaled(double c) const {
  if (closure_) {
    NumericClosure cl = *closure_;
    for (auto& v : cl.values) v *= c;
    return RadialFunction(std::move(cl));
  }
  auto ps = pieces_;
  for (auto& p : ps) p.coeff *= c;
  return RadialFunction(std::move(ps));
}

RadialFunction RadialFunction::dilated(double s) const {
  if (!(s > 0)) throw RejectedInput("dilation factor must be positive");
  if (closure_) {
    NumericClosure cl = *closure_;
    for (auto& g : cl.grid) g *= s;
    cl.origin *= s;
    return RadialFunction(std::move(cl));
  }
  auto ps = pieces_;
  for (auto& p : ps) {
    p.shift *= s;
    p.scale *= s;
  }
  return RadialFunction(std::move(ps));
}

RadialFunction RadialFunction::shifted(double eps) const {
  if (!(eps >= 0)) throw RejectedInput("shift must be >= 0");
  if (closure_) throw UnsupportedInput("shift of a numeric closure");
  auto ps = pieces_;
  for (auto& p : ps) p.shift += eps;
  return RadialFunction(std::move(ps));
}

std::vector<double> RadialFunction::breakpoints() const {
  std::vector<double> out;
  if (closure_) return out;
  for (const auto& p : pieces_) {
    const double lo = p.r_lo(), hi = p.r_hi();
    if (lo > 0) out.push_back(lo);
    if (std::isfinite(hi) && hi > 0) out.push_back(hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double RadialFunction::support_lo() const {
  if (closure_) return closure_->origin;
  double lo = kInfinity;
  for (const auto& p : pieces_) {
    if (p.coeff != 0.0 && p.r_hi() > p.r_lo()) lo = std::min(lo, p.r_lo());
  }
  return std::isinf(lo) ? 0.0 : lo;
}

double RadialFunction::support_hi() const {
  if (closure_) return closure_->power_tail ? kInfinity : closure_->grid.back();
  double hi = 0.0;
  for (const auto& p : pieces_) {
    if (p.coeff != 0.0 && p.r_hi() > p.r_lo()) hi = std::max(hi, p.r_hi());
  }
  return hi;
}

RadialFunction operator+(const RadialFunction& f, const RadialFunction& g) {
  if (f.is_closure() || g.is_closure()) throw UnsupportedInput("sum with a numeric closure");
  auto ps = f.pieces();
  ps.insert(ps.end(), g.pieces().begin(), g.pieces().end());
  return RadialFunction(std::move(ps));
}

RadialFunction operator-(const RadialFunction& f, const RadialFunction& g) {
  return f + g.scaled(-1.0);
}

namespace {

Piece with_region(Piece p, double lo, double hi) {
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

RadialFunction multiply(const RadialFunction& f, const RadialFunction& g) {
  if (f.is_closure() || g.is_closure()) throw UnsupportedInput("product with a numeric closure");
  std::vector<Piece> out;
  for (const auto& a : f.pieces()) {
    for (const auto& b : g.pieces()) {
      if (a.shift != b.shift || a.scale != b.scale) {
        throw UnsupportedInput("product of pieces with different shift/scale");
      }
      const double lo = std::max(a.x_lo(), b.x_lo());
      const double hi = std::min(a.x_hi(), b.x_hi());
      if (!(hi > lo)) continue;
      if (!a.L.is_unit() && !b.L.is_unit()) {
        throw UnsupportedInput("product of two non-unit slowly varying factors");
      }
      Piece p = a;
      p.coeff = a.coeff * b.coeff;
      p.power = a.power + b.power;
      p.logpow = a.logpow + b.logpow;
      p.L = a.L.is_unit() ? b.L : a.L;
      out.push_back(with_region(p, lo, hi));
    }
  }
  return RadialFunction(std::move(out));
}

RadialFunction abs_power(const RadialFunction& f, double gamma) {
  if (f.is_closure()) throw UnsupportedInput("power of a numeric closure");
  if (!(gamma > 0)) throw RejectedInput("abs_power: gamma must be positive");
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const bool overlap = std::min(ps[i].r_hi(), ps[j].r_hi()) > std::max(ps[i].r_lo(), ps[j].r_lo());
      if (overlap) throw UnsupportedInput("abs_power needs pieces with disjoint regions");
    }
  }
  std::vector<Piece> out;
  for (auto p : ps) {
    p.coeff = std::pow(std::abs(p.coeff), gamma);
    p.power *= gamma;
    p.logpow *= gamma;
    p.L = p.L.pow(gamma);
    out.push_back(p);
  }
  return RadialFunction(std::move(out));
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const char* region_name(Region r) {
  switch (r) {
    case Region::inner: return "inner";
    case Region::outer: return "outer";
    case Region::interval: return "interval";
    case Region::all: return "all";
  }
  return "all";
}

Region region_from(const std::string& s) {
  if (s == "inner") return Region::inner;
  if (s == "outer") return Region::outer;
  if (s == "interval") return Region::interval;
  if (s == "all") return Region::all;
  throw RejectedInput("unknown region '" + s + "'");
}

}  // namespace

void to_json(json& j, const RadialFunction& f) {
  if (f.is_closure()) {
    const auto& c = f.closure();
    j = {{"grid", c.grid}, {"values", c.values}, {"origin", c.origin}, {"power_tail", c.power_tail}};
    if (!std::isnan(c.tail_exponent)) j["tail_exponent"] = c.tail_exponent;
    if (!std::isnan(c.head_exponent)) j["head_exponent"] = c.head_exponent;
    if (c.tail_logpow != 0.0) j["tail_logpow"] = c.tail_logpow;
    if (c.head_logpow != 0.0) j["head_logpow"] = c.head_logpow;
    return;
  }
  json terms = json::array();
  for (const auto& p : f.pieces()) {
    json t = {{"region", region_name(p.region)},
              {"power", p.power},
              {"logpow", p.logpow},
              {"L", p.L},
              {"shift", p.shift},
              {"scale", p.scale},
              {"coeff", p.coeff}};
    if (p.region == Region::interval) {
      t["x0"] = p.x0;
      t["x1"] = p.x1;
    }
    terms.push_back(std::move(t));
  }
  j = {{"terms", std::move(terms)}};
}

RadialFunction radial_from_json(const json& j) {
  try {
    if (j.contains("grid")) {
      NumericClosure c;
      c.grid = j.at("grid").get<std::vector<double>>();
      c.values = j.at("values").get<std::vector<double>>();
      c.origin = j.value("origin", 0.0);
      c.power_tail = j.value("power_tail", false);
      if (j.contains("tail_exponent")) c.tail_exponent = j.at("tail_exponent").get<double>();
      if (j.contains("head_exponent")) c.head_exponent = j.at("head_exponent").get<double>();
      c.tail_logpow = j.value("tail_logpow", 0.0);
      c.head_logpow = j.value("head_logpow", 0.0);
      return RadialFunction(std::move(c));
    }
    std::vector<Piece> ps;
    for (const auto& t : j.at("terms")) {
      Piece p;
      p.region = region_from(t.value("region", std::string("all")));
      p.power = t.value("power", 0.0);
      p.logpow = t.value("logpow", 0.0);
      if (t.contains("L")) p.L = t.at("L").get<SlowlyVarying>();
      p.shift = t.value("shift", 0.0);
      p.scale = t.value("scale", 1.0);
      p.coeff = t.value("coeff", 1.0);
      if (p.region == Region::interval) {
        p.x0 = t.at("x0").get<double>();
        p.x1 = t.at("x1").get<double>();
      }
      ps.push_back(p);
    }
    return RadialFunction(std::move(ps));
  } catch (const json::exception& e) {
    throw RejectedInput(std::string("malformed radial function document: ") + e.what());
  }
}

}  // namespace grandlp
