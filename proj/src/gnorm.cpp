#include "grandlp/gnorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grandlp/errors.hpp"
#include "grandlp/extremum.hpp"
#include "grandlp/fit.hpp"

namespace grandlp {

using nlohmann::json;

std::string to_string(Attained a) {
  switch (a) {
    case Attained::interior: return "interior";
    case Attained::endpoint_a: return "endpoint-a";
    case Attained::endpoint_b: return "endpoint-b";
  }
  return "interior";
}

void to_json(json& j, const GNormResult& r) {
  j = {{"norm", r.norm},
       {"p_star", r.p_star},
       {"attained", to_string(r.attained)},
       {"extrapolated", r.extrapolated},
       {"samples", r.samples}};
}

namespace {

constexpr int kGridPoints = 256;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

GNormResult sup_over_exponents(const std::function<double(double)>& log_ratio,
                               const ExponentInterval& dom) {
  if (!dom.bounded()) throw UnsupportedInput("G-norm needs a bounded exponent interval");
  const double a = dom.a(), b = dom.b(), w = b - a;
  const double m = 1e-4 * w;

  std::vector<std::array<double, 2>> logs;  // (p, log ratio)
  auto eval = [&](double p) {
    double L;
    try {
      L = log_ratio(p);
    } catch (const DivergenceError& e) {
      throw NormInfinite("norm is infinite: |f|_p diverges inside (a, b) at p = " + fmt(p) +
                         " (" + e.what() + ")");
    }
    if (std::isnan(L) || L == std::numeric_limits<double>::infinity()) {
      throw NormInfinite("norm is infinite: ratio is not finite at p = " + fmt(p));
    }
    logs.push_back({p, L});
    return L;
  };

  const auto grid = linspace(a + m, b - m, kGridPoints);
  std::vector<double> vals(grid.size());
  int best = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    vals[i] = eval(grid[i]);
    if (vals[i] > vals[best]) best = i;
  }

  GNormResult out;
  out.attained = Attained::interior;
  if (vals[best] == kNegInf) {
    out.norm = 0.0;
    out.p_star = grid[best];
  } else if (best > 0 && best < kGridPoints - 1) {
    golden_maximize(eval, grid[best - 1], grid[best + 1], 1e-10);
  } else {
    const bool left = best == 0;
    const double edge = left ? a : b;
    const double dir = left ? 1.0 : -1.0;
    std::vector<double> L{vals[best]};
    double tight = grid[best];
    for (double inset : {m / 10, m / 100, m / 1000}) {
      if (inset < 2 * kEndpointGuard) break;
      tight = edge + dir * inset;
      L.push_back(eval(tight));
    }
    std::vector<double> inc;
    for (std::size_t k = 1; k < L.size(); ++k) inc.push_back(L[k] - L[k - 1]);
    if (inc.size() >= 2 && inc[0] > 0 && inc[1] > 0) {
      const double first = inc.front(), last = inc.back();
      if (inc.size() >= 3 && inc[2] > 0 && last >= 0.5 * first && last > 1e-3) {
        throw NotInSpace("ratio |f|_p/psi(p) grows without bound toward " +
                         std::string(left ? "a" : "b") + " = " + fmt(edge) +
                         ": log increments per decade of inset " + fmt(inc[0]) + ", " +
                         fmt(inc[1]) + ", " + fmt(inc[2]));
      }
      out.attained = left ? Attained::endpoint_a : Attained::endpoint_b;
      out.p_star = edge;
      double lim = L.back();
      if (inc.size() >= 2 && last > 0) {
        const double rho = last / inc[inc.size() - 2];
        if (rho > 0 && rho < 1) lim += last * rho / (1 - rho);
      }
      out.extrapolated = std::exp(lim);
    } else {
      const double inner = grid[left ? 1 : kGridPoints - 2];
      golden_maximize(eval, std::min(tight, inner), std::max(tight, inner), 1e-10);
    }
  }

  std::sort(logs.begin(), logs.end());
  double top = kNegInf, top_p = grid[best];
  for (const auto& [p, L] : logs) {
    out.samples.push_back({p, std::exp(L)});
    if (L > top) {
      top = L;
      top_p = p;
    }
  }
  out.norm = std::exp(top);
  if (out.attained == Attained::interior) {
    out.p_star = top_p;
    out.extrapolated = out.norm;
  }
  out.extrapolated = std::max(out.extrapolated, out.norm);
  return out;
}

GNormResult g_norm_of(const std::function<double(double)>& lp, const PsiFunction& psi) {
  return sup_over_exponents(
      [&](double p) {
        const double v = lp(p);
        if (v == 0.0) return kNegInf;
        return std::log(v) - psi.log_eval(p);
      },
      psi.domain());
}

GNormResult g_norm(const RadialFunction& f, const PsiFunction& psi, const WeightedSpace& X) {
  return g_norm_of([&](double p) { return lp_norm(f, X, p).value; }, psi);
}

double fundamental_phi(const PsiFunction& psi, double delta) {
  if (!(delta > 0)) throw RejectedInput("fundamental_phi: delta must be positive");
  const double ld = std::log(delta);
  return sup_over_exponents([&](double p) { return ld / p - psi.log_eval(p); }, psi.domain()).norm;
}

double dilation_norm(const ExponentInterval& dom, double s, const WeightedSpace& X) {
  if (!(s > 0)) throw RejectedInput("dilation factor must be positive");
  const double d = X.degree();
  return std::max(std::pow(s, d / dom.a()), std::pow(s, d / dom.b()));
}

double dilation_norm_numeric(const RadialFunction& f, const PsiFunction& psi,
                             const WeightedSpace& X, double s) {
  const double base = g_norm(f, psi, X).norm;
  if (!(base > 0)) throw RejectedInput("dilation_norm_numeric: f has zero norm");
  return g_norm(f.dilated(s), psi, X).norm / base;
}

void to_json(json& j, const BoydEstimate& b) {
  j = {{"gamma1", b.gamma1}, {"gamma2", b.gamma2}, {"residual1", b.residual1},
       {"residual2", b.residual2}};
}

namespace {

BoydEstimate boyd_fit(const std::function<double(double)>& norm_of) {
  std::vector<double> x1, y1, x2, y2;
  for (int k = 10; k <= 30; ++k) {
    const double lo = std::ldexp(1.0, -k), hi = std::ldexp(1.0, k);
    x1.push_back(std::log(lo));
    y1.push_back(std::log(norm_of(lo)));
    x2.push_back(std::log(hi));
    y2.push_back(std::log(norm_of(hi)));
  }
  const auto f1 = ols(x1, y1), f2 = ols(x2, y2);
  return {f1.slope, f2.slope, f1.max_residual, f2.max_residual};
}

}  // namespace

BoydEstimate boyd_indices(const ExponentInterval& dom, const WeightedSpace& X) {
  return boyd_fit([&](double s) { return dilation_norm(dom, s, X); });
}

BoydEstimate boyd_indices_numeric(const RadialFunction& f, const PsiFunction& psi,
                                  const WeightedSpace& X) {
  const double base = g_norm(f, psi, X).norm;
  if (!(base > 0)) throw RejectedInput("boyd_indices_numeric: f has zero norm");
  return boyd_fit([&](double s) { return g_norm(f.dilated(s), psi, X).norm / base; });
}

// ---------------------------------------------------------------------------
// G^0

void to_json(json& j, const G0Report& r) {
  json trends = json::array();
  for (const auto& t : r.trends) {
    trends.push_back({{"endpoint", to_string(t.endpoint)},
                      {"peak", t.peak},
                      {"vanishes", t.vanishes},
                      {"sequence", t.sequence}});
  }
  j = {{"in_g0", r.in_g0}, {"trends", std::move(trends)}};
}

bool psi_blows_up(const PsiFunction& psi, Attained endpoint) {
  const auto& dom = psi.domain();
  if (!dom.bounded()) throw UnsupportedInput("G^0 test needs a bounded exponent interval");
  const double w = dom.b() - dom.a();
  const bool left = endpoint == Attained::endpoint_a;
  const double edge = left ? dom.a() : dom.b();
  std::vector<double> L;
  for (double frac : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double inset = frac * w;
    if (inset < 2 * kEndpointGuard) break;
    L.push_back(psi.log_eval(left ? edge + inset : edge - inset));
  }
  if (L.size() < 3) return false;
  for (std::size_t k = 1; k < L.size(); ++k) {
    if (!(L[k] > L[k - 1])) return false;
  }
  return L.back() - L[L.size() - 2] >= 0.25 * (L[1] - L[0]);
}

G0Report in_g0(const std::function<double(double)>& lp, const PsiFunction& psi) {
  const auto& dom = psi.domain();
  G0Report rep;
  for (Attained side : {Attained::endpoint_a, Attained::endpoint_b}) {
    if (!psi_blows_up(psi, side)) continue;
    EndpointTrend tr;
    tr.endpoint = side;
    const double w = dom.b() - dom.a();
    const bool left = side == Attained::endpoint_a;
    const double floor = std::max(1e-8 * w, 2 * kEndpointGuard);
    for (double d = 0.25 * w; d >= floor; d *= 0.5) {
      const double p = left ? dom.a() + d : dom.b() - d;
      const double r = lp(p) / psi(p);
      tr.sequence.push_back({p, r});
      tr.peak = std::max(tr.peak, r);
    }
    const auto& s = tr.sequence;
    bool decreasing = s.size() >= 5;
    for (std::size_t k = s.size() >= 5 ? s.size() - 4 : 1; decreasing && k < s.size(); ++k) {
      decreasing = s[k][1] < s[k - 1][1];
    }
    tr.vanishes = decreasing && s.back()[1] < 1e-3 * tr.peak;
    rep.trends.push_back(std::move(tr));
  }
  if (rep.trends.empty()) {
    throw Inapplicable("psi is bounded at both endpoints, so the G^0 limit is over an empty set");
  }
  rep.in_g0 = std::all_of(rep.trends.begin(), rep.trends.end(),
                          [](const EndpointTrend& t) { return t.vanishes; });
  return rep;
}

G0Report in_g0(const RadialFunction& f, const PsiFunction& psi, const WeightedSpace& X) {
  return in_g0([&](double p) { return lp_norm(f, X, p).value; }, psi);
}

PsiFunction tabulate_representation(const RadialFunction& f, const WeightedSpace& X,
                                    const ExponentInterval& dom) {
  // Fine nodes over a wide span: representation pairs sit at equality in the
  // theorem checks, where interpolation error is all that separates the sides.
  return tabulate([&](double p) { return lp_norm(f, X, p).value; }, dom, 3521, 22.0);
}

namespace {

class RepresentationNode final : public PsiFunction::Node {
 public:
  RepresentationNode(RadialFunction f, WeightedSpace X, ExponentInterval dom)
      : Node(dom), f_(std::move(f)), X_(X) {}
  PsiForm form() const override { return PsiForm::tabulated; }
  double log_eval(double p) const override { return std::log(lp_norm(f_, X_, p).value); }
  json to_json() const override { return tabulate_representation(f_, X_, domain).to_json(); }

 private:
  RadialFunction f_;
  WeightedSpace X_;
};

}  // namespace

PsiFunction representation(const RadialFunction& f, const WeightedSpace& X,
                           const ExponentInterval& dom) {
  return PsiFunction(std::make_shared<const RepresentationNode>(f, X, dom));
}

}  // namespace grandlp
