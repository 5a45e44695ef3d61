#include "grandlp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grandlp/errors.hpp"
#include "grandlp/extremum.hpp"
#include "grandlp/measure.hpp"
#include "grandlp/psi.hpp"

namespace grandlp {

using nlohmann::json;

void to_json(json& j, const TraceRow& r) { j = {r.p_or_t, r.value, r.model_value}; }

namespace {

AsymptoticFit fit_at(const std::function<double(double)>& value, double endpoint, int side,
                     double log_correction = 0.0) {
  std::vector<std::pair<double, double>> pts;
  for (double d : default_fit_window()) {
    const double p = endpoint + side * d;
    pts.emplace_back(p, value(p));
  }
  return fit_endpoint_exponent(pts, endpoint, log_correction);
}

bool diverges(const RadialFunction& f, const WeightedSpace& X, double p) {
  try {
    check_finite(f, X, p);
  } catch (const DivergenceError&) {
    return true;
  }
  return false;
}

bool finite_at(const RadialFunction& f, const WeightedSpace& X, double p) {
  try {
    return std::isfinite(lp_norm(f, X, p).value);
  } catch (const DivergenceError&) {
    return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

GammaSharpness sharpness_gamma(const GammaFamily& fam) {
  if (!(fam.a >= 1)) throw RejectedInput("sharpness_gamma: a must be >= 1");
  if (!(fam.gamma >= 0)) throw RejectedInput("sharpness_gamma: gamma must be >= 0");
  const WeightedSpace X(fam.n, fam.sigma);
  const double d = X.degree();
  GammaSharpness out;
  out.A = fam.a * d;
  const RadialFunction f({outer_piece(-1.0 / fam.a, fam.gamma, fam.L)});
  auto model = [&](double p) {
    const double kappa = p / fam.a - d;
    double lg = std::log(X.radial_factor()) + std::lgamma(fam.gamma * p + 1) -
                (fam.gamma * p + 1) * std::log(kappa);
    if (!fam.L.is_unit()) lg += p * std::log(fam.L(fam.a / (p - out.A)));
    return std::exp(lg);
  };
  auto lpp = [&](double p) { return std::pow(lp_norm_quadrature(f, X, p).value, p); };

  const double corr = fam.L.kind() == SlowlyVarying::Kind::log_power ? fam.L.theta() : 0.0;
  out.fit = fit_at([&](double p) { return lp_norm_quadrature(f, X, p).value; }, out.A, +1, corr);
  out.expected_exponent = -(fam.gamma + 1.0 / out.A);
  for (double dist : geomspace(1e-4, 1.0, 50)) {
    const double p = out.A + dist;
    TraceRow row{p, lpp(p), model(p)};
    if (dist >= 0.01 * (1 - 1e-12)) {
      out.max_rel_dev = std::max(out.max_rel_dev, std::abs(row.value / row.model_value - 1));
    }
    out.trace.push_back(row);
  }
  out.ratio_at_001 = lpp(out.A + 0.01) / model(out.A + 0.01);
  return out;
}

// ---------------------------------------------------------------------------

ConvolutionSharpness sharpness_convolution(double b1, double b2, double g1, double g2) {
  if (!(b1 > 1) || !(b2 > 1)) throw RejectedInput("sharpness_convolution: b1, b2 must exceed 1");
  if (!(g1 >= 0) || !(g2 >= 0)) throw RejectedInput("sharpness_convolution: log powers must be >= 0");
  const double s = 1.0 / b1 + 1.0 / b2;
  if (!(s > 1)) {
    throw RejectedInput("Young condition 1/b1 + 1/b2 > 1 fails: B3 = b1 b2/(b1 + b2 - b1 b2) <= 0");
  }
  const WeightedSpace H = WeightedSpace::half_line();
  const RadialFunction f({inner_piece(-1.0 / b1, g1)}), g({inner_piece(-1.0 / b2, g2)});
  const RadialFunction h = convolve1d(f, g);
  ConvolutionSharpness out;
  out.endpoint = 1.0 / (s - 1.0);
  const double k = 1.0 - s, lg = g1 + g2;
  out.beta = std::beta(1.0 - 1.0 / b1, 1.0 - 1.0 / b2);
  auto model_t = [&](double t) { return out.beta * std::pow(t, k) * std::pow(std::abs(std::log(t)), lg); };

  out.t_fit = fit_at([&](double t) { return convolve_at(f, g, t); }, 0.0, +1, lg);
  out.expected_t_exponent = k;
  out.beta_ratio = convolve_at(f, g, 1e-6) / model_t(1e-6);
  for (double t : geomspace(1e-8, 1e-1, 29)) out.t_trace.push_back({t, convolve_at(f, g, t), model_t(t)});

  const double B3 = out.endpoint;
  out.p_fit = fit_at([&](double p) { return lp_norm(h, H, p).value; }, B3, -1);
  out.expected_p_exponent = -(lg + s - 1.0);
  for (double dist : default_fit_window()) {
    const double p = B3 - dist;
    out.p_trace.push_back({p, lp_norm(h, H, p).value,
                           std::exp(out.p_fit.intercept) * std::pow(dist, out.p_fit.exponent)});
  }

  const PsiFunction psi1 = tabulate_representation(f, H, ExponentInterval(1.0, b1));
  const PsiFunction psi2 = tabulate_representation(g, H, ExponentInterval(1.0, b2));
  const PsiFunction tau = conv_inf(psi1, psi2);
  out.tau_fit = fit_at([&](double p) { return tau(p); }, B3, -1);
  out.gap = out.p_fit.exponent - out.tau_fit.exponent;

  out.finite_inside = finite_at(h, H, B3 - 1e-3);
  out.divergent_outside = diverges(h, H, B3 + 1e-3);
  return out;
}

ConvolutionSharpness sharpness_convolution_outer(double a1, double a2, double g1, double g2) {
  if (!(a1 > 1) || !(a2 > 1)) throw RejectedInput("sharpness_convolution_outer: a1, a2 must exceed 1");
  if (!(g1 >= 0) || !(g2 >= 0)) throw RejectedInput("sharpness_convolution_outer: log powers must be >= 0");
  const double s = 1.0 / a1 + 1.0 / a2;
  if (!(s > 1)) {
    throw RejectedInput("Young condition 1/a1 + 1/a2 > 1 fails: A3 = a1 a2/(a1 + a2 - a1 a2) <= 0");
  }
  const WeightedSpace H = WeightedSpace::half_line();
  const RadialFunction f({outer_piece(-1.0 / a1, g1)}), g({outer_piece(-1.0 / a2, g2)});
  const RadialFunction h = convolve1d(f, g);
  ConvolutionSharpness out;
  out.outer = true;
  out.endpoint = 1.0 / (s - 1.0);
  const double k = 1.0 - s, lg = g1 + g2;
  out.beta = std::beta(1.0 - 1.0 / a1, 1.0 - 1.0 / a2);
  auto model_t = [&](double t) { return out.beta * std::pow(t, k) * std::pow(std::log(t), lg); };

  // Large t, fitted in the distance 1/t.
  std::vector<std::pair<double, double>> pts;
  for (double t : geomspace(1e4, 1e7, 11)) pts.emplace_back(1.0 / t, convolve_at(f, g, t));
  out.t_fit = fit_endpoint_exponent(pts, 0.0, lg);
  out.expected_t_exponent = -k;
  out.beta_ratio = convolve_at(f, g, 1e6) / model_t(1e6);
  for (double t : geomspace(10.0, 1e8, 29)) out.t_trace.push_back({t, convolve_at(f, g, t), model_t(t)});

  const double A3 = out.endpoint;
  out.p_fit = fit_at([&](double p) { return lp_norm(h, H, p).value; }, A3, +1);
  out.expected_p_exponent = -(lg + s - 1.0);
  for (double dist : default_fit_window()) {
    const double p = A3 + dist;
    out.p_trace.push_back({p, lp_norm(h, H, p).value,
                           std::exp(out.p_fit.intercept) * std::pow(dist, out.p_fit.exponent)});
  }

  // Upper ends chosen so that 1/b1 + 1/b2 > 1 still holds.
  const double shrink = (s - 1.0) / 4.0;
  const ExponentInterval d1(a1, 1.0 / (1.0 / a1 - shrink)), d2(a2, 1.0 / (1.0 / a2 - shrink));
  const PsiFunction tau = conv_inf(tabulate_representation(f, H, d1), tabulate_representation(g, H, d2));
  out.tau_fit = fit_at([&](double p) { return tau(p); }, A3, +1);
  out.gap = out.p_fit.exponent - out.tau_fit.exponent;

  out.finite_inside = finite_at(h, H, A3 + 1e-3);
  out.divergent_outside = diverges(h, H, A3 - 1e-3);
  return out;
}

// ---------------------------------------------------------------------------

RadialFunction sobolev_test_profile(double a, double b, int n) {
  if (!(1 <= a && a < b && b < n)) throw RejectedInput("Sobolev profile needs 1 <= a < b < n");
  const double eb = 1.0 - n / b, ea = 1.0 - n / a;
  return RadialFunction({inner_piece(eb, 0.0, {}, 1.0 / -eb),
                         inner_piece(0.0, 0.0, {}, 1.0 / -ea - 1.0 / -eb),
                         outer_piece(ea, 0.0, {}, 1.0 / -ea)});
}

SobolevGap sharpness_sobolev_gap(double a, double b, int n, int m) {
  const ExponentInterval dom(a, b);
  const ExponentInterval nu_dom = sobolev_domain(dom, n, m);
  SobolevGap out;
  out.n = n;
  out.m = m;
  out.a = a;
  out.b = b;
  out.alpha = 1.0 / a;
  out.beta = 1.0 / b;
  out.A2 = nu_dom.a();
  out.B2 = nu_dom.b();
  const RadialFunction u = sobolev_test_profile(a, b, n);
  const WeightedSpace Y(m, 0.0);
  const PsiFunction nu = sobolev_nu(make_power_log(a, b, out.alpha, out.beta), n, m);
  auto bu = [&](double q) { return lp_norm(u, Y, q).value; };

  const bool lower_active = a * m / (n - a) >= 1.0;
  if (lower_active) {
    out.lower_fit = fit_at(bu, out.A2, +1);
    out.nu_lower_fit = fit_at([&](double q) { return nu(q); }, out.A2, +1);
    out.gap_lower = out.lower_fit.exponent + out.alpha;
  } else {
    out.gap_lower = std::numeric_limits<double>::quiet_NaN();
  }
  out.upper_fit = fit_at(bu, out.B2, -1);
  out.nu_upper_fit = fit_at([&](double q) { return nu(q); }, out.B2, -1);
  out.gap_upper = out.upper_fit.exponent + out.beta;

  const double w = out.B2 - out.A2;
  out.finite_inside = finite_at(u, Y, out.A2 + 1e-3 * w) && finite_at(u, Y, out.B2 - 1e-3 * w);
  out.divergent_outside = diverges(u, Y, out.B2 + 1e-3 * w) &&
                          (!lower_active || diverges(u, Y, out.A2 - 1e-3 * w));
  for (double q : linspace(out.A2 + 1e-3 * w, out.B2 - 1e-3 * w, 41)) {
    out.trace.push_back({q, bu(q), nu(q)});
  }
  return out;
}

// ---------------------------------------------------------------------------

void to_json(json& j, const GammaSharpness& s) {
  j = {{"A", s.A},
       {"fit", s.fit},
       {"expected_exponent", s.expected_exponent},
       {"max_rel_dev", s.max_rel_dev},
       {"ratio_at_001", s.ratio_at_001}};
}

void to_json(json& j, const ConvolutionSharpness& s) {
  j = {{"family", s.outer ? "outer" : "inner"},
       {"endpoint", s.endpoint},
       {"t_fit", s.t_fit},
       {"expected_t_exponent", s.expected_t_exponent},
       {"p_fit", s.p_fit},
       {"expected_p_exponent", s.expected_p_exponent},
       {"tau_fit", s.tau_fit},
       {"gap", s.gap},
       {"beta", s.beta},
       {"beta_ratio", s.beta_ratio},
       {"finite_inside", s.finite_inside},
       {"divergent_outside", s.divergent_outside}};
}

void to_json(json& j, const SobolevGap& s) {
  j = {{"n", s.n},
       {"m", s.m},
       {"a", s.a},
       {"b", s.b},
       {"alpha", s.alpha},
       {"beta", s.beta},
       {"A2", s.A2},
       {"B2", s.B2},
       {"upper_fit", s.upper_fit},
       {"nu_upper_fit", s.nu_upper_fit},
       {"gap_upper", s.gap_upper},
       {"finite_inside", s.finite_inside},
       {"divergent_outside", s.divergent_outside}};
  if (!std::isnan(s.gap_lower)) {
    j["lower_fit"] = s.lower_fit;
    j["nu_lower_fit"] = s.nu_lower_fit;
    j["gap_lower"] = s.gap_lower;
  } else {
    j["gap_lower"] = nullptr;
  }
}

}  // namespace grandlp
