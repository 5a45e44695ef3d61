#pragma once

#include <vector>

#include <json.hpp>

#include "grandlp/fit.hpp"
#include "grandlp/gnorm.hpp"

namespace grandlp {

/// One CSV row: abscissa (p or t), measured value, model value.
struct TraceRow {
  double p_or_t = 0.0;
  double value = 0.0;
  double model_value = 0.0;
};

void to_json(nlohmann::json& j, const TraceRow& r);

/// f = I(r > 1) r^(-1/a) (log r)^gamma L(log r) on R^n with weight |x|^sigma,
/// critical exponent A = a (n + sigma).
struct GammaFamily {
  int n = 1;
  double sigma = 0.0;
  double a = 1.0;
  double gamma = 1.0;
  SlowlyVarying L;
};

struct GammaSharpness {
  double A = 0.0;
  AsymptoticFit fit;  // log |f|_p against log(p - A)
  double expected_exponent = 0.0;
  /// |f|_p^p by quadrature against Omega Gamma(gamma p + 1) (p/a - n - sigma)^(-gamma p - 1) L^p(a/(p - A)).
  std::vector<TraceRow> trace;
  double max_rel_dev = 0.0;  // over trace points with p - A >= 0.01
  double ratio_at_001 = 0.0;  // quadrature / model at p - A = 0.01
};

GammaSharpness sharpness_gamma(const GammaFamily& fam);

struct ConvolutionSharpness {
  bool outer = false;
  double endpoint = 0.0;  // B3, or A3 for the outer family
  AsymptoticFit t_fit;    // log h(t) against log t (log 1/t for the outer family)
  double expected_t_exponent = 0.0;
  AsymptoticFit p_fit;    // log |h|_p against log |p - endpoint|
  double expected_p_exponent = 0.0;
  AsymptoticFit tau_fit;  // the bound tau near the same endpoint
  double gap = 0.0;       // p_fit.exponent - tau_fit.exponent
  double beta = 0.0;
  double beta_ratio = 0.0;  // h(t) / (B t^k |log t|^(g1+g2)) at t = 1e-6 (1e6 outer)
  bool finite_inside = false;
  bool divergent_outside = false;
  std::vector<TraceRow> t_trace;
  std::vector<TraceRow> p_trace;
};

/// f = I(0<x<1) x^(-1/b1) |log x|^g1, g likewise, on the half line.
ConvolutionSharpness sharpness_convolution(double b1, double b2, double g1, double g2);

/// f = I(x>1) x^(-1/a1) (log x)^g1, g likewise; fits at the lower endpoint A3.
ConvolutionSharpness sharpness_convolution_outer(double a1, double a2, double g1, double g2);

struct SobolevGap {
  int n = 3;
  int m = 3;
  double a = 1.0, b = 2.0, alpha = 1.0, beta = 0.5;
  double A2 = 0.0, B2 = 0.0;
  AsymptoticFit lower_fit, upper_fit;        // |Bu|_q near A2 and B2
  AsymptoticFit nu_lower_fit, nu_upper_fit;  // the bound nu near A2 and B2
  double gap_lower = 0.0;  // lower_fit.exponent + alpha
  double gap_upper = 0.0;  // upper_fit.exponent + beta
  bool finite_inside = false;
  bool divergent_outside = false;
  std::vector<TraceRow> trace;
};

/// Profile u with |grad u| = I(r<1) r^(-n/b) + I(r>1) r^(-n/a), so that
/// | |grad u| |_p is comparable to (p-a)^(-1/a) (b-p)^(-1/b); alpha = 1/a, beta = 1/b.
RadialFunction sobolev_test_profile(double a, double b, int n);

SobolevGap sharpness_sobolev_gap(double a, double b, int n, int m);

void to_json(nlohmann::json& j, const GammaSharpness& s);
void to_json(nlohmann::json& j, const ConvolutionSharpness& s);
void to_json(nlohmann::json& j, const SobolevGap& s);

}  // namespace grandlp
