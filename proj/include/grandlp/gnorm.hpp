#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grandlp/measure.hpp"
#include "grandlp/psi.hpp"

namespace grandlp {

enum class Attained { interior, endpoint_a, endpoint_b };

std::string to_string(Attained a);

struct GNormResult {
  double norm = 0.0;
  double p_star = 0.0;
  Attained attained = Attained::interior;
  /// Richardson estimate of the limit along the endpoint probes; equals norm
  /// for interior maxima.
  double extrapolated = 0.0;
  std::vector<std::array<double, 2>> samples;  // (p, ratio), ascending in p
};

void to_json(nlohmann::json& j, const GNormResult& r);

/// sup of exp(log_ratio(p)) over the bounded interval dom: 256-point grid
/// inset by 1e-4 (b - a), golden refinement, and endpoint probes at insets
/// shrinking by 10. Throws NotInSpace when the probes keep growing at a
/// steady rate, NormInfinite when log_ratio reports divergence.
GNormResult sup_over_exponents(const std::function<double(double)>& log_ratio,
                               const ExponentInterval& dom);

/// ||f||_G(psi) = sup_p |f|_p / psi(p).
GNormResult g_norm(const RadialFunction& f, const PsiFunction& psi, const WeightedSpace& X);

/// G(psi) norm of an arbitrary Lp evaluator p -> |h|_p.
GNormResult g_norm_of(const std::function<double(double)>& lp, const PsiFunction& psi);

/// phi(delta) = sup_p delta^(1/p) / psi(p).
double fundamental_phi(const PsiFunction& psi, double delta);

/// ||sigma_s|| = max(s^(d/a), s^(d/b)) with d = n + sigma (d = 1 on the half line).
double dilation_norm(const ExponentInterval& dom, double s,
                     const WeightedSpace& X = WeightedSpace::half_line());

/// ||f(./s)||_G / ||f||_G.
double dilation_norm_numeric(const RadialFunction& f, const PsiFunction& psi,
                             const WeightedSpace& X, double s);

struct BoydEstimate {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double residual1 = 0.0;
  double residual2 = 0.0;
};

void to_json(nlohmann::json& j, const BoydEstimate& b);

/// Slopes of log ||sigma_s|| against log s over s = 2^-k and s = 2^k, k = 10..30.
BoydEstimate boyd_indices(const ExponentInterval& dom,
                          const WeightedSpace& X = WeightedSpace::half_line());

/// Same fit with the numeric dilation norm of f.
BoydEstimate boyd_indices_numeric(const RadialFunction& f, const PsiFunction& psi,
                                  const WeightedSpace& X);

struct EndpointTrend {
  Attained endpoint = Attained::endpoint_a;
  std::vector<std::array<double, 2>> sequence;  // (p, ratio) approaching the endpoint
  double peak = 0.0;
  bool vanishes = false;
};

struct G0Report {
  bool in_g0 = false;
  std::vector<EndpointTrend> trends;
};

void to_json(nlohmann::json& j, const G0Report& r);

/// Whether psi(p) grows without bound toward the given endpoint.
bool psi_blows_up(const PsiFunction& psi, Attained endpoint);

/// G^0 membership from ratio sequences p_k -> endpoint with distances halving.
/// True iff at every endpoint where psi blows up the ratio ends decreasing and
/// below 1e-3 of its peak. Throws Inapplicable when psi is bounded at both ends.
G0Report in_g0(const std::function<double(double)>& lp, const PsiFunction& psi);
G0Report in_g0(const RadialFunction& f, const PsiFunction& psi, const WeightedSpace& X);

/// psi(p) = |f|_p tabulated on dom, so that f is a representation of the result.
PsiFunction tabulate_representation(const RadialFunction& f, const WeightedSpace& X,
                                    const ExponentInterval& dom);

/// psi(p) = |f|_p evaluated directly at every call. Serializes as the
/// tabulated form.
PsiFunction representation(const RadialFunction& f, const WeightedSpace& X,
                           const ExponentInterval& dom);

}  // namespace grandlp
