#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grandlp/slowly_varying.hpp"

namespace grandlp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Evaluations requested closer than this to a finite endpoint are rejected.
inline constexpr double kEndpointGuard = 1e-9;

/// Open exponent interval (a, b) with 0 < a < b <= infinity.
class ExponentInterval {
 public:
  ExponentInterval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  bool bounded() const noexcept { return std::isfinite(b_); }
  bool contains(double p) const noexcept { return p > a_ && p < b_; }
  /// Inside and at least kEndpointGuard away from every finite endpoint.
  bool admits(double p) const noexcept {
    return p - a_ >= kEndpointGuard && (!bounded() || b_ - p >= kEndpointGuard);
  }

  /// Nonempty intersection, or std::nullopt.
  static std::optional<ExponentInterval> intersect(const ExponentInterval& x,
                                                   const ExponentInterval& y);

  friend bool operator==(const ExponentInterval&, const ExponentInterval&) = default;

 private:
  double a_;
  double b_;
};

/// W(z) on [2, infinity), increasing and convex; the input of the
/// Young-Fenchel construction.
class ConvexWeight {
 public:
  /// coef * z^exponent
  static ConvexWeight power(double coef, double exponent);
  /// coef * exp(rate * z)
  static ConvexWeight exponential(double coef, double rate);
  static ConvexWeight custom(std::function<double(double)> w, bool strictly_convex);

  double operator()(double z) const { return w_(z); }
  bool strictly_convex() const noexcept { return strictly_convex_; }

  /// Increasing and midpoint-convex on a geometric grid of [2, z_hi].
  bool shape_ok(double z_hi = 1e3, int points = 256) const;

  /// Serialisable description; empty for custom weights.
  const std::optional<nlohmann::json>& spec() const noexcept { return spec_; }

 private:
  std::function<double(double)> w_;
  bool strictly_convex_ = true;
  std::optional<nlohmann::json> spec_;
};

/// sup_{z > 2} (p z - W(z)).
double young_fenchel(const ConvexWeight& W, double p);

enum class PsiForm {
  power_log,
  product,
  power_scale,
  mult_inf,
  conv_inf,
  sobolev_nu,
  young_fenchel,
  tabulated,
};

std::string to_string(PsiForm form);

/// Immutable handle to a positive function on an open exponent interval.
///
/// Copies share the underlying node, and evaluation has no side effects, so
/// values can be shared freely between threads.
class PsiFunction {
 public:
  class Node;

  const ExponentInterval& domain() const;
  PsiForm form() const;

  /// psi(p); throws DomainError unless domain().admits(p).
  double operator()(double p) const;
  double log_eval(double p) const;

  /// Constituents for composite forms, empty otherwise.
  std::vector<PsiFunction> children() const;

  nlohmann::json to_json() const;

  explicit PsiFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

class PsiFunction::Node {
 public:
  explicit Node(ExponentInterval dom) : domain(dom) {}
  virtual ~Node() = default;
  virtual PsiForm form() const = 0;
  virtual double log_eval(double p) const = 0;
  virtual std::vector<PsiFunction> children() const { return {}; }
  virtual nlohmann::json to_json() const = 0;

  ExponentInterval domain;
};

/// (p-A)^-gamma (B-p)^-delta max(L(A/(p-A)), L(B/(B-p))) on (A, B).
PsiFunction make_power_log(double A, double B, double gamma, double delta,
                           SlowlyVarying L = SlowlyVarying::unit());

/// Pointwise product on the intersection of the two domains.
PsiFunction product(const PsiFunction& lhs, const PsiFunction& rhs);

/// p -> psi(gamma p)^gamma on (a/gamma, b/gamma); requires gamma in [a, b].
PsiFunction power_scale(const PsiFunction& psi, double gamma);

/// Hoelder infimum: r -> inf psi1(p r) psi2(q r) over 1/p + 1/q = 1, with
/// domain (max(1, a1 a2/(a1+a2)), b1 b2/(b1+b2)).
PsiFunction mult_inf(const PsiFunction& lhs, const PsiFunction& rhs);

/// Young infimum: r -> inf psi1(p) psi2(q) over 1/p + 1/q = 1 + 1/r, with
/// domain (a1 a2/(a1+a2-a1 a2), b1 b2/(b1+b2-b1 b2)).
PsiFunction conv_inf(const PsiFunction& lhs, const PsiFunction& rhs);

/// q -> q^(1-1/n) psi(q n/(q+m)) on (max(1, a m/(n-a)), b m/(n-b)).
PsiFunction sobolev_nu(const PsiFunction& psi, int n, int m);

/// p -> exp(W*(p)/p) on the given interval.
PsiFunction young_fenchel_psi(const ConvexWeight& W, ExponentInterval dom);

/// Cubic Hermite interpolation of log psi in the endpoint-stretched
/// coordinate xi = log((p-a)/(b-p)) (xi = log(p-a) when b is infinite).
/// `log_slopes`, when given, are d(log psi)/dp at the nodes.
PsiFunction tabulated(ExponentInterval dom, std::vector<double> p, std::vector<double> values,
                      std::vector<double> log_slopes = {});

/// Tabulate fn on `nodes` points uniform in xi over [-xi_span, xi_span],
/// with node slopes from central differences of log fn.
PsiFunction tabulate(const std::function<double(double)>& fn, ExponentInterval dom,
                     int nodes = 721, double xi_span = 18.0);

/// The constant c on dom, stored as a two-node table.
PsiFunction constant_psi(ExponentInterval dom, double c);

ExponentInterval mult_inf_domain(const ExponentInterval& d1, const ExponentInterval& d2);
ExponentInterval conv_inf_domain(const ExponentInterval& d1, const ExponentInterval& d2);
ExponentInterval sobolev_domain(const ExponentInterval& d, int n, int m);

/// Feasible range of the inner exponent p for one evaluation of an infimum.
struct FeasibleWindow {
  double p_lo = 0.0;
  double p_hi = 0.0;
};

FeasibleWindow mult_inf_window(const ExponentInterval& d1, const ExponentInterval& d2, double r);
FeasibleWindow conv_inf_window(const ExponentInterval& d1, const ExponentInterval& d2, double r);

struct InfimumResult {
  double value = 0.0;
  double p = 0.0;  // minimising inner exponent
  double q = 0.0;  // its partner on the constraint curve
  FeasibleWindow window;
};

InfimumResult mult_inf_detail(const PsiFunction& lhs, const PsiFunction& rhs, double r);
InfimumResult conv_inf_detail(const PsiFunction& lhs, const PsiFunction& rhs, double r);

struct LogConvexityReport {
  bool log_convex = true;
  int violations = 0;
  double worst_defect = 0.0;  // largest midpoint excess in log psi
};

/// Midpoint test of log psi on an interior grid; reported, never thrown.
LogConvexityReport check_log_convexity(const PsiFunction& psi, int points = 1000);

/// Build from the documented JSON schema.
PsiFunction psi_from_json(const nlohmann::json& j);

}  // namespace grandlp
