#pragma once

#include <limits>
#include <optional>
#include <vector>

#include <json.hpp>

#include "grandlp/slowly_varying.hpp"

namespace grandlp {

/// R^n with the weight |x|^sigma dx, or the one-sided half line (0, inf)
/// with Lebesgue measure.
class WeightedSpace {
 public:
  WeightedSpace(int n, double sigma);
  static WeightedSpace half_line();

  int n() const noexcept { return n_; }
  double sigma() const noexcept { return sigma_; }
  bool one_sided() const noexcept { return one_sided_; }
  /// n + sigma, the homogeneity degree of the measure.
  double degree() const noexcept { return n_ + sigma_; }

  /// Volume of the unit ball, pi^(n/2) / Gamma(n/2 + 1).
  double omega() const;
  /// Surface area of the unit sphere, n omega(n).
  double Omega() const;
  /// [(sigma + n)/Omega(n)]^(1/(sigma + n)).
  double R() const;
  /// Factor in |f|_p^p = factor * int_0^inf r^(n+sigma-1) |f(r)|^p dr.
  double radial_factor() const { return one_sided_ ? 1.0 : Omega(); }

 private:
  WeightedSpace(int n, double sigma, bool one_sided)
      : n_(n), sigma_(sigma), one_sided_(one_sided) {}
  int n_;
  double sigma_;
  bool one_sided_;
};

enum class Region { inner, outer, interval, all };

/// coeff * I(x in region) * x^power * |log x|^logpow * L(|log x|),
/// evaluated at x = (r + shift) / scale.
struct Piece {
  Region region = Region::all;
  double coeff = 1.0;
  double power = 0.0;
  double logpow = 0.0;
  SlowlyVarying L;
  double shift = 0.0;
  double scale = 1.0;
  double x0 = 0.0;  // interval region bounds in x
  double x1 = 0.0;

  /// Value at radius r > 0.
  double value(double r) const;
  /// log |value| at r = e^log_r together with the sign; -inf where zero.
  double log_abs_at_log(double log_r, int* sign) const;

  /// Closed x-interval covered by the region.
  double x_lo() const;
  double x_hi() const;
  /// Radii where the region starts and ends (0 and inf included).
  double r_lo() const;
  double r_hi() const;

  /// Pure power-log: unit L, no shift, inner or outer region.
  bool pure() const;

  friend bool operator==(const Piece&, const Piece&) = default;
};

Piece inner_piece(double power, double logpow = 0.0, SlowlyVarying L = {}, double coeff = 1.0);
Piece outer_piece(double power, double logpow = 0.0, SlowlyVarying L = {}, double coeff = 1.0);
Piece interval_piece(double x0, double x1, double power = 0.0, double coeff = 1.0);
Piece everywhere_piece(double power, double coeff = 1.0);

/// Sampled function on a radial grid. Below the first node the function
/// follows the power law through the first two nodes (in the offset
/// r - origin); above the last node it is zero or, with power_tail, the power
/// law through the last two nodes.
struct NumericClosure {
  std::vector<double> grid;
  std::vector<double> values;
  double origin = 0.0;
  bool power_tail = false;
  /// Upper tail exponent when known analytically; NaN means fit it from the
  /// last two nodes.
  double tail_exponent = std::numeric_limits<double>::quiet_NaN();
  /// Same for the lower tail at origin.
  double head_exponent = std::numeric_limits<double>::quiet_NaN();
  /// Log powers l of the tail models c u^k |log u|^l; used only with an analytic exponent.
  double tail_logpow = 0.0;
  double head_logpow = 0.0;

  double value(double r) const;
  /// Exponent of the lower tail model c (r - origin)^k.
  double lower_exponent() const;
  /// Exponent of the upper tail model c r^k (power_tail only).
  double upper_exponent() const;
};

/// A radial profile: either a finite sum of power-log pieces or a numeric
/// closure. Immutable value type.
class RadialFunction {
 public:
  RadialFunction() = default;
  explicit RadialFunction(std::vector<Piece> pieces);
  explicit RadialFunction(NumericClosure closure);

  bool is_closure() const noexcept { return closure_.has_value(); }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const NumericClosure& closure() const;

  double operator()(double r) const;
  /// log |f(e^log_r)|, combining active pieces without overflow.
  double log_abs_at_log(double log_r) const;

  /// c * f
  RadialFunction scaled(double c) const;
  /// f(r / s)
  RadialFunction dilated(double s) const;
  /// f(eps + r)
  RadialFunction shifted(double eps) const;

  /// Radii in (0, inf) where some piece switches on or off, sorted.
  std::vector<double> breakpoints() const;
  double support_lo() const;
  double support_hi() const;

  friend RadialFunction operator+(const RadialFunction& f, const RadialFunction& g);
  friend RadialFunction operator-(const RadialFunction& f, const RadialFunction& g);

 private:
  std::vector<Piece> pieces_;
  std::optional<NumericClosure> closure_;
};

/// Pointwise product of two piecewise functions; pieces must share shift
/// and scale, and at most one factor per pair may carry a non-unit L.
RadialFunction multiply(const RadialFunction& f, const RadialFunction& g);

/// |f|^gamma for a function whose pieces have pairwise disjoint regions.
RadialFunction abs_power(const RadialFunction& f, double gamma);

void to_json(nlohmann::json& j, const RadialFunction& f);
RadialFunction radial_from_json(const nlohmann::json& j);

}  // namespace grandlp
