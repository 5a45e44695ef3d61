#pragma once

#include <json.hpp>

namespace grandlp {

/// A positive function L with L(cz)/L(z) -> 1 as z -> infinity.
///
/// Only the behaviour for large arguments matters, so L(z) is frozen at
/// L(e^2) for z < e^2. That keeps every kind strictly positive.
class SlowlyVarying {
 public:
  enum class Kind { unit, log_power, iterated_log };

  SlowlyVarying() = default;

  static SlowlyVarying unit() { return {}; }
  /// (log z)^theta
  static SlowlyVarying log_power(double theta);
  /// (log log z)^theta
  static SlowlyVarying iterated_log(double theta);

  Kind kind() const noexcept { return kind_; }
  double theta() const noexcept { return theta_; }
  bool is_unit() const noexcept { return kind_ == Kind::unit || theta_ == 0.0; }

  double operator()(double z) const;

  /// L^gamma, which stays in the same family.
  SlowlyVarying pow(double gamma) const;

  /// Largest |L(c z)/L(z) - 1| over z on a geometric grid in [z_lo, z_hi].
  double variation_defect(double c, double z_lo, double z_hi, int points = 64) const;

  friend bool operator==(const SlowlyVarying&, const SlowlyVarying&) = default;

 private:
  SlowlyVarying(Kind k, double theta) : kind_(k), theta_(theta) {}
  Kind kind_ = Kind::unit;
  double theta_ = 0.0;
};

void to_json(nlohmann::json& j, const SlowlyVarying& L);
void from_json(const nlohmann::json& j, SlowlyVarying& L);

}  // namespace grandlp
