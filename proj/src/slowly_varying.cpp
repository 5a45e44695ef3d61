#include "grandlp/slowly_varying.hpp"

#include <algorithm>
#include <cmath>

#include "grandlp/errors.hpp"

namespace grandlp {

namespace {
constexpr double kFreeze = 7.38905609893065;  // e^2
}

SlowlyVarying SlowlyVarying::log_power(double theta) {
  if (!std::isfinite(theta)) throw RejectedInput("log_power: theta must be finite");
  return {Kind::log_power, theta};
}

SlowlyVarying SlowlyVarying::iterated_log(double theta) {
  if (!std::isfinite(theta)) throw RejectedInput("iterated_log: theta must be finite");
  return {Kind::iterated_log, theta};
}

double SlowlyVarying::operator()(double z) const {
  if (is_unit()) return 1.0;
  const double zz = std::max(z, kFreeze);
  switch (kind_) {
    case Kind::log_power:
      return std::pow(std::log(zz), theta_);
    case Kind::iterated_log:
      return std::pow(std::log(std::log(zz)), theta_);
    case Kind::unit:
      break;
  }
  return 1.0;
}

SlowlyVarying SlowlyVarying::pow(double gamma) const {
  if (is_unit()) return unit();
  return {kind_, theta_ * gamma};
}

double SlowlyVarying::variation_defect(double c, double z_lo, double z_hi, int points) const {
  double worst = 0.0;
  const double step = std::log(z_hi / z_lo) / std::max(points - 1, 1);
  for (int i = 0; i < points; ++i) {
    const double z = z_lo * std::exp(step * i);
    worst = std::max(worst, std::abs((*this)(c * z) / (*this)(z) - 1.0));
  }
  return worst;
}

void to_json(nlohmann::json& j, const SlowlyVarying& L) {
  switch (L.kind()) {
    case SlowlyVarying::Kind::unit:
      j = {{"kind", "unit"}};
      break;
    case SlowlyVarying::Kind::log_power:
      j = {{"kind", "log_power"}, {"theta", L.theta()}};
      break;
    case SlowlyVarying::Kind::iterated_log:
      j = {{"kind", "iterated_log"}, {"theta", L.theta()}};
      break;
  }
}

void from_json(const nlohmann::json& j, SlowlyVarying& L) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "unit") {
    L = SlowlyVarying::unit();
  } else if (kind == "log_power") {
    L = SlowlyVarying::log_power(j.at("theta").get<double>());
  } else if (kind == "iterated_log") {
    L = SlowlyVarying::iterated_log(j.at("theta").get<double>());
  } else {
    throw RejectedInput("unknown slowly varying kind '" + kind + "'");
  }
}

}  // namespace grandlp
