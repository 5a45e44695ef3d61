#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

namespace grandlp {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double max_residual = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

enum class EndpointSide { lower, upper };

struct AsymptoticFit {
  EndpointSide endpoint = EndpointSide::lower;
  double endpoint_value = 0.0;
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double max_residual = 0.0;
  double log_correction = 0.0;
  std::vector<double> window;  // distances to the endpoint, ascending
};

/// Eleven distances geometric in [1e-4, 1e-1].
std::vector<double> default_fit_window();

/// Slope of log v against log |p - endpoint|. With log_correction c the
/// regressand is log v - c log|log|p - endpoint||, which removes a
/// |log dist|^c factor. Needs >= 8 points on one side of the endpoint,
/// distances in (0, 0.1] spanning >= 2 decades, and v > 0.
AsymptoticFit fit_endpoint_exponent(const std::vector<std::pair<double, double>>& values,
                                    double endpoint, double log_correction = 0.0);

void to_json(nlohmann::json& j, const AsymptoticFit& f);

}  // namespace grandlp
