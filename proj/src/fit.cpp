#include "grandlp/fit.hpp"

#include <algorithm>
#include <cmath>

#include "grandlp/errors.hpp"
#include "grandlp/extremum.hpp"

namespace grandlp {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw RejectedInput("ols: need >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0)) throw InsufficientSpan("ols: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    sse += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  f.r_squared = syy > 0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return f;
}

std::vector<double> default_fit_window() { return geomspace(1e-4, 1e-1, 11); }

AsymptoticFit fit_endpoint_exponent(const std::vector<std::pair<double, double>>& values,
                                    double endpoint, double log_correction) {
  if (values.size() < 8) throw InsufficientSpan("endpoint fit needs at least 8 points");
  int above = 0, below = 0;
  std::vector<std::pair<double, double>> pts;  // (distance, value)
  for (const auto& [p, v] : values) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw NonPositiveValues("endpoint fit needs positive finite values");
    }
    const double dist = std::abs(p - endpoint);
    if (!(dist > 0)) throw RejectedInput("endpoint fit: a point sits on the endpoint");
    if (dist > 0.1 * (1 + 1e-9)) throw RejectedInput("endpoint fit: distances must be <= 0.1");
    (p > endpoint ? above : below)++;
    pts.emplace_back(dist, v);
  }
  if (above && below) throw RejectedInput("endpoint fit: points on both sides of the endpoint");
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].first > pts[i - 1].first)) throw RejectedInput("endpoint fit: repeated distance");
  }
  if (pts.back().first / pts.front().first < 100 * (1 - 1e-9)) {
    throw InsufficientSpan("endpoint fit needs distances spanning at least 2 decades");
  }
  std::vector<double> x, y;
  AsymptoticFit out;
  for (const auto& [d, v] : pts) {
    x.push_back(std::log(d));
    y.push_back(std::log(v) - log_correction * std::log(std::abs(std::log(d))));
    out.window.push_back(d);
  }
  const LineFit lf = ols(x, y);
  out.endpoint = above ? EndpointSide::lower : EndpointSide::upper;
  out.endpoint_value = endpoint;
  out.exponent = lf.slope;
  out.intercept = lf.intercept;
  out.r_squared = lf.r_squared;
  out.max_residual = lf.max_residual;
  out.log_correction = log_correction;
  return out;
}

void to_json(nlohmann::json& j, const AsymptoticFit& f) {
  j = {{"endpoint", f.endpoint == EndpointSide::lower ? "lower" : "upper"},
       {"endpoint_value", f.endpoint_value},
       {"exponent", f.exponent},
       {"intercept", f.intercept},
       {"r_squared", f.r_squared},
       {"max_residual", f.max_residual},
       {"log_correction", f.log_correction},
       {"window", f.window}};
}

}  // namespace grandlp
