#pragma once

#include <functional>

namespace grandlp {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Integrand that also receives the exact distances to both interval ends,
/// so singular factors like (b - x)^-s can be evaluated without cancellation.
using EndpointAwareIntegrand = std::function<double(double x, double from_a, double to_b)>;

/// Tanh-sinh quadrature on [a, b]; tolerates integrable endpoint singularities.
QuadResult integrate_finite(const EndpointAwareIntegrand& f, double a, double b,
                            double rel_tol = 1e-12);
QuadResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-12);

/// Integral of f over [t0, inf) (direction > 0) or (-inf, t0] (direction < 0),
/// taken as a sum of panels whose widths double until the remaining panels
/// fall below 1e-17 of the running total. The geometric tail bound of the
/// truncated remainder is folded into abs_error.
QuadResult integrate_half_line(const std::function<double(double)>& f, double t0, int direction,
                               double rel_tol = 1e-12);

/// Fixed 10-point Gauss-Legendre rule on [a, b].
double gauss_legendre10(const std::function<double(double)>& f, double a, double b);

}  // namespace grandlp
