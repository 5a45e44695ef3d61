#include "grandlp/quadrature.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "grandlp/errors.hpp"

namespace grandlp {

namespace {

boost::math::quadrature::tanh_sinh<double>& integrator() {
  thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  return ts;
}

}  // namespace

QuadResult integrate_finite(const EndpointAwareIntegrand& f, double a, double b, double rel_tol) {
  if (a == b) return {};
  if (!(b > a)) throw RejectedInput("integrate_finite: need a < b");
  const double width = b - a;
  // Boost passes xc = a - x on the left half and b - x on the right half.
  auto g = [&](double x, double xc) {
    double from_a, to_b;
    if (xc <= 0) {
      from_a = -xc;
      to_b = width - from_a;
    } else {
      to_b = xc;
      from_a = width - to_b;
    }
    return f(x, from_a, to_b);
  };
  double err = 0.0, l1 = 0.0;
  double value;
  try {
    value = integrator().integrate(g, a, b, rel_tol, &err, &l1);
  } catch (const std::exception& e) {
    throw NonConvergence(std::string("tanh-sinh failed: ") + e.what());
  }
  if (!std::isfinite(value)) throw NonConvergence("tanh-sinh produced a non-finite value");
  return {value, err};
}

QuadResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                            double rel_tol) {
  return integrate_finite([&](double x, double, double) { return f(x); }, a, b, rel_tol);
}

QuadResult integrate_half_line(const std::function<double(double)>& f, double t0, int direction,
                               double rel_tol) {
  const double dir = direction > 0 ? 1.0 : -1.0;
  QuadResult total;
  double prev = -1.0;
  double lo = 0.0, width = 1.0;
  for (int k = 0; k < 90; ++k) {
    const double hi = lo + width;
    const double x0 = dir > 0 ? t0 + lo : t0 - hi;
    const double x1 = dir > 0 ? t0 + hi : t0 - lo;
    const auto piece = integrate_finite(f, x0, x1, rel_tol);
    total.value += piece.value;
    total.abs_error += piece.abs_error;
    const double c = std::abs(piece.value);
    if (k >= 3 && c <= 1e-17 * std::abs(total.value) && c <= prev) {
      const double rho = prev > 0 ? c / prev : 0.0;
      if (rho < 1) total.abs_error += c * rho / (1 - rho);
      return total;
    }
    prev = c;
    lo = hi;
    if (k > 0) width *= 2;
  }
  throw NonConvergence("half-line integral did not settle after 2^90 units");
}

double gauss_legendre10(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

}  // namespace grandlp
