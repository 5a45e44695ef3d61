#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grandlp/errors.hpp"
#include "grandlp/measure.hpp"
#include "grandlp/quadrature.hpp"
#include "grandlp/radial.hpp"

using namespace grandlp;
using doctest::Approx;

namespace {

constexpr double kBeta_quarter_quarter = 7.41629870920548767;  // B(1/4, 1/4), mpmath
constexpr double kBeta_quarter_half = 5.24411510858423962;     // B(1/4, 1/2), mpmath

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("measure_quad") {
  TEST_CASE("weighted space constants") {
    CHECK(WeightedSpace(1, 0).Omega() == Approx(2.0));
    CHECK(WeightedSpace(2, 0).Omega() == Approx(2 * std::numbers::pi));
    CHECK(WeightedSpace(3, 0).Omega() == Approx(4 * std::numbers::pi));
    CHECK(WeightedSpace(3, 0).omega() == Approx(4 * std::numbers::pi / 3));
    CHECK(WeightedSpace(2, 1).degree() == 3.0);
    CHECK(WeightedSpace::half_line().radial_factor() == 1.0);
  }

  TEST_CASE("indicator of the symmetric unit interval") {
    const RadialFunction f({interval_piece(0, 1)});
    for (double p : {0.5, 1.0, 2.0, 7.5}) {
      CHECK(lp_norm(f, WeightedSpace(1, 0), p).value == Approx(std::pow(2.0, 1 / p)).epsilon(1e-12));
    }
  }

  TEST_CASE("outer log piece has |f|_2 = 2") {
    const RadialFunction f({outer_piece(-1, 1)});
    CHECK(lp_norm(f, WeightedSpace(1, 0), 2).value == Approx(2.0).epsilon(1e-12));
    CHECK(lp_norm_quadrature(f, WeightedSpace(1, 0), 2).value == Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("exact-gamma elementary cases") {
    const WeightedSpace X(1, 0);
    CHECK(lp_norm_exact_gamma(outer_piece(-0.5), X, 4) == Approx(1.0));
    CHECK(lp_norm_exact_gamma(inner_piece(-0.5), X, 1) == Approx(2.0));
    CHECK(lp_norm_exact_gamma(outer_piece(-1, 1), X, 2) == Approx(2.0));
    CHECK_THROWS_AS(lp_norm_exact_gamma(outer_piece(-1, 0, SlowlyVarying::log_power(1)), X, 2),
                    NotExact);
  }

  TEST_CASE("weighted inner piece against a hand integral") {
    // 4 pi int_0^1 r^(2.5) r^(-2) dr = 4 pi / 1.5
    const RadialFunction f({inner_piece(-1)});
    CHECK(lp_norm(f, WeightedSpace(3, 0.5), 2).value ==
          Approx(std::sqrt(4 * std::numbers::pi / 1.5)).epsilon(1e-12));
  }

  TEST_CASE("quadrature matches exact gamma on a mixed profile") {
    const RadialFunction h({inner_piece(-0.3, 0.7, {}, 1.3), outer_piece(-0.9, 1.2, {}, 0.8)});
    const WeightedSpace X(2, 0.5);
    for (double p = 3.0; p < 8.0; p += 0.4) {
      CHECK(lp_norm_quadrature(h, X, p).value == Approx(lp_norm(h, X, p).value).epsilon(1e-7));
    }
  }

  TEST_CASE("slowly varying factor by Simpson in the log variable") {
    // int_1^inf r^-2 L(log r)^2 dr with L = log, frozen below e^2; r = e^z
    // gives int_0^inf e^-z L(z)^2 dz.
    const SlowlyVarying L = SlowlyVarying::log_power(1);
    const RadialFunction f({outer_piece(-1, 0, L)});
    const auto g = [&](double z) { return std::exp(-z) * L(z) * L(z); };
    const double e2 = std::exp(2.0);
    const double oracle = simpson(g, 0, e2, 20000) + simpson(g, e2, 80, 200000);
    CHECK(std::pow(lp_norm(f, WeightedSpace::half_line(), 2).value, 2) == Approx(oracle).epsilon(1e-8));
  }

  TEST_CASE("divergence is reported") {
    const RadialFunction f({outer_piece(-0.5)});
    CHECK_THROWS_AS(lp_norm(f, WeightedSpace(1, 0), 2), DivergenceError);
    CHECK_THROWS_AS(lp_norm(RadialFunction({inner_piece(-1)}), WeightedSpace(1, 0), 1), DivergenceError);
  }

  TEST_CASE("convolution of unit indicators is the triangle") {
    const RadialFunction f({interval_piece(0, 1)});
    for (double t : {0.1, 0.5, 0.9}) CHECK(convolve_at(f, f, t) == Approx(t).epsilon(1e-10));
    for (double t : {1.2, 1.8}) CHECK(convolve_at(f, f, t) == Approx(2 - t).epsilon(1e-10));
    const auto h = convolve1d(f, f, default_convolution_grid(f, f));
    CHECK(h(0.3) == Approx(0.3).epsilon(1e-6));
    CHECK(h(1.5) == Approx(0.5).epsilon(1e-6));
    CHECK(h(2.5) == 0.0);
  }

  TEST_CASE("convolution near the origin follows the Beta asymptotic") {
    const RadialFunction f({interval_piece(0, 1, -0.75)});
    const double t = 1e-6;
    CHECK(convolve_at(f, f, t) / (kBeta_quarter_quarter * std::pow(t, -0.5)) == Approx(1.0).epsilon(0.02));
    const RadialFunction g({interval_piece(0, 1, -0.5)});
    CHECK(convolve_at(f, g, t) / (kBeta_quarter_half * std::pow(t, -0.25)) == Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("convolution of a non-integrable piece is rejected") {
    const RadialFunction f({interval_piece(0, 1, -1.2)});
    CHECK_THROWS_AS(convolve_at(f, f, 0.5), DivergenceError);
  }

  TEST_CASE("gradient modulus") {
    const WeightedSpace X(3, 0);
    const RadialFunction cap({interval_piece(0, 1, 0, 1), interval_piece(0, 1, 1, -1)});
    const auto g = gradient_modulus(cap, X);
    CHECK(g(0.5) == Approx(1.0));
    CHECK(g(0.99) == Approx(1.0));
    CHECK(g(1.5) == 0.0);
    const double a = 2.0;
    const auto h = gradient_modulus(RadialFunction({outer_piece(-1 / a)}), X);
    CHECK(h(3.0) == Approx(std::pow(3.0, -1 / a - 1) / a));
    CHECK(h(0.5) == 0.0);
    const auto z = gradient_modulus(RadialFunction({everywhere_piece(0, 5.0)}), X);
    CHECK(z(0.7) == 0.0);
  }

  TEST_CASE("quadrature primitives") {
    CHECK(integrate_finite([](double x) { return 1 / std::sqrt(x); }, 0, 1).value == Approx(2.0).epsilon(1e-10));
    CHECK(integrate_half_line([](double x) { return std::exp(-x); }, 0, +1).value == Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("RadialFunction JSON round trip") {
    const RadialFunction f({inner_piece(-0.4, 0.5, SlowlyVarying::log_power(0.3), 2.0),
                            outer_piece(-1.7, 0, SlowlyVarying::iterated_log(1)),
                            interval_piece(0.5, 2.0, 1.5, -0.25)});
    const auto back = radial_from_json(nlohmann::json::parse(nlohmann::json(f).dump()));
    CHECK(back.pieces() == f.pieces());
    const RadialFunction g({interval_piece(0, 1, -0.75)});
    const auto h = convolve1d(g, g, default_convolution_grid(g, g));
    const auto hb = radial_from_json(nlohmann::json::parse(nlohmann::json(h).dump()));
    for (double r : {1e-3, 0.4, 1.3, 1.99}) CHECK(hb(r) == Approx(h(r)).epsilon(1e-14));
  }
}
