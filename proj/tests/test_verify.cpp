#include <doctest.h>

#include <cmath>

#include "grandlp/errors.hpp"
#include "grandlp/fit.hpp"
#include "grandlp/verify.hpp"

using namespace grandlp;
using doctest::Approx;

TEST_SUITE("verify") {
  TEST_CASE("exponent fit on an exact power law") {
    std::vector<std::pair<double, double>> v;
    for (double d : default_fit_window()) v.push_back({1.5 + d, std::pow(d, -2.0)});
    const auto fit = fit_endpoint_exponent(v, 1.5);
    CHECK(fit.exponent == Approx(-2.0).epsilon(1e-10));
    CHECK(fit.r_squared == Approx(1.0).epsilon(1e-12));
    CHECK(fit.endpoint == EndpointSide::lower);
  }

  TEST_CASE("log factor biases the plain fit and the correction removes it") {
    std::vector<std::pair<double, double>> v;
    for (double d : default_fit_window()) v.push_back({3.0 - d, std::log(1 / d) / d});
    const auto plain = fit_endpoint_exponent(v, 3.0);
    CHECK(plain.exponent < -1.0);
    CHECK(plain.exponent > -1.5);
    CHECK(fit_endpoint_exponent(v, 3.0, 1.0).exponent == Approx(-1.0).epsilon(1e-10));
  }

  TEST_CASE("fit input errors") {
    std::vector<std::pair<double, double>> few{{1.1, 1}, {1.01, 2}};
    CHECK_THROWS_AS(fit_endpoint_exponent(few, 1.0), InsufficientSpan);
    std::vector<std::pair<double, double>> neg;
    for (double d : default_fit_window()) neg.push_back({1 + d, -1.0});
    CHECK_THROWS_AS(fit_endpoint_exponent(neg, 1.0), NonPositiveValues);
  }

  TEST_CASE("gamma family with unit L") {
    const auto s = sharpness_gamma({1, 0.0, 1.0, 1.0, {}});
    CHECK(s.expected_exponent == Approx(-2.0));
    CHECK(s.fit.exponent == Approx(-2.0).epsilon(0.05));
    CHECK(s.max_rel_dev <= 1e-7);
    const auto w = sharpness_gamma({2, 0.5, 1.5, 0.5, {}});
    CHECK(w.max_rel_dev <= 1e-7);
    CHECK(w.expected_exponent == Approx(-(0.5 + 1 / w.A)));
  }

  TEST_CASE("convolution sharpness at b1 = b2 = 4/3") {
    const auto s = sharpness_convolution(4.0 / 3, 4.0 / 3, 0, 0);
    CHECK(s.endpoint == Approx(2.0));
    CHECK(s.t_fit.exponent == Approx(-0.5).epsilon(0.1));
    CHECK(std::abs(s.p_fit.exponent + 0.5) <= 0.05);
    CHECK(s.beta == Approx(7.41629870920548767).epsilon(1e-12));
    CHECK(std::abs(s.beta_ratio - 1) <= 0.02);
    CHECK(std::abs(s.gap - 1) <= 0.05);
    CHECK(s.finite_inside);
    CHECK(s.divergent_outside);
  }

  TEST_CASE("asymmetric convolution exponents") {
    const auto s = sharpness_convolution(1.25, 1.6, 0, 0);
    const double k = 1 - 1 / 1.25 - 1 / 1.6;
    CHECK(s.expected_t_exponent == Approx(k));
    CHECK(std::abs(s.t_fit.exponent - k) <= 0.05);
    CHECK(std::abs(s.p_fit.exponent - s.expected_p_exponent) <= 0.05);
  }

  TEST_CASE("Sobolev gap") {
    const auto s = sharpness_sobolev_gap(1, 2, 3, 3);
    CHECK(s.A2 == Approx(1.5));
    CHECK(s.B2 == Approx(6.0));
    CHECK(std::abs(s.gap_lower - 1.0 / 3) <= 0.05);
    CHECK(std::abs(s.gap_upper - 1.0 / 3) <= 0.05);
    CHECK(s.finite_inside);
    CHECK(s.divergent_outside);
  }

  TEST_CASE("result JSON carries the fits") {
    const auto j = nlohmann::json(sharpness_gamma({1, 0.0, 1.0, 1.0, {}}));
    CHECK(j.contains("fit"));
    CHECK(j.at("expected_exponent").get<double>() == Approx(-2.0));
  }
}
