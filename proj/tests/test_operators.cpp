#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grandlp/errors.hpp"
#include "grandlp/operators.hpp"

using namespace grandlp;
using doctest::Approx;

TEST_SUITE("operators") {
  TEST_CASE("Young triple at p = q = 4/3") {
    const auto y = YoungTriple::from_pq(4.0 / 3, 4.0 / 3);
    CHECK(y.r == Approx(2.0));
    CHECK(y.s == Approx(4.0));
    CHECK(y.t == Approx(4.0));
    CHECK(y.z == Approx(2.0));
    CHECK_THROWS_AS(YoungTriple::from_pq(4, 4), RejectedInput);
  }

  TEST_CASE("Young constant") {
    // [(4/3)^(3/2) 4^(-1/2)]^(1/2) by hand
    const double hand = std::sqrt(std::pow(4.0 / 3, 1.5) / 2.0);
    CHECK(young_constant(4.0 / 3, 4.0 / 3, 1) == Approx(hand).epsilon(1e-13));
    CHECK(young_constant(4.0 / 3, 4.0 / 3, 1) == Approx(0.877382675301661641).epsilon(1e-13));
    CHECK(young_constant(1 + 1e-9, 1 + 1e-9, 3) == Approx(1.0).epsilon(1e-6));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000;) {
      const double a = u(rng), b = u(rng);
      if (a + b < 1) continue;
      ++i;
      CHECK(young_constant(1 / a, 1 / b, 1 + i % 3) <= 1 + 1e-12);
    }
    CHECK(young_constant_as_displayed(1.01, 5.8, 1) > 1.0);
  }

  TEST_CASE("tensor check") {
    const WeightedSpace X1(1, 0), X2(2, 0.5);
    const RadialFunction f({inner_piece(-1 / 3.5), outer_piece(-1 / 1.9)});
    const RadialFunction g({inner_piece(-2.5 / 4.5), outer_piece(-2.5 / 2.2)});
    const ExponentInterval d1(2, 3.3), d2(2.5, 4.0);
    const auto rep = tensor_check(f, X1, representation(f, X1, d1), g, X2, representation(g, X2, d2));
    CHECK(rep.pass);
    CHECK(rep.ratio == Approx(1.0).epsilon(1e-6));
    // neutral factor: g with psi2 = |g|_p reduces to ||f||
    const RadialFunction ind({interval_piece(0, 1)});
    const auto psi1 = make_power_log(2, 3.3, 0.3, 0.3);
    const auto neutral = tensor_check(f, X1, psi1, ind, X1, representation(ind, X1, d1));
    CHECK(neutral.lhs == Approx(g_norm(f, psi1, X1).norm).epsilon(1e-9));
    // product-measure exactness against nested quadrature
    for (double p : {2.6, 3.2}) {
      CHECK(tensor_lp_direct(f, X1, g, X2, p) ==
            Approx(lp_norm(f, X1, p).value * lp_norm(g, X2, p).value).epsilon(1e-7));
    }
  }

  TEST_CASE("product check with closed-form norms") {
    const WeightedSpace X(1, 0);
    const RadialFunction f({interval_piece(0, 1, -0.25)});
    const ExponentInterval dom(1, 4);
    const auto psi = representation(f, X, dom);
    const auto rep = product_check(f, psi, f, psi, X);
    CHECK(rep.pass);
    CHECK(rep.ratio <= 1 + 1e-9);
    // |f|_p^p = 2 / (1 - p/4) by hand
    CHECK(lp_norm(f, X, 2).value == Approx(std::sqrt(4.0)).epsilon(1e-12));
  }

  TEST_CASE("power identity") {
    const WeightedSpace X(1, 0);
    const RadialFunction f({inner_piece(-0.3), outer_piece(-0.6)});
    const auto psi = make_power_log(2, 3, 0.4, 0.4);
    const double n1 = g_norm(f, psi, X).norm;
    const double n2 = g_norm(abs_power(f, 2), power_scale(psi, 2), X).norm;
    CHECK(n2 == Approx(n1 * n1).epsilon(1e-9));
  }

  TEST_CASE("pointwise Young step on the unit indicator") {
    const RadialFunction f({interval_piece(0, 1)});
    const auto h = convolve1d(f, f, default_convolution_grid(f, f));
    const auto H = WeightedSpace::half_line();
    const double lhs = lp_norm(h, H, 2).value;
    CHECK(lhs == Approx(std::sqrt(2.0 / 3)).epsilon(1e-5));
    CHECK(lhs <= young_constant(4.0 / 3, 4.0 / 3, 1) * lp_norm(f, H, 4.0 / 3).value * lp_norm(f, H, 4.0 / 3).value);
  }

  TEST_CASE("convolution check") {
    const auto H = WeightedSpace::half_line();
    const RadialFunction f({interval_piece(0, 1, -0.5)});
    const RadialFunction g({interval_piece(0, 1, -0.7)});
    const auto rep = convolution_check(f, representation(f, H, ExponentInterval(1, 2)), g,
                                       representation(g, H, ExponentInterval(1, 1.0 / 0.7)));
    CHECK(rep.pass);
  }

  TEST_CASE("Sobolev check on the cap profile") {
    const RadialFunction cap({interval_piece(0, 1, 0, 1), interval_piece(0, 1, 1, -1)});
    const auto psi = make_power_log(1, 2, 0.5, 0.5);
    const SobolevConfig cfg{3, 3};
    const auto rep = sobolev_check(cap, psi, cfg);
    REQUIRE(rep.empirical_constant.has_value());
    CHECK(std::isfinite(rep.lhs));
    CHECK(std::isfinite(rep.rhs));
    const auto scaled = sobolev_check(cap.scaled(2.5), psi, cfg);
    CHECK(*scaled.empirical_constant == Approx(*rep.empirical_constant).epsilon(1e-6));
    CHECK_THROWS_AS(sobolev_check(cap, make_power_log(1, 3, 1, 1), cfg), RejectedInput);
  }

  TEST_CASE("shifts and periodic norms") {
    const RadialFunction u({interval_piece(0, 1, 1)});
    const auto t0 = shift(u, 0);
    for (double r : {0.2, 0.7}) CHECK(t0(r) == u(r));
    CHECK(shift(u, 0.25)(0.5) == Approx(0.75));
    const RadialFunction one({interval_piece(0, kTwoPi)});
    CHECK(periodic_lp(one, 2) == Approx(std::sqrt(kTwoPi)).epsilon(1e-10));
    CHECK(periodic_shift_diff_lp(u, 0.3, 0.3, 2) == 0.0);
    // x on (0, 2 pi): shifting by pi turns x into x + pi or x - pi, so |diff| = pi
    const RadialFunction ramp({interval_piece(0, kTwoPi, 1)});
    CHECK(periodic_shift_diff_lp(ramp, 0, std::numbers::pi, 1) == Approx(kTwoPi * std::numbers::pi).epsilon(1e-8));
    CHECK(shift_grid(1.0, 4) == std::vector<double>{0.25, 0.5, 0.75});
  }

  TEST_CASE("witness outside G0 keeps its shift gap") {
    const RadialFunction w({interval_piece(0, kTwoPi, -0.5)});
    const auto psi = representation(w, WeightedSpace::half_line(), ExponentInterval(1, 2));
    const auto r8 = min_shift_gap(w, psi, shift_grid(1.0, 8));
    CHECK(r8.min_gap == Approx(std::sqrt(2.0)).epsilon(1e-3));
    const RadialFunction smooth({interval_piece(0, kTwoPi, 2)});
    CHECK_THROWS_AS(noncompact_gap(smooth, psi, shift_grid(1.0, 4)), Inapplicable);
  }
}
