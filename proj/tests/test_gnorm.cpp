#include <doctest.h>

#include <cmath>

#include "grandlp/errors.hpp"
#include "grandlp/gnorm.hpp"

using namespace grandlp;
using doctest::Approx;

TEST_SUITE("gnorm") {
  TEST_CASE("representation has norm one") {
    const WeightedSpace X(1, 0);
    const RadialFunction f({outer_piece(-1)});
    // |f|_p = (2 / (p - 1))^(1/p), written out rather than computed by the library.
    const auto psi = tabulate([](double p) { return std::pow(2 / (p - 1), 1 / p); }, ExponentInterval(1, 4));
    CHECK(g_norm(f, psi, X).norm == Approx(1.0).epsilon(1e-6));
    CHECK(g_norm(f.scaled(3.0), psi, X).norm == Approx(3.0).epsilon(1e-6));
    CHECK(g_norm(f, representation(f, X, ExponentInterval(1, 4)), X).norm == Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("tabulated and direct representations agree") {
    const WeightedSpace X(2, 0.5);
    const RadialFunction f({inner_piece(-2.5 / 3.6), outer_piece(-2.5 / 1.4, 0.5)});
    const ExponentInterval dom(1.5, 3.5);
    const auto t = tabulate_representation(f, X, dom), d = representation(f, X, dom);
    for (double p = 1.51; p < 3.5; p += 0.13) CHECK(t(p) == Approx(d(p)).epsilon(1e-7));
  }

  TEST_CASE("power-log family ratio is bounded above and below") {
    const WeightedSpace X(1, 0);
    const RadialFunction h({inner_piece(-0.25, 0.5), outer_piece(-0.5, 0.5)});
    const auto psi = make_power_log(2, 4, 1.0, 0.0);
    double lo = 1e300, hi = 0;
    for (double p = 2.01; p < 3.99; p += 0.02) {
      const double r = lp_norm(h, X, p).value / psi(p);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo > 0);
    CHECK(std::isfinite(hi));
  }

  TEST_CASE("norm errors") {
    const WeightedSpace X(1, 0);
    const auto flat = constant_psi(ExponentInterval(1, 4), 1.0);
    CHECK_THROWS_AS(g_norm(RadialFunction({outer_piece(-1)}), flat, X), NotInSpace);
    CHECK_THROWS_AS(g_norm(RadialFunction({outer_piece(-0.5)}), flat, X), NormInfinite);
  }

  TEST_CASE("fundamental function") {
    CHECK(fundamental_phi(constant_psi(ExponentInterval(1, 2), 1.0), 1.0) == Approx(1.0));
    const auto psi = make_power_log(1, 2, 0, 1);
    const double delta = 1e-6;
    double grid = 0;
    for (int i = 1; i < 100000; ++i) {
      const double p = 1 + i / 100000.0;
      if (!psi.domain().admits(p)) continue;
      grid = std::max(grid, std::pow(delta, 1 / p) / psi(p));
    }
    const double phi = fundamental_phi(psi, delta);
    CHECK(phi >= grid * (1 - 1e-12));
    CHECK(phi == Approx(grid).epsilon(1e-6));
    const auto L = make_power_log(1, 2, 0, 0.05);
    CHECK(fundamental_phi(L, 2e-6) / fundamental_phi(L, 1e-6) == Approx(std::sqrt(2.0)).epsilon(0.01));
  }

  TEST_CASE("dilation norm") {
    const ExponentInterval dom(2, 4);
    CHECK(dilation_norm(dom, 16) == Approx(4.0));
    CHECK(dilation_norm(dom, 1) == Approx(1.0));
    CHECK(dilation_norm(dom, 1.0 / 16) == Approx(0.5));
    const WeightedSpace X(1, 0);
    const RadialFunction f({inner_piece(-0.25), outer_piece(-0.5)});
    const auto rep = representation(f, X, dom);
    for (double s : {1.0 / 64, 0.5, 8.0, 1024.0})
      CHECK(dilation_norm_numeric(f, rep, X, s) == Approx(dilation_norm(dom, s, X)).epsilon(0.01));
  }

  TEST_CASE("Boyd indices") {
    const auto b = boyd_indices(ExponentInterval(2, 4));
    CHECK(b.gamma1 == Approx(0.25).epsilon(1e-9));
    CHECK(b.gamma2 == Approx(0.5).epsilon(1e-9));
    const auto w = boyd_indices(ExponentInterval(1, 3), WeightedSpace(2, 1));
    CHECK(w.gamma1 == Approx(1.0).epsilon(1e-9));
    CHECK(w.gamma2 == Approx(3.0).epsilon(1e-9));
    const auto narrow = boyd_indices(ExponentInterval(2, 2.001));
    CHECK(std::abs(narrow.gamma1 - narrow.gamma2) < 1e-3);
  }

  TEST_CASE("G0 membership") {
    const WeightedSpace X(1, 0);
    const RadialFunction rep({inner_piece(-0.25), outer_piece(-0.5)});
    const ExponentInterval dom(2, 4);
    CHECK_FALSE(in_g0(rep, representation(rep, X, dom), X).in_g0);
    const RadialFunction bump({interval_piece(1, 2)});
    CHECK(in_g0(bump, make_power_log(2, 4, 0, 0.5), X).in_g0);
    // An extra power on top of the representation pushes the ratio to zero.
    CHECK(in_g0(rep, product(representation(rep, X, dom), make_power_log(2, 4, 1, 1)), X).in_g0);
    CHECK_THROWS_AS(in_g0(bump, constant_psi(dom, 1.0), X), Inapplicable);
  }

  TEST_CASE("sup search finds an interior maximum") {
    const auto r = sup_over_exponents([](double p) { return -(p - 2.3) * (p - 2.3); }, ExponentInterval(1, 4));
    CHECK(r.attained == Attained::interior);
    CHECK(r.p_star == Approx(2.3).epsilon(1e-6));
    CHECK(r.norm == Approx(1.0));
  }
}
