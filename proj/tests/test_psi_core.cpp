#include <doctest.h>

#include <cmath>
#include <limits>

#include "grandlp/errors.hpp"
#include "grandlp/psi.hpp"

using namespace grandlp;
using doctest::Approx;

namespace {

// Grid scan of obj over [lo, hi], then a second scan of the best cell's
// neighbourhood.
template <class F>
double two_level_min(F obj, double lo, double hi) {
  const int N = 100000;
  double best = std::numeric_limits<double>::infinity(), at = lo;
  double h = (hi - lo) / N;
  for (int level = 0; level < 2; ++level) {
    const double from = level == 0 ? lo : std::max(lo, at - 2 * h);
    const double to = level == 0 ? hi : std::min(hi, at + 2 * h);
    const double step = (to - from) / N;
    for (int i = 1; i < N; ++i) {
      const double v = obj(from + step * i);
      if (v < best) {
        best = v;
        at = from + step * i;
      }
    }
    h = step;
  }
  return best;
}

// psi1(p r) psi2(q r) over 1/p + 1/q = 1, p in (1, 100].
double holder_grid_inf(const PsiFunction& f, const PsiFunction& g, double r) {
  const auto obj = [&](double p) {
    const double q = p / (p - 1.0);
    if (!f.domain().admits(p * r) || !g.domain().admits(q * r)) return std::numeric_limits<double>::infinity();
    return f(p * r) * g(q * r);
  };
  return two_level_min(obj, 1.0, 100.0);
}

// psi1(p) psi2(q) over 1/p + 1/q = 1 + 1/r.
double young_grid_inf(const PsiFunction& f, const PsiFunction& g, double r) {
  const auto obj = [&](double p) {
    const double inv_q = 1.0 + 1.0 / r - 1.0 / p;
    if (inv_q <= 0 || !f.domain().admits(p) || !g.domain().admits(1.0 / inv_q))
      return std::numeric_limits<double>::infinity();
    return f(p) * g(1.0 / inv_q);
  };
  return two_level_min(obj, f.domain().a(), f.domain().b());
}

}  // namespace

TEST_SUITE("psi_core") {
  TEST_CASE("power_log closed values") {
    CHECK(make_power_log(1, 2, 1, 0)(1.5) == Approx(2.0));
    CHECK(make_power_log(1, 2, 0, 1)(1.5) == Approx(2.0));
    // (p-1)^-1 (3-p)^-1 max(L(1), L(3)) at p = 2, with L = log frozen below e^2.
    CHECK(make_power_log(1, 3, 1, 1, SlowlyVarying::log_power(1))(2.0) == Approx(2.0));
    // Away from the frozen range: A/(p-A) = 1000, so L = log 1000.
    const double p = 1.001;
    CHECK(make_power_log(1, 3, 1, 1, SlowlyVarying::log_power(1))(p) ==
          Approx(std::log(1000.0) / (0.001 * (3 - p))).epsilon(1e-9));
  }

  TEST_CASE("power_log rejects bad parameters") {
    CHECK_THROWS_AS(make_power_log(2, 1, 1, 0), RejectedInput);
    CHECK_THROWS_AS(make_power_log(0.5, 2, 1, 0), RejectedInput);
    CHECK_THROWS_AS(make_power_log(1, 2, 0, 0), RejectedInput);
  }

  TEST_CASE("evaluation near an endpoint is rejected") {
    const auto psi = make_power_log(1, 2, 1, 1);
    CHECK_THROWS_AS(psi(1.0 + 1e-10), DomainError);
    CHECK_THROWS_AS(psi(2.0 - 1e-10), DomainError);
    CHECK_THROWS_AS(psi(3.0), DomainError);
    CHECK_NOTHROW(psi(1.0 + 1e-8));
  }

  TEST_CASE("product") {
    const auto f = make_power_log(1, 3, 1, 0), g = make_power_log(2, 4, 0, 1);
    const auto h = product(f, g);
    CHECK(h.domain().a() == 2.0);
    CHECK(h.domain().b() == 3.0);
    CHECK(h(2.5) == Approx(f(2.5) * g(2.5)).epsilon(1e-14));
    const auto one = constant_psi(ExponentInterval(1, 3), 1.0);
    CHECK(product(f, one)(1.7) == Approx(f(1.7)).epsilon(1e-12));
    CHECK_THROWS_AS(product(make_power_log(1, 2, 1, 1), make_power_log(3, 4, 1, 1)), RejectedInput);
  }

  TEST_CASE("power_scale") {
    const auto psi = make_power_log(1, 4, 1, 0);
    const auto id = power_scale(psi, 1.0);
    CHECK(id.domain() == psi.domain());
    CHECK(id(2.2) == Approx(psi(2.2)));
    const auto sq = power_scale(psi, 2.0);
    CHECK(sq.domain().a() == Approx(0.5));
    CHECK(sq.domain().b() == Approx(2.0));
    CHECK(sq(1.0) == Approx(1.0));
    CHECK(sq(1.3) == Approx(std::pow(1.0 / (2.6 - 1.0), 2.0)));
    CHECK_THROWS_AS(power_scale(psi, 5.0), RejectedInput);
    CHECK_THROWS_AS(power_scale(psi, 0.5), RejectedInput);
  }

  TEST_CASE("mult_inf domain and grid oracle") {
    const auto psi = make_power_log(2, 6, 1, 1);
    const auto m = mult_inf(psi, psi);
    CHECK(m.domain().a() == Approx(1.0));
    CHECK(m.domain().b() == Approx(3.0));
    for (double r : {1.05, 1.5, 2.5}) {
      const double grid = holder_grid_inf(psi, psi, r);
      CHECK(m(r) <= grid * (1 + 1e-9));
      CHECK(m(r) >= grid * (1 - 1e-6));
    }
    const auto c = mult_inf(constant_psi(ExponentInterval(2, 6), 2.0),
                            constant_psi(ExponentInterval(2, 6), 3.0));
    CHECK(c(1.3) == Approx(6.0));
  }

  TEST_CASE("conv_inf domain and grid oracle") {
    const auto psi = make_power_log(1, 4.0 / 3.0, 0.5, 0.5);
    const auto c = conv_inf(psi, psi);
    CHECK(c.domain().a() == Approx(1.0));
    CHECK(c.domain().b() == Approx(2.0));
    for (double r : {1.2, 1.5, 1.8}) {
      const double grid = young_grid_inf(psi, psi, r);
      CHECK(c(r) <= grid * (1 + 1e-9));
      CHECK(c(r) >= grid * (1 - 1e-6));
    }
    CHECK_THROWS_AS(conv_inf(make_power_log(1, 4, 1, 1), make_power_log(1, 4, 1, 1)), RejectedInput);
  }

  TEST_CASE("sobolev_nu") {
    const auto psi = make_power_log(1, 2, 1, 1);
    const auto nu = sobolev_nu(psi, 3, 3);
    CHECK(nu.domain().a() == Approx(1.5));
    CHECK(nu.domain().b() == Approx(6.0));
    CHECK(nu(3.0) == Approx(std::pow(3.0, 2.0 / 3.0) * psi(1.5)).epsilon(1e-12));
    CHECK_THROWS_AS(sobolev_nu(make_power_log(1, 3, 1, 1), 3, 3), RejectedInput);
  }

  TEST_CASE("young_fenchel") {
    const auto W = ConvexWeight::power(0.5, 2.0);
    CHECK(young_fenchel(W, 4.0) == Approx(8.0).epsilon(1e-9));
    CHECK(young_fenchel(W, 1.0) == Approx(0.0).epsilon(1e-9));
    const auto psi = young_fenchel_psi(W, ExponentInterval(1, 10));
    CHECK(psi(4.0) == Approx(std::exp(2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(young_fenchel(ConvexWeight::power(1.0, 0.5), 2.0), UnboundedObjective);
  }

  TEST_CASE("infimum dominance over feasible points") {
    const auto f = make_power_log(1.5, 5, 0.7, 0.3), g = make_power_log(2, 4, 0.2, 0.9);
    const auto m = mult_inf(f, g);
    const double r = 0.5 * (m.domain().a() + m.domain().b());
    const auto win = mult_inf_window(f.domain(), g.domain(), r);
    for (int i = 1; i < 50; ++i) {
      const double p = win.p_lo + (win.p_hi - win.p_lo) * i / 50.0;
      CHECK(m(r) <= f(p * r) * g(p / (p - 1) * r) * (1 + 1e-12));
    }
  }

  TEST_CASE("product is commutative and associative") {
    const auto f = make_power_log(1, 3, 1, 0.2), g = make_power_log(1.2, 4, 0.4, 1);
    const auto h = make_power_log(1.1, 3.5, 0.3, 0.3);
    for (double p = 1.3; p < 2.9; p += 0.1) {
      CHECK(product(f, g)(p) == Approx(product(g, f)(p)).epsilon(1e-12));
      CHECK(product(product(f, g), h)(p) == Approx(product(f, product(g, h))(p)).epsilon(1e-12));
    }
  }

  TEST_CASE("tabulated interpolation reproduces smooth functions") {
    const ExponentInterval dom(1, 3);
    const auto fn = [](double p) { return 1.0 / ((p - 1) * (3 - p)); };
    const auto t = tabulate(fn, dom);
    for (double p : {1.001, 1.5, 2.0, 2.9, 2.9999})
      CHECK(t(p) == Approx(fn(p)).epsilon(1e-6));
  }

  TEST_CASE("log-convexity check") {
    CHECK(check_log_convexity(make_power_log(1, 3, 1, 1)).log_convex);
    const auto bumpy = tabulate([](double p) { return 2.0 + std::sin(8 * p); }, ExponentInterval(1, 3));
    CHECK_FALSE(check_log_convexity(bumpy).log_convex);
  }

  TEST_CASE("JSON round trip") {
    const auto base = make_power_log(1, 3, 0.5, 1, SlowlyVarying::log_power(0.5));
    const auto other = make_power_log(1.2, 2.8, 1, 0.5, SlowlyVarying::iterated_log(1));
    const std::vector<PsiFunction> forms = {
        base,
        product(base, other),
        power_scale(base, 1.5),
        mult_inf(base, other),
        conv_inf(make_power_log(1, 1.5, 1, 1), make_power_log(1, 1.8, 0.5, 1)),
        sobolev_nu(make_power_log(1, 2, 1, 1), 3, 3),
        young_fenchel_psi(ConvexWeight::exponential(1.0, 0.5), ExponentInterval(1, 6)),
        tabulate([](double p) { return p * p; }, ExponentInterval(1, 2)),
    };
    for (const auto& psi : forms) {
      const auto back = psi_from_json(nlohmann::json::parse(psi.to_json().dump()));
      CHECK(back.form() == psi.form());
      CHECK(back.domain() == psi.domain());
      const double a = psi.domain().a(), b = psi.domain().b();
      for (double t : {0.2, 0.5, 0.8}) {
        const double p = a + t * (b - a);
        CHECK(back(p) == Approx(psi(p)).epsilon(1e-12));
      }
    }
  }
}
