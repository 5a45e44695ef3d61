#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grandlp/gnorm.hpp"

namespace grandlp {

/// 1/p + 1/q = 1 + 1/r with conjugates s, t, z; infinite members allowed.
struct YoungTriple {
  double p, q, r, s, t, z;
  static YoungTriple from_pq(double p, double q);
};

/// Sharp (Beckner) constant [p^(1/p) s^(-1/s) q^(1/q) t^(-1/t) r^(-1/r) z^(1/z)]^(n/2),
/// with x^(1/x) -> 1 as x -> inf.
double young_constant(double p, double q, int n);

/// The constant with the r and z factors the other way round,
/// [p^(1/p) s^(-1/s) q^(1/q) t^(-1/t) r^(1/r) z^(-1/z)]^(n/2). It agrees with
/// young_constant at r = 2 and exceeds 1 elsewhere (e.g. p -> 1, q near 5.8).
double young_constant_as_displayed(double p, double q, int n);

struct InequalityReport {
  std::string theorem;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  nlohmann::json grid = nlohmann::json::object();
  std::optional<double> empirical_constant;
};

void to_json(nlohmann::json& j, const InequalityReport& r);

/// sup_p |f|_p |g|_p / (psi1 psi2)(p) against ||f|| ||g||.
InequalityReport tensor_check(const RadialFunction& f, const WeightedSpace& X1,
                              const PsiFunction& psi1, const RadialFunction& g,
                              const WeightedSpace& X2, const PsiFunction& psi2);

/// |f (x) g|_p on X1 x X2 by nested quadrature, without factorising.
double tensor_lp_direct(const RadialFunction& f, const WeightedSpace& X1, const RadialFunction& g,
                        const WeightedSpace& X2, double p);

/// ||f g||_G(mult_inf(psi1, psi2)) against ||f|| ||g||, plus the Hoelder step
/// |f g|_r <= |f|_pr |g|_qr on a grid.
InequalityReport product_check(const RadialFunction& f, const PsiFunction& psi1,
                               const RadialFunction& g, const PsiFunction& psi2,
                               const WeightedSpace& X);

/// Memoised one-sided convolutions; lookups are safe from several threads.
class ConvolutionCache {
 public:
  std::shared_ptr<const RadialFunction> get(const RadialFunction& f, const RadialFunction& g);

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const RadialFunction>> cache_;
};

/// ||f * g||_G(conv_inf(psi1, psi2)) on the half line against ||f|| ||g||,
/// plus the Young step |f*g|_r <= C(p,q) |f|_p |g|_q on a grid.
InequalityReport convolution_check(const RadialFunction& f, const PsiFunction& psi1,
                                   const RadialFunction& g, const PsiFunction& psi2,
                                   ConvolutionCache* cache = nullptr);

struct SobolevConfig {
  int n = 3;
  int m = 3;
};

/// ||Bu||_G(nu) on R^m against || |grad u| ||_G(psi) on R^n; Bu keeps the
/// radial profile of u. The ratio is the empirical constant.
InequalityReport sobolev_check(const RadialFunction& u, const PsiFunction& psi,
                               const SobolevConfig& cfg);

/// max over a q-grid of |Bu|_q / (q^(1-1/n) | |grad u| |_p), p = q n/(q + m).
InequalityReport sobolev_lp_step(const RadialFunction& u, const PsiFunction& psi,
                                 const SobolevConfig& cfg, int points = 32);

/// T_eps u(r) = u(eps + r).
RadialFunction shift(const RadialFunction& u, double eps);

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// |u|_p on the circle (0, period] for a profile given on (0, period).
double periodic_lp(const RadialFunction& u, double p, double period = kTwoPi);

/// |T_eps u - T_delta u|_p on the circle, with wrap-around shifts.
double periodic_shift_diff_lp(const RadialFunction& u, double eps, double delta, double p,
                              double period = kTwoPi);

struct ShiftGapRound {
  int K = 0;
  double min_gap = 0.0;
  double eps = 0.0;  // minimising pair
  double delta = 0.0;
};

/// min over pairs eps != delta of ||T_eps u - T_delta u||_G(psi) on the circle.
ShiftGapRound min_shift_gap(const RadialFunction& u, const PsiFunction& psi,
                            const std::vector<double>& eps_grid, double period = kTwoPi);

/// The same after checking u is outside G^0 (Inapplicable otherwise).
double noncompact_gap(const RadialFunction& u, const PsiFunction& psi,
                      const std::vector<double>& eps_grid, double period = kTwoPi);

/// {eps0 k / K : k = 1..K-1}.
std::vector<double> shift_grid(double eps0, int K);

}  // namespace grandlp
