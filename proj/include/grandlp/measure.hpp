#pragma once

#include <string>
#include <vector>

#include "grandlp/radial.hpp"

namespace grandlp {

enum class LpMethod { exact_gamma, quadrature };

std::string to_string(LpMethod m);

struct LpResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  LpMethod method = LpMethod::quadrature;
};

/// Throws DivergenceError when |f|_p is infinite, judged from the piece
/// exponents (or the closure tail models) without integrating.
void check_finite(const RadialFunction& f, const WeightedSpace& X, double p);

/// Whether lp_norm_exact_gamma accepts the piece.
bool exact_gamma_applies(const Piece& piece);

/// int_0^inf r^(n+sigma-1) |piece(r)|^p dr in closed form. For a pure piece
/// c (r/s)^e |log(r/s)|^alpha this is |c|^p s^d Gamma(alpha p + 1) / |p e + d|^(alpha p + 1)
/// with d = n + sigma; unshifted interval pieces without logs are also exact.
/// The surface factor Omega(n) is not included.
double lp_norm_exact_gamma(const Piece& piece, const WeightedSpace& X, double p);

/// |f|_p via quadrature in t = log r, whatever the piece structure.
LpResult lp_norm_quadrature(const RadialFunction& f, const WeightedSpace& X, double p);

/// |f|_p. Pieces with pairwise disjoint supports are handled one at a time,
/// exactly where possible; overlapping pieces and closures go to quadrature.
LpResult lp_norm(const RadialFunction& f, const WeightedSpace& X, double p);

/// (f * g)(t) = int_0^t f(y) g(t - y) dy for functions supported on (0, inf).
double convolve_at(const RadialFunction& f, const RadialFunction& g, double t);

/// Offsets log-spaced over [1e-8, S - s0] (2048 points) plus 256 uniform
/// points, shifted by s0 = lower support edge of f * g. With infinite
/// support the offsets run to 1e8.
std::vector<double> default_convolution_grid(const RadialFunction& f, const RadialFunction& g);

/// f * g sampled on `grid` (default grid when empty), as a numeric closure.
RadialFunction convolve1d(const RadialFunction& f, const RadialFunction& g,
                          std::vector<double> grid = {});

/// u'(r) in closed form. When the derivative pieces have disjoint supports
/// their coefficients are made nonnegative, so the result is |u'| pointwise;
/// otherwise it is the signed derivative, whose modulus is what every norm sees.
RadialFunction gradient_modulus(const RadialFunction& u, const WeightedSpace& X);

}  // namespace grandlp
