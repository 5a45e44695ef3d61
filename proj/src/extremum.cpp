#include "grandlp/extremum.hpp"

#include <cmath>
#include <limits>

#include "grandlp/errors.hpp"

namespace grandlp {

namespace {
constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
}

Extremum golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol, int max_iter) {
  if (!(lo <= hi)) throw RejectedInput("golden_minimize: empty bracket");
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= rel_tol * (std::abs(a) + std::abs(b)) + 1e-300) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  // The endpoints are legitimate candidates: the minimum may sit on the edge.
  Extremum best{c, fc};
  if (fd < best.value) best = {d, fd};
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe < best.value) best = {edge, fe};
  }
  return best;
}

Extremum golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol, int max_iter) {
  auto r = golden_minimize([&](double x) { return -f(x); }, lo, hi, rel_tol, max_iter);
  return {r.x, -r.value};
}

Extremum scan_refine_minimize(const std::function<double(double)>& f,
                              const std::vector<double>& nodes, int* best_index,
                              double rel_tol) {
  if (nodes.empty()) throw RejectedInput("scan_refine_minimize: no nodes");
  std::vector<double> values(nodes.size());
  int k = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    values[i] = f(nodes[i]);
    if (values[i] < values[k]) k = static_cast<int>(i);
  }
  if (best_index) *best_index = k;
  if (nodes.size() == 1) return {nodes[0], values[0]};
  const int last = static_cast<int>(nodes.size()) - 1;
  const double lo = nodes[k == 0 ? 0 : k - 1];
  const double hi = nodes[k == last ? last : k + 1];
  auto refined = golden_minimize(f, lo, hi, rel_tol);
  if (refined.value <= values[k]) return refined;
  return {nodes[k], values[k]};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> geomspace(double lo, double hi, int n) {
  if (!(lo > 0 && hi > 0)) throw RejectedInput("geomspace: bounds must be positive");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace grandlp
