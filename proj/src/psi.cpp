#include "grandlp/psi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grandlp/errors.hpp"
#include "grandlp/extremum.hpp"

namespace grandlp {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string describe(const ExponentInterval& d) {
  return "(" + fmt(d.a()) + ", " + fmt(d.b()) + ")";
}

json endpoint_json(double b) { return std::isfinite(b) ? json(b) : json(nullptr); }

// Distance kept between an inner argument and the endpoint it must avoid.
double arg_inset(double endpoint) { return 2e-9 + 4e-16 * std::abs(endpoint); }

void check_admits(const ExponentInterval& d, double p) {
  if (!d.admits(p)) {
    throw DomainError("exponent " + fmt(p) + " is outside " + describe(d) +
                      " or within 1e-9 of an endpoint");
  }
}

// ---------------------------------------------------------------------------

class PowerLogNode final : public PsiFunction::Node {
 public:
  PowerLogNode(double A, double B, double gamma, double delta, SlowlyVarying L)
      : Node(ExponentInterval(A, B)), A_(A), B_(B), gamma_(gamma), delta_(delta), L_(L) {}

  PsiForm form() const override { return PsiForm::power_log; }

  double log_eval(double p) const override {
    const double lower = p - A_;
    const double upper = B_ - p;
    const double slow = std::max(L_(A_ / lower), L_(B_ / upper));
    return -gamma_ * std::log(lower) - delta_ * std::log(upper) + std::log(slow);
  }

  json to_json() const override {
    return {{"form", "power_log"}, {"A", A_},         {"B", B_},
            {"gamma", gamma_},     {"delta", delta_}, {"L", L_}};
  }

 private:
  double A_, B_, gamma_, delta_;
  SlowlyVarying L_;
};

class ProductNode final : public PsiFunction::Node {
 public:
  ProductNode(ExponentInterval dom, PsiFunction lhs, PsiFunction rhs)
      : Node(dom), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

  PsiForm form() const override { return PsiForm::product; }
  double log_eval(double p) const override { return lhs_.log_eval(p) + rhs_.log_eval(p); }
  std::vector<PsiFunction> children() const override { return {lhs_, rhs_}; }
  json to_json() const override {
    return {{"form", "product"}, {"lhs", lhs_.to_json()}, {"rhs", rhs_.to_json()}};
  }

 private:
  PsiFunction lhs_, rhs_;
};

class PowerScaleNode final : public PsiFunction::Node {
 public:
  PowerScaleNode(PsiFunction psi, double gamma)
      : Node(ExponentInterval(psi.domain().a() / gamma, psi.domain().b() / gamma)),
        psi_(std::move(psi)),
        gamma_(gamma) {}

  PsiForm form() const override { return PsiForm::power_scale; }
  double log_eval(double p) const override {
    if (gamma_ == 1.0) return psi_.log_eval(p);
    return gamma_ * psi_.log_eval(gamma_ * p);
  }
  std::vector<PsiFunction> children() const override { return {psi_}; }
  json to_json() const override {
    return {{"form", "power_scale"}, {"psi", psi_.to_json()}, {"gamma", gamma_}};
  }

 private:
  PsiFunction psi_;
  double gamma_;
};

class MultInfNode final : public PsiFunction::Node {
 public:
  MultInfNode(PsiFunction lhs, PsiFunction rhs)
      : Node(mult_inf_domain(lhs.domain(), rhs.domain())),
        lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  PsiForm form() const override { return PsiForm::mult_inf; }
  double log_eval(double r) const override {
    return std::log(mult_inf_detail(lhs_, rhs_, r).value);
  }
  std::vector<PsiFunction> children() const override { return {lhs_, rhs_}; }
  json to_json() const override {
    return {{"form", "mult_inf"}, {"lhs", lhs_.to_json()}, {"rhs", rhs_.to_json()}};
  }

 private:
  PsiFunction lhs_, rhs_;
};

class ConvInfNode final : public PsiFunction::Node {
 public:
  ConvInfNode(PsiFunction lhs, PsiFunction rhs)
      : Node(conv_inf_domain(lhs.domain(), rhs.domain())),
        lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  PsiForm form() const override { return PsiForm::conv_inf; }
  double log_eval(double r) const override {
    return std::log(conv_inf_detail(lhs_, rhs_, r).value);
  }
  std::vector<PsiFunction> children() const override { return {lhs_, rhs_}; }
  json to_json() const override {
    return {{"form", "conv_inf"}, {"lhs", lhs_.to_json()}, {"rhs", rhs_.to_json()}};
  }

 private:
  PsiFunction lhs_, rhs_;
};

class SobolevNuNode final : public PsiFunction::Node {
 public:
  SobolevNuNode(PsiFunction psi, int n, int m)
      : Node(sobolev_domain(psi.domain(), n, m)), psi_(std::move(psi)), n_(n), m_(m) {}

  PsiForm form() const override { return PsiForm::sobolev_nu; }
  double log_eval(double q) const override {
    const double inner = q * n_ / (q + m_);
    return (1.0 - 1.0 / n_) * std::log(q) + psi_.log_eval(inner);
  }
  std::vector<PsiFunction> children() const override { return {psi_}; }
  json to_json() const override {
    return {{"form", "sobolev_nu"}, {"psi", psi_.to_json()}, {"n", n_}, {"m", m_}};
  }

 private:
  PsiFunction psi_;
  int n_, m_;
};

class YoungFenchelNode final : public PsiFunction::Node {
 public:
  YoungFenchelNode(ConvexWeight W, ExponentInterval dom) : Node(dom), W_(std::move(W)) {}

  PsiForm form() const override { return PsiForm::young_fenchel; }
  double log_eval(double p) const override { return young_fenchel(W_, p) / p; }
  json to_json() const override {
    if (!W_.spec()) throw UnsupportedInput("custom convex weight cannot be serialised");
    return {{"form", "young_fenchel"},
            {"W", *W_.spec()},
            {"a", domain.a()},
            {"b", endpoint_json(domain.b())}};
  }

 private:
  ConvexWeight W_;
};

// Endpoint-stretched coordinate used by the tables.
double to_xi(const ExponentInterval& d, double p) {
  if (!d.bounded()) return std::log(p - d.a());
  return std::log(p - d.a()) - std::log(d.b() - p);
}

double from_xi(const ExponentInterval& d, double xi) {
  if (!d.bounded()) return d.a() + std::exp(xi);
  const double w = d.b() - d.a();
  if (xi < 0) {
    const double e = std::exp(xi);
    return d.a() + w * e / (1.0 + e);
  }
  const double e = std::exp(-xi);
  return d.b() - w * e / (1.0 + e);
}

// dp/dxi at p.
double dp_dxi(const ExponentInterval& d, double p) {
  if (!d.bounded()) return p - d.a();
  return (p - d.a()) * (d.b() - p) / (d.b() - d.a());
}

class TabulatedNode final : public PsiFunction::Node {
 public:
  TabulatedNode(ExponentInterval dom, std::vector<double> p, std::vector<double> values,
                std::vector<double> log_slopes)
      : Node(dom), p_(std::move(p)), values_(std::move(values)) {
    const std::size_t n = p_.size();
    if (n < 2 || values_.size() != n) {
      throw RejectedInput("tabulated psi needs at least two nodes and matching values");
    }
    if (!log_slopes.empty() && log_slopes.size() != n) {
      throw RejectedInput("tabulated psi: log_slopes size mismatch");
    }
    xi_.resize(n);
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!dom.contains(p_[i])) throw RejectedInput("tabulated node outside the domain");
      if (!(values_[i] > 0) || !std::isfinite(values_[i])) {
        throw RejectedInput("tabulated psi values must be positive and finite");
      }
      if (i > 0 && !(p_[i] > p_[i - 1])) {
        throw RejectedInput("tabulated nodes must be strictly increasing");
      }
      xi_[i] = to_xi(dom, p_[i]);
      y_[i] = std::log(values_[i]);
    }
    d_.resize(n);
    if (!log_slopes.empty()) {
      for (std::size_t i = 0; i < n; ++i) d_[i] = log_slopes[i] * dp_dxi(dom, p_[i]);
    } else if (n == 2) {
      d_[0] = d_[1] = (y_[1] - y_[0]) / (xi_[1] - xi_[0]);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = (i == 0) ? 0 : (i == n - 1 ? n - 3 : i - 1);
        const double h0 = xi_[l + 1] - xi_[l];
        const double h1 = xi_[l + 2] - xi_[l + 1];
        const double s0 = (y_[l + 1] - y_[l]) / h0;
        const double s1 = (y_[l + 2] - y_[l + 1]) / h1;
        if (i == 0) {
          d_[i] = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        } else if (i == n - 1) {
          d_[i] = ((2 * h1 + h0) * s1 - h1 * s0) / (h0 + h1);
        } else {
          d_[i] = (h1 * s0 + h0 * s1) / (h0 + h1);
        }
      }
    }
    log_slopes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) log_slopes_[i] = d_[i] / dp_dxi(dom, p_[i]);
  }

  PsiForm form() const override { return PsiForm::tabulated; }

  double log_eval(double p) const override {
    const double x = to_xi(domain, p);
    if (x <= xi_.front()) return y_.front() + d_.front() * (x - xi_.front());
    if (x >= xi_.back()) return y_.back() + d_.back() * (x - xi_.back());
    const auto it = std::upper_bound(xi_.begin(), xi_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xi_.begin()) - 1;
    const double h = xi_[i + 1] - xi_[i];
    const double t = (x - xi_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
  }

  json to_json() const override {
    return {{"form", "tabulated"}, {"a", domain.a()},     {"b", endpoint_json(domain.b())},
            {"p", p_},             {"values", values_},   {"log_slopes", log_slopes_}};
  }

 private:
  std::vector<double> p_, values_, log_slopes_;
  std::vector<double> xi_, y_, d_;
};

// Shared infimum driver: minimise log-objective over p in the window.
InfimumResult minimise_on_window(const std::function<double(double)>& log_objective,
                                 const std::function<double(double)>& partner,
                                 FeasibleWindow window, const char* what) {
  const auto nodes = geomspace(window.p_lo, window.p_hi, 64);
  auto clamped = [&](double p) {
    return log_objective(std::clamp(p, window.p_lo, window.p_hi));
  };
  const auto best = scan_refine_minimize(clamped, nodes, nullptr, 1e-13);
  if (!std::isfinite(best.value)) {
    throw NonConvergence(std::string(what) + ": minimiser did not converge on bracket [" +
                         fmt(window.p_lo) + ", " + fmt(window.p_hi) + "]");
  }
  InfimumResult out;
  out.value = std::exp(best.value);
  out.p = std::clamp(best.x, window.p_lo, window.p_hi);
  out.q = partner(out.p);
  out.window = window;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ExponentInterval::ExponentInterval(double a, double b) : a_(a), b_(b) {
  if (!(a > 0) || !std::isfinite(a) || !(b > a) || std::isnan(b)) {
    throw RejectedInput("invalid exponent interval (" + fmt(a) + ", " + fmt(b) +
                        "): need 0 < a < b");
  }
}

std::optional<ExponentInterval> ExponentInterval::intersect(const ExponentInterval& x,
                                                            const ExponentInterval& y) {
  const double a = std::max(x.a(), y.a());
  const double b = std::min(x.b(), y.b());
  if (!(b > a)) return std::nullopt;
  return ExponentInterval(a, b);
}

ConvexWeight ConvexWeight::power(double coef, double exponent) {
  if (!(coef > 0) || !(exponent > 0)) {
    throw RejectedInput("power weight needs positive coef and exponent");
  }
  ConvexWeight w;
  w.w_ = [coef, exponent](double z) { return coef * std::pow(z, exponent); };
  w.strictly_convex_ = exponent > 1;
  w.spec_ = json{{"kind", "power"}, {"coef", coef}, {"exponent", exponent}};
  return w;
}

ConvexWeight ConvexWeight::exponential(double coef, double rate) {
  if (!(coef > 0) || !(rate > 0)) {
    throw RejectedInput("exponential weight needs positive coef and rate");
  }
  ConvexWeight w;
  w.w_ = [coef, rate](double z) { return coef * std::exp(rate * z); };
  w.strictly_convex_ = true;
  w.spec_ = json{{"kind", "exp"}, {"coef", coef}, {"rate", rate}};
  return w;
}

ConvexWeight ConvexWeight::custom(std::function<double(double)> f, bool strictly_convex) {
  ConvexWeight w;
  w.w_ = std::move(f);
  w.strictly_convex_ = strictly_convex;
  return w;
}

bool ConvexWeight::shape_ok(double z_hi, int points) const {
  const auto z = linspace(2.0, z_hi, points);
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (!(w_(z[i]) > w_(z[i - 1]))) return false;
    if (i + 1 < z.size()) {
      const double mid = w_(z[i]);
      const double chord = 0.5 * (w_(z[i - 1]) + w_(z[i + 1]));
      if (mid > chord * (1 + 1e-14)) return false;
    }
  }
  return true;
}

double young_fenchel(const ConvexWeight& W, double p) {
  if (!(p > 0)) throw RejectedInput("young_fenchel: p must be positive");
  auto objective = [&](double z) { return p * z - W(z); };
  const double at_boundary = objective(2.0);
  // Concave objective that does not rise off z = 2 peaks at the boundary.
  if (objective(2.0 + 1e-7) <= at_boundary) return at_boundary;

  double prev = 2.0, cur = 3.0;
  double f_cur = objective(cur);
  for (int k = 1;; ++k) {
    const double next = 2.0 + std::ldexp(1.0, k);
    const double f_next = objective(next);
    if (!std::isfinite(f_next) || k > 200) {
      throw UnboundedObjective("young_fenchel: p z - W(z) is unbounded above (W sublinear?)");
    }
    if (f_next < f_cur) {
      const auto best = golden_maximize(objective, prev, next, 1e-14);
      return std::max(best.value, at_boundary);
    }
    prev = cur;
    cur = next;
    f_cur = f_next;
  }
}

std::string to_string(PsiForm form) {
  switch (form) {
    case PsiForm::power_log: return "power_log";
    case PsiForm::product: return "product";
    case PsiForm::power_scale: return "power_scale";
    case PsiForm::mult_inf: return "mult_inf";
    case PsiForm::conv_inf: return "conv_inf";
    case PsiForm::sobolev_nu: return "sobolev_nu";
    case PsiForm::young_fenchel: return "young_fenchel";
    case PsiForm::tabulated: return "tabulated";
  }
  return "unknown";
}

const ExponentInterval& PsiFunction::domain() const { return node_->domain; }
PsiForm PsiFunction::form() const { return node_->form(); }
std::vector<PsiFunction> PsiFunction::children() const { return node_->children(); }
json PsiFunction::to_json() const { return node_->to_json(); }

double PsiFunction::log_eval(double p) const {
  check_admits(node_->domain, p);
  return node_->log_eval(p);
}

double PsiFunction::operator()(double p) const { return std::exp(log_eval(p)); }

PsiFunction make_power_log(double A, double B, double gamma, double delta, SlowlyVarying L) {
  if (!(A >= 1) || !(B > A) || !std::isfinite(B)) {
    throw RejectedInput("power_log: need 1 <= A < B < infinity, got A=" + fmt(A) +
                        " B=" + fmt(B));
  }
  if (!(gamma >= 0) || !(delta >= 0) || (gamma == 0 && delta == 0)) {
    throw RejectedInput("power_log: gamma, delta must be >= 0 and not both zero");
  }
  return PsiFunction(std::make_shared<PowerLogNode>(A, B, gamma, delta, L));
}

PsiFunction product(const PsiFunction& lhs, const PsiFunction& rhs) {
  const auto dom = ExponentInterval::intersect(lhs.domain(), rhs.domain());
  if (!dom) {
    throw RejectedInput("product: domains " + describe(lhs.domain()) + " and " +
                        describe(rhs.domain()) + " do not intersect");
  }
  return PsiFunction(std::make_shared<ProductNode>(*dom, lhs, rhs));
}

PsiFunction power_scale(const PsiFunction& psi, double gamma) {
  const auto& d = psi.domain();
  if (!(gamma >= d.a() && gamma <= d.b())) {
    throw RejectedInput("power_scale: gamma=" + fmt(gamma) + " outside [" + fmt(d.a()) + ", " +
                        fmt(d.b()) + "]");
  }
  return PsiFunction(std::make_shared<PowerScaleNode>(psi, gamma));
}

ExponentInterval mult_inf_domain(const ExponentInterval& d1, const ExponentInterval& d2) {
  const double a1 = d1.a(), a2 = d2.a(), b1 = d1.b(), b2 = d2.b();
  const double lo = std::max(1.0, a1 * a2 / (a1 + a2));
  double hi;
  if (std::isinf(b1) && std::isinf(b2)) {
    hi = kInfinity;
  } else if (std::isinf(b1)) {
    hi = b2;
  } else if (std::isinf(b2)) {
    hi = b1;
  } else {
    hi = b1 * b2 / (b1 + b2);
  }
  if (!(hi > lo)) {
    throw RejectedInput("mult_inf: A1=" + fmt(lo) + " >= B1=" + fmt(hi));
  }
  return ExponentInterval(lo, hi);
}

ExponentInterval conv_inf_domain(const ExponentInterval& d1, const ExponentInterval& d2) {
  const double a1 = d1.a(), a2 = d2.a(), b1 = d1.b(), b2 = d2.b();
  if (!(1 / a1 + 1 / a2 > 1)) {
    throw RejectedInput("conv_inf: Young condition 1/a1 + 1/a2 > 1 violated");
  }
  if (!(1 / b1 + 1 / b2 > 1)) {
    throw RejectedInput("conv_inf: Young condition 1/b1 + 1/b2 > 1 violated (B3 <= 0)");
  }
  const double lo = 1.0 / (1 / a1 + 1 / a2 - 1);
  const double hi = 1.0 / (1 / b1 + 1 / b2 - 1);
  if (!(hi > lo)) throw RejectedInput("conv_inf: A3=" + fmt(lo) + " >= B3=" + fmt(hi));
  return ExponentInterval(lo, hi);
}

ExponentInterval sobolev_domain(const ExponentInterval& d, int n, int m) {
  const double a = d.a(), b = d.b();
  if (!(a >= 1)) throw RejectedInput("sobolev_nu: need a >= 1");
  if (!(b < n)) {
    throw RejectedInput("sobolev_nu: need b < n (b=" + fmt(b) + ", n=" + std::to_string(n) +
                        "); the case b = n is not supported");
  }
  if (m < 1 || m > n) throw RejectedInput("sobolev_nu: need 1 <= m <= n");
  const double lo = std::max(1.0, a * m / (n - a));
  const double hi = b * m / (n - b);
  if (!(hi > lo)) throw RejectedInput("sobolev_nu: A2 >= B2");
  return ExponentInterval(lo, hi);
}

FeasibleWindow mult_inf_window(const ExponentInterval& d1, const ExponentInterval& d2, double r) {
  // u = 1/p; the partner is q = 1/(1-u).
  const double a1 = d1.a(), b1 = d1.b(), a2 = d2.a(), b2 = d2.b();
  double u_lo = 1e-6, u_hi = 1.0 - 1e-12;
  u_hi = std::min(u_hi, r / (a1 + arg_inset(a1)));
  if (std::isfinite(b1)) u_lo = std::max(u_lo, r / (b1 - arg_inset(b1)));
  u_lo = std::max(u_lo, 1.0 - r / (a2 + arg_inset(a2)));
  if (std::isfinite(b2)) u_hi = std::min(u_hi, 1.0 - r / (b2 - arg_inset(b2)));
  if (!(u_hi > u_lo)) {
    throw EmptyWindow("mult_inf: empty feasibility window at r=" + fmt(r) + " for domains " +
                      describe(d1) + ", " + describe(d2));
  }
  return {1.0 / u_hi, 1.0 / u_lo};
}

FeasibleWindow conv_inf_window(const ExponentInterval& d1, const ExponentInterval& d2, double r) {
  // u = 1/p, v = 1/q = 1 + 1/r - u.
  const double a1 = d1.a(), b1 = d1.b(), a2 = d2.a(), b2 = d2.b();
  const double c = 1.0 + 1.0 / r;
  double u_lo = 1.0 / r + 1e-12, u_hi = 1.0 - 1e-12;
  u_hi = std::min(u_hi, 1.0 / (a1 + arg_inset(a1)));
  if (std::isfinite(b1)) u_lo = std::max(u_lo, 1.0 / (b1 - arg_inset(b1)));
  u_lo = std::max(u_lo, c - 1.0 / (a2 + arg_inset(a2)));
  if (std::isfinite(b2)) u_hi = std::min(u_hi, c - 1.0 / (b2 - arg_inset(b2)));
  if (!(u_hi > u_lo)) {
    throw EmptyWindow("conv_inf: empty feasibility window at r=" + fmt(r) + " for domains " +
                      describe(d1) + ", " + describe(d2));
  }
  return {1.0 / u_hi, 1.0 / u_lo};
}

InfimumResult mult_inf_detail(const PsiFunction& lhs, const PsiFunction& rhs, double r) {
  const auto window = mult_inf_window(lhs.domain(), rhs.domain(), r);
  auto partner = [](double p) { return 1.0 / (1.0 - 1.0 / p); };
  auto objective = [&](double p) {
    return lhs.log_eval(p * r) + rhs.log_eval(partner(p) * r);
  };
  return minimise_on_window(objective, partner, window, "mult_inf");
}

InfimumResult conv_inf_detail(const PsiFunction& lhs, const PsiFunction& rhs, double r) {
  const auto window = conv_inf_window(lhs.domain(), rhs.domain(), r);
  auto partner = [r](double p) { return 1.0 / (1.0 + 1.0 / r - 1.0 / p); };
  auto objective = [&](double p) { return lhs.log_eval(p) + rhs.log_eval(partner(p)); };
  return minimise_on_window(objective, partner, window, "conv_inf");
}

PsiFunction mult_inf(const PsiFunction& lhs, const PsiFunction& rhs) {
  return PsiFunction(std::make_shared<MultInfNode>(lhs, rhs));
}

PsiFunction conv_inf(const PsiFunction& lhs, const PsiFunction& rhs) {
  return PsiFunction(std::make_shared<ConvInfNode>(lhs, rhs));
}

PsiFunction sobolev_nu(const PsiFunction& psi, int n, int m) {
  auto node = std::make_shared<SobolevNuNode>(psi, n, m);
  // The Moebius map q -> qn/(q+m) must land inside (a, b) on the whole domain.
  const auto& dom = node->domain;
  const double a = psi.domain().a(), b = psi.domain().b();
  const double lo = dom.a() * n / (dom.a() + m);
  const double hi = dom.b() * n / (dom.b() + m);
  if (lo < a * (1 - 1e-12) || hi > b * (1 + 1e-12)) {
    throw RejectedInput("sobolev_nu: inner exponent map leaves (a, b)");
  }
  return PsiFunction(node);
}

PsiFunction young_fenchel_psi(const ConvexWeight& W, ExponentInterval dom) {
  return PsiFunction(std::make_shared<YoungFenchelNode>(W, dom));
}

PsiFunction tabulated(ExponentInterval dom, std::vector<double> p, std::vector<double> values,
                      std::vector<double> log_slopes) {
  return PsiFunction(std::make_shared<TabulatedNode>(dom, std::move(p), std::move(values),
                                                     std::move(log_slopes)));
}

PsiFunction tabulate(const std::function<double(double)>& fn, ExponentInterval dom, int nodes,
                     double xi_span) {
  if (nodes < 2) throw RejectedInput("tabulate: need at least two nodes");
  const double xi_hi = dom.bounded() ? xi_span : xi_span / 3.0;
  const auto xs = linspace(-xi_span, xi_hi, nodes);
  const double h = 1e-4;
  std::vector<double> ps, vals, slopes;
  ps.reserve(nodes);
  vals.reserve(nodes);
  slopes.reserve(nodes);
  for (double x : xs) {
    const double p = from_xi(dom, x);
    if (!ps.empty() && !(p > ps.back())) continue;
    const double v = fn(p);
    const double ym = std::log(fn(from_xi(dom, x - h)));
    const double yp = std::log(fn(from_xi(dom, x + h)));
    const double dy_dxi = (yp - ym) / (2 * h);
    ps.push_back(p);
    vals.push_back(v);
    slopes.push_back(dy_dxi / dp_dxi(dom, p));
  }
  return tabulated(dom, std::move(ps), std::move(vals), std::move(slopes));
}

PsiFunction constant_psi(ExponentInterval dom, double c) {
  const double lo = from_xi(dom, -1.0), hi = from_xi(dom, 1.0);
  return tabulated(dom, {lo, hi}, {c, c}, {0.0, 0.0});
}

LogConvexityReport check_log_convexity(const PsiFunction& psi, int points) {
  const auto& d = psi.domain();
  const auto xs = linspace(-12.0, d.bounded() ? 12.0 : 4.0, points);
  std::vector<double> ps;
  for (double x : xs) {
    const double p = from_xi(d, x);
    if (d.admits(p)) ps.push_back(p);
  }
  LogConvexityReport rep;
  for (std::size_t i = 1; i + 1 < ps.size(); ++i) {
    const double l = ps[i - 1], r = ps[i + 1];
    const double mid = 0.5 * (l + r);
    const double excess = psi.log_eval(mid) - 0.5 * (psi.log_eval(l) + psi.log_eval(r));
    if (excess > 1e-10 * (1 + std::abs(psi.log_eval(mid)))) {
      ++rep.violations;
      rep.worst_defect = std::max(rep.worst_defect, excess);
    }
  }
  rep.log_convex = rep.violations == 0;
  return rep;
}

}  // namespace grandlp
