// Acceptance run: one PASS/FAIL line per criterion.
//
//   grandlp_acceptance [--seed N] [--expect-fail ID]...
//
// Exit status is 0 when every criterion passes, or fails only where listed
// with --expect-fail. Those lines still print FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grandlp/measure.hpp"
#include "grandlp/suite.hpp"

using namespace grandlp;
using nlohmann::json;

namespace {

// B(1/4, 1/4) from mpmath at 30 digits.
constexpr double kBetaQuarterQuarter = 7.41629870920548767373540138878;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const SuiteEntry& entry(const SuiteReport& r, std::size_t i) { return r.entries.at(i); }

bool errored(const SuiteEntry& e, std::string& why) {
  if (e.error_kind.empty()) return false;
  why = e.kind + " threw " + e.error_kind + ": " + e.error_message;
  return true;
}

// |f|_p^p of a pure inner/outer piece, written out independently of the library.
double gamma_closed_form(const json& piece, const json& space, double p) {
  const int n = space.at("n");
  const bool half = n == 0;
  const double d = half ? 1.0 : n + space.at("sigma").get<double>();
  const double area = half ? 1.0 : 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  const double c = std::abs(piece.at("coeff").get<double>());
  const double e = piece.at("power"), alpha = piece.at("logpow");
  const double k = std::abs(p * e + d);
  return area * std::pow(c, p) * std::tgamma(alpha * p + 1) / std::pow(k, alpha * p + 1);
}

json acceptance_config(std::uint64_t seed) {
  json checks = json::array();
  checks.push_back({{"kind", "dilation"}, {"a", 2}, {"b", 4}, {"kmax", 20}});           // 0
  checks.push_back({{"kind", "boyd"}, {"a", 2}, {"b", 4}});                             // 1
  checks.push_back({{"kind", "boyd"}, {"a", 1.5}, {"b", 3}});                           // 2
  checks.push_back({{"kind", "boyd"}, {"a", 1.2}, {"b", 6}});                           // 3
  checks.push_back({{"kind", "boyd"}, {"a", 2}, {"b", 4}, {"n", 2}, {"sigma", 0.5}});   // 4
  checks.push_back({{"kind", "phi"}, {"a", 1}, {"b", 2}, {"at", 1e-6}});                // 5
  checks.push_back({{"kind", "gamma_oracle"}, {"count", 10}, {"points", 50}});          // 6
  checks.push_back({{"kind", "young_constant"}, {"samples", 10000}, {"n", 1}});         // 7
  for (const char* k : {"lemma1", "th2", "th3", "th3_lp", "th5"})                       // 8..12
    checks.push_back({{"kind", k}, {"count", 20}});
  checks.push_back({{"kind", "convolution_sharpness"}, {"b1", 4.0 / 3}, {"b2", 4.0 / 3}, {"g1", 0}, {"g2", 0}});  // 13
  checks.push_back({{"kind", "convolution_sharpness_outer"}});                          // 14
  checks.push_back({{"kind", "sobolev_gap"}, {"a", 1}, {"b", 2}, {"n", 3}, {"m", 3}});   // 15
  checks.push_back({{"kind", "noncompact"}, {"rounds", {8, 16, 32}}});                  // 16
  return {{"seed", seed}, {"checks", checks}};
}

Line criterion_dilation(const SuiteReport& r) {
  const auto& e = entry(r, 0);
  std::string why;
  if (errored(e, why)) return {1, "dilation identity", false, why};
  double worst = 0;
  for (const auto& row : e.trace) {
    const double s = row.p_or_t;
    worst = std::max(worst, std::abs(row.value / std::max(std::pow(s, 0.5), std::pow(s, 0.25)) - 1));
  }
  return {1, "dilation identity", e.trace.size() == 41 && worst <= 0.01,
          "41 dilations s = 2^k, |k| <= 20: max rel err " + num(worst) + " (tol 0.01)"};
}

Line criterion_boyd(const SuiteReport& r) {
  std::string detail, why;
  bool ok = true;
  for (std::size_t i = 1; i <= 4; ++i) {
    const auto& e = entry(r, i);
    if (errored(e, why)) return {2, "Boyd indices", false, why};
    const double a = e.params.at("a"), b = e.params.at("b");
    const int n = e.params.at("n");
    const double d = n == 0 ? 1.0 : n + e.params.at("sigma").get<double>();
    const double g1 = e.result.at("numeric").at("gamma1"), g2 = e.result.at("numeric").at("gamma2");
    const double dev = std::max(std::abs(g1 - d / b), std::abs(g2 - d / a));
    ok = ok && dev <= 0.02;
    detail += (i > 1 ? "; " : "") + std::string("(") + num(a) + "," + num(b) + (n ? ",n=2,s=0.5" : "") +
              ") dev " + num(dev);
  }
  return {2, "Boyd indices", ok, detail + " (tol 0.02)"};
}

Line criterion_phi(const SuiteReport& r) {
  const auto& e = entry(r, 5);
  std::string why;
  if (errored(e, why)) return {3, "fundamental-function index", false, why};
  const double ratio = e.result.at("ratio"), want = std::pow(2.0, 1.0 / 2.0);
  const double rel = std::abs(ratio / want - 1);
  return {3, "fundamental-function index", rel <= 0.01,
          "phi(2e-6)/phi(1e-6) = " + num(ratio) + " vs 2^(1/2): rel " + num(rel) + " (tol 0.01)"};
}

Line criterion_gamma(const SuiteReport& r) {
  const auto& e = entry(r, 6);
  std::string why;
  if (errored(e, why)) return {4, "Gamma-oracle agreement", false, why};
  const auto& pieces = e.result.at("pieces");
  const int points = e.params.at("points");
  double worst = 0;
  std::size_t row = 0;
  for (const auto& pc : pieces) {
    for (int i = 0; i < points; ++i, ++row) {
      const auto& t = e.trace.at(row);
      const double oracle = std::pow(gamma_closed_form(pc.at("f").at("terms").at(0), pc.at("space"), t.p_or_t),
                                     1 / t.p_or_t);
      worst = std::max(worst, std::abs(t.value / oracle - 1));
    }
  }
  const bool ok = pieces.size() == 10 && row == e.trace.size() && worst <= 1e-7;
  return {4, "Gamma-oracle agreement", ok,
          std::to_string(pieces.size()) + " pieces x " + std::to_string(points) + " p: max rel err " + num(worst) +
              " (tol 1e-7)"};
}

Line criterion_battery(const SuiteReport& r) {
  bool ok = true;
  std::string detail, why;
  for (std::size_t i = 8; i <= 12; ++i) {
    const auto& e = entry(r, i);
    if (errored(e, why)) return {5, "inequality suite", false, why};
    const int count = e.result.at("count"), failures = e.result.at("failures");
    ok = ok && e.pass && count >= 20 && failures == 0;
    detail += e.kind + " " + std::to_string(count - failures) + "/" + std::to_string(count) + "; ";
  }
  const double rep = entry(r, 8).result.at("representation_ratio");
  ok = ok && std::abs(rep - 1) <= 1e-6;
  return {5, "inequality suite", ok, detail + "representation ratio " + num(rep) + " (tol 1e-6)"};
}

Line criterion_young(const SuiteReport& r) {
  const auto& e = entry(r, 7);
  std::string why;
  if (errored(e, why)) return {6, "Young constant", false, why};
  const double worst = e.result.at("max_constant"), c = e.result.at("c_4_3");
  const double want = 2 * std::pow(3.0, -0.75);
  const bool ok = worst <= 1.0 && std::abs(c - want) <= 1e-10;
  return {6, "Young constant", ok,
          "max C over 10^4 triples " + num(worst) + " (<= 1); |C(4/3,4/3) - 2*3^(-3/4)| = " +
              num(std::abs(c - want)) + " (tol 1e-10)"};
}

Line criterion_convolution(const SuiteReport& r) {
  const auto& e = entry(r, 13);
  std::string why;
  if (errored(e, why)) return {7, "convolution sharpness", false, why};
  const double tk = e.result.at("t_fit").at("exponent"), pk = e.result.at("p_fit").at("exponent");
  const double B3 = e.result.at("endpoint");
  const RadialFunction f({interval_piece(0, 1, -0.75)});
  const double t = 1e-6;
  const double beta_ratio = convolve_at(f, f, t) / (kBetaQuarterQuarter * std::pow(t, -0.5));
  const bool ok = std::abs(tk + 0.5) <= 0.05 && std::abs(pk + 0.5) <= 0.05 && std::abs(B3 - 2) <= 1e-12 &&
                  std::abs(beta_ratio - 1) <= 0.02;
  return {7, "convolution sharpness", ok,
          "t-exponent " + num(tk) + ", (B3-p)-exponent " + num(pk) + " (target -0.5 +- 0.05), B3 = " + num(B3) +
              ", h(1e-6)/(B(1/4,1/4) t^-1/2) = " + num(beta_ratio) + " (tol 0.02)"};
}

Line criterion_gaps(const SuiteReport& r) {
  std::string why;
  for (std::size_t i : {13, 14, 15})
    if (errored(entry(r, i), why)) return {8, "Sobolev and convolution gaps", false, why};
  const auto& inner = entry(r, 13).result;
  const auto& outer = entry(r, 14).result;
  const auto& sob = entry(r, 15).result;
  const double gl = sob.at("gap_lower"), gu = sob.at("gap_upper");
  const double ci = inner.at("gap"), co = outer.at("gap");
  const bool sob_ok = std::abs(gl - 1.0 / 3) <= 0.05 && std::abs(gu - 1.0 / 3) <= 0.05;
  const bool conv_ok = std::abs(ci - 1) <= 0.05 && std::abs(co - 1) <= 0.05;
  const bool ends = sob.at("finite_inside").get<bool>() && sob.at("divergent_outside").get<bool>() &&
                    inner.at("finite_inside").get<bool>() && inner.at("divergent_outside").get<bool>() &&
                    outer.at("finite_inside").get<bool>() && outer.at("divergent_outside").get<bool>();
  return {8, "Sobolev and convolution gaps", sob_ok && conv_ok && ends,
          "n=3 gaps " + num(gl) + ", " + num(gu) + " (1/3 +- 0.05); convolution gaps B3 " + num(ci) + ", A3 " +
              num(co) + " (1 +- 0.05); A2, B2, A3, B3 probes " + (ends ? "exact" : "NOT exact")};
}

Line criterion_noncompact(const SuiteReport& r) {
  const auto& e = entry(r, 16);
  std::string why;
  if (errored(e, why)) return {9, "non-compactness evidence", false, why};
  const double w = e.result.at("witness_min_over_first"), c = e.result.at("control_first_over_last");
  const bool ok = w >= 0.5 && c >= 10 && !e.result.at("witness_in_g0").get<bool>() &&
                  e.result.at("control_in_g0").get<bool>();
  return {9, "non-compactness evidence", ok,
          "witness min/first " + num(w) + " (>= 0.5); control shrink first/last " + num(c) + " (>= 10)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Line criterion_determinism(std::uint64_t seed) {
  json cfg = {{"seed", seed},
              {"checks",
               {{{"kind", "gamma_oracle"}},
                {{"kind", "young_constant"}, {"samples", 2000}},
                {{"kind", "lemma1"}, {"count", 20}},
                {{"kind", "th2"}, {"count", 20}},
                {{"kind", "th3_lp"}, {"count", 20}},
                {{"kind", "sobolev_gap"}}}}};
  const auto root = std::filesystem::temp_directory_path() / "grandlp_acceptance";
  std::filesystem::remove_all(root);
  write_suite_outputs(run_suite(cfg), root / "a");
  write_suite_outputs(run_suite(cfg), root / "b");
  const std::string a = slurp(root / "a" / "report.json"), b = slurp(root / "b" / "report.json");
  const bool ok = !a.empty() && a == b;
  return {10, "determinism", ok,
          "two runs of a 6-check randomised config: report.json " + std::to_string(a.size()) + " bytes, " +
              (ok ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 1;
  std::vector<int> expect_fail;
  app.add_option("--seed", seed, "suite seed");
  app.add_option("--expect-fail", expect_fail, "criterion known to be unattainable; still reported as FAIL");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());

  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport r = run_suite(acceptance_config(seed));
  std::vector<Line> lines = {criterion_dilation(r),  criterion_boyd(r),        criterion_phi(r),
                             criterion_gamma(r),     criterion_battery(r),     criterion_young(r),
                             criterion_convolution(r), criterion_gaps(r),      criterion_noncompact(r),
                             criterion_determinism(seed)};
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int unexpected = 0;
  for (const auto& l : lines) {
    std::string tag = l.pass ? "PASS" : "FAIL";
    if (!l.pass && expected.count(l.id)) tag += " (expected)";
    if (!l.pass && !expected.count(l.id)) ++unexpected;
    std::printf("[%s] %2d %s: %s\n", tag.c_str(), l.id, l.name.c_str(), l.detail.c_str());
  }
  std::printf("%d unexpected failure(s), %.1f s\n", unexpected, secs);
  return unexpected == 0 ? 0 : 1;
}
