#include "grandlp/cli.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grandlp/errors.hpp"
#include "grandlp/gnorm.hpp"
#include "grandlp/psi.hpp"
#include "grandlp/suite.hpp"

namespace grandlp {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw RejectedInput("cannot open '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw RejectedInput("malformed JSON in '" + path + "': " + e.what());
  }
}

// A function file is either a bare radial function or {"function": ..., "space": ...}.
RadialFunction load_function(const json& j) {
  return radial_from_json(j.is_object() && j.contains("function") ? j.at("function") : j);
}

PsiFunction load_psi(const std::string& path) {
  const json j = load_json(path);
  try {
    return psi_from_json(j);
  } catch (const json::exception& e) {
    throw RejectedInput("invalid psi description in '" + path + "': " + e.what());
  }
}

struct SpaceOpts {
  std::optional<int> n;
  double sigma = 0.0;

  // n = 0 selects the half line; without --n the file's "space" entry, else the half line.
  WeightedSpace resolve(const json& file) const {
    int nn = 0;
    double ss = sigma;
    if (n) {
      nn = *n;
    } else if (file.is_object() && file.contains("space") && file["space"].is_object()) {
      nn = file["space"].value("n", 0);
      ss = file["space"].value("sigma", 0.0);
    }
    return nn == 0 ? WeightedSpace::half_line() : WeightedSpace(nn, ss);
  }
};

void add_space(CLI::App* cmd, SpaceOpts& s) {
  cmd->add_option("--n", s.n, "dimension; 0 for the half line (default)");
  cmd->add_option("--sigma", s.sigma, "weight exponent of |x|^sigma");
}

struct Output {
  std::string path;
  std::string format = "json";
};

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("-o,--output", o.path, "write to this file instead of standard output");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
  } else {
    write_file_atomic(o.path, text);
  }
}

std::string entries_csv(const SuiteReport& r) {
  std::string s;
  for (const auto& e : r.entries) {
    if (!s.empty()) s += "\n";
    s += "# " + std::to_string(e.index) + " " + e.kind + "\n" + trace_csv(e.trace);
  }
  return s;
}

int emit_report(const Output& o, const SuiteReport& r, std::ostream& out) {
  emit(o, o.format == "csv" ? entries_csv(r) : report_json(r).dump(2) + "\n", out);
  return r.pass ? kExitOk : kExitCheckFailed;
}

// Single-dash long flags such as -psi are accepted as --psi.
std::vector<std::string> normalise(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.size() > 2 && a[0] == '-' && a[1] != '-' && std::isalpha(static_cast<unsigned char>(a[1])) &&
        a.find('=') == std::string::npos) {
      args[i] = "-" + a;
    }
  }
  return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grand Lebesgue space norms, psi algebra and theorem checks"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "seed for randomised families");

  // norm
  auto* norm = app.add_subcommand("norm", "G(psi) norm of a radial function");
  std::string f_path, psi_path;
  SpaceOpts norm_space;
  Output norm_out;
  norm->add_option("-f,--function", f_path, "radial function JSON")->required()->check(CLI::ExistingFile);
  norm->add_option("--psi", psi_path, "psi JSON")->required()->check(CLI::ExistingFile);
  add_space(norm, norm_space);
  add_output(norm, norm_out);

  // psi
  auto* psi_cmd = app.add_subcommand("psi", "derived psi functions and their values");
  std::string op, lhs_path, rhs_path;
  std::vector<double> at;
  double gamma = 1.0, rep_a = 0.0, rep_b = 0.0;
  int sob_n = 3, sob_m = 3;
  SpaceOpts psi_space;
  Output psi_out;
  psi_cmd->add_option("--op", op, "mult_inf, conv_inf, product, power_scale, sobolev_nu, represent or eval")
      ->required()
      ->check(CLI::IsMember({"mult_inf", "conv_inf", "product", "power_scale", "sobolev_nu", "represent", "eval"}));
  psi_cmd->add_option("--lhs", lhs_path, "psi JSON (function JSON for represent)")->required()->check(CLI::ExistingFile);
  psi_cmd->add_option("--rhs", rhs_path, "second psi JSON")->check(CLI::ExistingFile);
  psi_cmd->add_option("--at", at, "exponents at which to evaluate; without it the psi JSON is printed");
  psi_cmd->add_option("--gamma", gamma, "power_scale factor");
  psi_cmd->add_option("--n", sob_n, "sobolev_nu source dimension");
  psi_cmd->add_option("--m", sob_m, "sobolev_nu target dimension");
  psi_cmd->add_option("--space-n", psi_space.n, "represent: dimension, 0 for the half line");
  psi_cmd->add_option("--sigma", psi_space.sigma, "represent: weight exponent");
  psi_cmd->add_option("--a", rep_a, "represent: lower end of the domain");
  psi_cmd->add_option("--b", rep_b, "represent: upper end of the domain");
  add_output(psi_cmd, psi_out);

  // boyd
  auto* boyd = app.add_subcommand("boyd", "Boyd indices of G(psi)");
  std::string boyd_psi, boyd_f;
  SpaceOpts boyd_space;
  Output boyd_out;
  boyd->add_option("--psi", boyd_psi, "psi JSON")->required()->check(CLI::ExistingFile);
  boyd->add_option("-f,--function", boyd_f, "fit the numeric dilation norm of this function instead")
      ->check(CLI::ExistingFile);
  add_space(boyd, boyd_space);
  add_output(boyd, boyd_out);

  // phi
  auto* phi = app.add_subcommand("phi", "fundamental function phi(delta)");
  std::string phi_psi;
  std::vector<double> deltas;
  Output phi_out;
  phi->add_option("--psi", phi_psi, "psi JSON")->required()->check(CLI::ExistingFile);
  phi->add_option("--delta", deltas, "measure values")->required();
  add_output(phi, phi_out);

  // verify
  auto* verify = app.add_subcommand("verify", "run one theorem check at default parameters");
  std::string theorem;
  std::optional<int> count;
  Output verify_out;
  verify->add_option("--theorem", theorem, "lemma1, th1, th2, th3, th4 or th5")
      ->required()
      ->check(CLI::IsMember({"lemma1", "th1", "th2", "th3", "th4", "th5"}));
  verify->add_option("--count", count, "battery size");
  add_output(verify, verify_out);

  // sharpness
  auto* sharp = app.add_subcommand("sharpness", "endpoint sharpness experiments");
  std::string which;
  std::vector<std::string> sharp_params;
  Output sharp_out;
  sharp->add_option("--which", which, "gamma, convolution, convolution_outer or sobolev")
      ->required()
      ->check(CLI::IsMember({"gamma", "convolution", "convolution_outer", "sobolev"}));
  sharp->add_option("--param", sharp_params, "key=value parameter, repeatable (e.g. b1=1.5)");
  add_output(sharp, sharp_out);

  // suite
  auto* suite = app.add_subcommand("suite", "run a suite config");
  std::string config_path, out_dir;
  bool print_default = false;
  Output suite_out;
  suite->add_option("--config", config_path, "suite config JSON")->check(CLI::ExistingFile);
  suite->add_flag("--default-config", print_default, "print the default config and exit");
  suite->add_option("--out", out_dir, "directory for report.json, timing.json and CSV traces");
  add_output(suite, suite_out);

  const auto args = normalise(argc, argv);
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*norm) {
      const json fj = load_json(f_path);
      const WeightedSpace X = norm_space.resolve(fj);
      const auto r = g_norm(load_function(fj), load_psi(psi_path), X);
      emit(norm_out, json(r).dump(2) + "\n", out);
      return kExitOk;
    }
    if (*psi_cmd) {
      std::optional<PsiFunction> result;
      auto rhs = [&] {
        if (rhs_path.empty()) throw RejectedInput("--op " + op + " needs --rhs");
        return load_psi(rhs_path);
      };
      if (op == "represent") {
        const json fj = load_json(lhs_path);
        result = tabulate_representation(load_function(fj), psi_space.resolve(fj),
                                         ExponentInterval(rep_a, rep_b));
      } else {
        const PsiFunction lhs = load_psi(lhs_path);
        if (op == "mult_inf") result = mult_inf(lhs, rhs());
        if (op == "conv_inf") result = conv_inf(lhs, rhs());
        if (op == "product") result = product(lhs, rhs());
        if (op == "power_scale") result = power_scale(lhs, gamma);
        if (op == "sobolev_nu") result = sobolev_nu(lhs, sob_n, sob_m);
        if (op == "eval") result = lhs;
      }
      if (at.empty()) {
        emit(psi_out, result->to_json().dump(2) + "\n", out);
        return kExitOk;
      }
      json values = json::array();
      std::string csv = "p,value\n";
      for (double p : at) {
        const double v = (*result)(p);
        values.push_back({{"p", p}, {"value", v}});
        std::ostringstream os;
        os.precision(17);
        os << p << "," << v << "\n";
        csv += os.str();
      }
      const json j = {{"op", op},
                      {"domain", {result->domain().a(), result->domain().b()}},
                      {"values", values}};
      emit(psi_out, psi_out.format == "csv" ? csv : j.dump(2) + "\n", out);
      return kExitOk;
    }
    if (*boyd) {
      const PsiFunction psi = load_psi(boyd_psi);
      json fj;
      if (!boyd_f.empty()) fj = load_json(boyd_f);
      const WeightedSpace X = boyd_space.resolve(fj);
      BoydEstimate est = boyd_f.empty() ? boyd_indices(psi.domain(), X)
                                        : boyd_indices_numeric(load_function(fj), psi, X);
      json j = {{"gamma1", est.gamma1}, {"gamma2", est.gamma2}};
      if (!boyd_f.empty()) j["residuals"] = {est.residual1, est.residual2};
      emit(boyd_out, j.dump() + "\n", out);
      return kExitOk;
    }
    if (*phi) {
      const PsiFunction psi = load_psi(phi_psi);
      json values = json::array();
      for (double d : deltas) values.push_back({{"delta", d}, {"phi", fundamental_phi(psi, d)}});
      emit(phi_out, json{{"values", values}}.dump(2) + "\n", out);
      return kExitOk;
    }
    if (*verify) {
      std::vector<std::string> kinds;
      if (theorem == "lemma1") kinds = {"lemma1"};
      if (theorem == "th1") kinds = {"dilation", "boyd", "phi"};
      if (theorem == "th2") kinds = {"th2"};
      if (theorem == "th3") kinds = {"th3_lp", "th3"};
      if (theorem == "th4") kinds = {"noncompact"};
      if (theorem == "th5") kinds = {"th5"};
      json checks = json::array();
      for (const auto& k : kinds) {
        json c = {{"kind", k}};
        if (count && k != "dilation" && k != "boyd" && k != "phi" && k != "noncompact") c["count"] = *count;
        checks.push_back(c);
      }
      return emit_report(verify_out, run_suite({{"seed", seed}, {"checks", checks}}), out);
    }
    if (*sharp) {
      static const std::map<std::string, std::string> kind_of = {
          {"gamma", "gamma_sharpness"},
          {"convolution", "convolution_sharpness"},
          {"convolution_outer", "convolution_sharpness_outer"},
          {"sobolev", "sobolev_gap"}};
      json c = {{"kind", kind_of.at(which)}};
      for (const auto& kv : sharp_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw RejectedInput("--param expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
          c[key] = json::parse(val);
        } catch (const json::exception&) {
          c[key] = val;
        }
      }
      // Parameter errors are usage errors here, not failed checks.
      const SuiteEntry e = run_check(c["kind"].get<std::string>(), c, seed);
      SuiteReport r;
      r.seed = seed;
      r.entries.push_back(e);
      r.pass = e.pass;
      return emit_report(sharp_out, r, out);
    }
    if (*suite) {
      if (print_default) {
        emit(suite_out, default_suite_config(seed).dump(2) + "\n", out);
        return kExitOk;
      }
      if (config_path.empty()) throw RejectedInput("suite needs --config or --default-config");
      const SuiteReport r = run_suite(load_json(config_path));
      if (!out_dir.empty()) write_suite_outputs(r, out_dir);
      return emit_report(suite_out, r, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "error: usage: no subcommand\n";
  return kExitUsage;
}

}  // namespace grandlp
