#include <string>

#include "grandlp/errors.hpp"
#include "grandlp/psi.hpp"

namespace grandlp {

using nlohmann::json;

namespace {

double read_endpoint(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return kInfinity;
  if (j.at(key).is_string()) {
    const auto s = j.at(key).get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
    throw RejectedInput(std::string("bad endpoint '") + s + "'");
  }
  return j.at(key).get<double>();
}

ConvexWeight weight_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "power") return ConvexWeight::power(j.at("coef"), j.at("exponent"));
  if (kind == "exp") return ConvexWeight::exponential(j.at("coef"), j.at("rate"));
  throw RejectedInput("unknown convex weight kind '" + kind + "'");
}

}  // namespace

PsiFunction psi_from_json(const json& j) {
  try {
    const auto form = j.at("form").get<std::string>();
    if (form == "power_log") {
      SlowlyVarying L;
      if (j.contains("L")) L = j.at("L").get<SlowlyVarying>();
      return make_power_log(j.at("A"), j.at("B"), j.at("gamma"), j.at("delta"), L);
    }
    if (form == "product") return product(psi_from_json(j.at("lhs")), psi_from_json(j.at("rhs")));
    if (form == "power_scale") return power_scale(psi_from_json(j.at("psi")), j.at("gamma"));
    if (form == "mult_inf") return mult_inf(psi_from_json(j.at("lhs")), psi_from_json(j.at("rhs")));
    if (form == "conv_inf") return conv_inf(psi_from_json(j.at("lhs")), psi_from_json(j.at("rhs")));
    if (form == "sobolev_nu") {
      return sobolev_nu(psi_from_json(j.at("psi")), j.at("n").get<int>(), j.at("m").get<int>());
    }
    if (form == "young_fenchel") {
      const double a = j.contains("a") ? j.at("a").get<double>() : 1.0;
      return young_fenchel_psi(weight_from_json(j.at("W")),
                               ExponentInterval(a, read_endpoint(j, "b")));
    }
    if (form == "tabulated") {
      std::vector<double> slopes;
      if (j.contains("log_slopes")) slopes = j.at("log_slopes").get<std::vector<double>>();
      return tabulated(ExponentInterval(j.at("a"), read_endpoint(j, "b")),
                       j.at("p").get<std::vector<double>>(),
                       j.at("values").get<std::vector<double>>(), std::move(slopes));
    }
    throw RejectedInput("unknown psi form '" + form + "'");
  } catch (const json::exception& e) {
    throw RejectedInput(std::string("malformed psi document: ") + e.what());
  }
}

}  // namespace grandlp
