#include "cholesteric/kernel_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cholesteric/errors.hpp"

namespace chol {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "expected an object");
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(prefix.empty() ? k : prefix + "." + k, "unknown key");
  }
}

double number(const json& j, const std::string& key, const char* field) {
  const std::string path = key + "." + field;
  if (!j.contains(field)) throw ConfigError(path, "missing");
  const json& v = j.at(field);
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

std::vector<double> number_array(const json& j, const std::string& key, const char* field) {
  const std::string path = key + "." + field;
  if (!j.contains(field)) throw ConfigError(path, "missing");
  const json& v = j.at(field);
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path, "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

RadialProfile parse_profile(const json& j, const std::string& key) {
  require_object(j, key);
  if (!j.contains("family")) throw ConfigError(key + ".family", "missing");
  if (!j.at("family").is_string()) throw ConfigError(key + ".family", "expected a string");
  const std::string fam = j.at("family").get<std::string>();
  try {
    if (fam == "zero") {
      reject_unknown(j, key, {"family"});
      return {};
    }
    if (fam == "gaussian") {
      reject_unknown(j, key, {"family", "amplitude", "width"});
      return RadialProfile::gaussian(number(j, key, "amplitude"), number(j, key, "width"));
    }
    if (fam == "exponential") {
      reject_unknown(j, key, {"family", "amplitude", "rate"});
      return RadialProfile::exponential(number(j, key, "amplitude"), number(j, key, "rate"));
    }
    if (fam == "tabulated") {
      reject_unknown(j, key, {"family", "radii", "values", "interpolation"});
      if (j.contains("interpolation") && j.at("interpolation") != "linear") {
        throw ConfigError(key + ".interpolation", "only \"linear\" is supported");
      }
      return RadialProfile::tabulated(number_array(j, key, "radii"), number_array(j, key, "values"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
  throw ConfigError(key + ".family", "unknown family \"" + fam + "\"");
}

AchiralKernel parse_achiral(const json& j, const std::string& key) {
  require_object(j, key);
  reject_unknown(j, key, {"k1", "k2", "k3"});
  AchiralKernel k;
  if (j.contains("k1")) k.k1 = parse_profile(j.at("k1"), key + ".k1");
  if (j.contains("k2")) k.k2 = parse_profile(j.at("k2"), key + ".k2");
  if (j.contains("k3")) k.k3 = parse_profile(j.at("k3"), key + ".k3");
  return k;
}

ChiralKernel parse_chiral(const json& j, const std::string& key) {
  require_object(j, key);
  reject_unknown(j, key, {"f1", "f2"});
  ChiralKernel k;
  if (j.contains("f1")) k.f1 = parse_profile(j.at("f1"), key + ".f1");
  if (j.contains("f2")) k.f2 = parse_profile(j.at("f2"), key + ".f2");
  return k;
}

json profile_json(const RadialProfile& p) {
  switch (p.family()) {
    case RadialProfile::Family::Zero: return {{"family", "zero"}};
    case RadialProfile::Family::Gaussian:
      return {{"family", "gaussian"}, {"amplitude", p.amplitude()}, {"width", p.width()}};
    case RadialProfile::Family::Exponential:
      return {{"family", "exponential"}, {"amplitude", p.amplitude()}, {"rate", p.width()}};
    case RadialProfile::Family::Tabulated:
      return {{"family", "tabulated"}, {"radii", p.radii()}, {"values", p.values()}, {"interpolation", "linear"}};
  }
  return {};
}

}  // namespace

KernelConfig parse_kernel_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  require_object(j, "(root)");
  reject_unknown(j, "", {"HH", "HD", "DD", "cH", "cD", "envelope", "model"});
  if (!j.contains("HH")) throw ConfigError("HH", "missing");
  if (!j.contains("envelope")) throw ConfigError("envelope", "missing");

  KernelConfig cfg;
  KernelSet& ks = cfg.kernels;
  ks.HH = parse_achiral(j.at("HH"), "HH");
  if (j.contains("HD")) ks.HD = parse_achiral(j.at("HD"), "HD");
  if (j.contains("DD")) ks.DD = parse_achiral(j.at("DD"), "DD");
  if (j.contains("cH")) ks.cH = parse_chiral(j.at("cH"), "cH");
  if (j.contains("cD")) ks.cD = parse_chiral(j.at("cD"), "cD");
  ks.envelope = parse_profile(j.at("envelope"), "envelope");
  if (j.contains("model")) {
    const json& m = j.at("model");
    require_object(m, "model");
    reject_unknown(m, "model", {"rho0"});
    if (m.contains("rho0")) {
      const double r = number(m, "model", "rho0");
      if (r < 0.0) throw ConfigError("model.rho0", "must be non-negative");
      cfg.rho0 = r;
    }
  }
  return cfg;
}

KernelConfig load_kernel_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("kernel", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kernel_config(ss.str());
}

std::string kernel_config_json(const KernelSet& ks, std::optional<double> rho0) {
  auto achiral = [](const AchiralKernel& k) {
    return json{{"k1", profile_json(k.k1)}, {"k2", profile_json(k.k2)}, {"k3", profile_json(k.k3)}};
  };
  auto chiral = [](const ChiralKernel& k) { return json{{"f1", profile_json(k.f1)}, {"f2", profile_json(k.f2)}}; };
  json j{{"HH", achiral(ks.HH)}, {"HD", achiral(ks.HD)}, {"DD", achiral(ks.DD)},
         {"cH", chiral(ks.cH)},  {"cD", chiral(ks.cD)},  {"envelope", profile_json(ks.envelope)}};
  if (rho0) j["model"] = {{"rho0", *rho0}};
  return j.dump(2) + "\n";
}

}  // namespace chol
