#include "oscicell/params.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "oscicell/errors.hpp"

namespace oscicell {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError("invalid ModelParams." + field + ": " + what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  require(finite(J0), "J0", "must be finite");
  require(finite(J), "J", "must be finite");
  require(finite(K), "K", "must be finite");
  require(finite(omega), "omega", "must be finite");
  require(finite(Dx) && Dx > 0.0, "Dx", "must be > 0");
  require(finite(Dtheta) && Dtheta >= 0.0, "Dtheta", "must be >= 0");
  require(finite(rho) && rho > 0.0, "rho", "must be > 0");
  require(finite(L) && L > 0.0, "L", "must be > 0");
  require(finite(Rbar) && Rbar > 0.0, "Rbar", "must be > 0");
  require(dim == 1 || dim == 2, "dim", "must be 1 or 2");
  if (sigma_kind == SigmaKind::Logistic)
    require(finite(Rmax) && Rmax > 1.0, "Rmax", "must be > 1 for Logistic sigma");
}

void DimensionlessParams::validate() const {
  if (!(std::isfinite(J0_star) && std::isfinite(J_star) && std::isfinite(K_star)))
    throw ValidationError("invalid DimensionlessParams: non-finite coupling");
  if (!(std::isfinite(Dtheta_star) && Dtheta_star >= 0.0))
    throw ValidationError("invalid DimensionlessParams.Dtheta_star: must be >= 0");
  if (dim != 1 && dim != 2)
    throw ValidationError("invalid DimensionlessParams.dim: must be 1 or 2");
}

DimensionlessParams nondimensionalize(const ModelParams& p) {
  p.validate();
  const double rd1 = std::pow(p.rho, p.dim + 1);
  DimensionlessParams q;
  q.J0_star = p.Rbar * rd1 * p.J0 / p.Dx;
  q.J_star = p.Rbar * rd1 * p.J / p.Dx;
  q.K_star = p.Rbar * rd1 * p.rho * p.K / p.Dx;
  q.Dtheta_star = p.rho * p.rho * p.Dtheta / p.Dx;
  q.dim = p.dim;
  return q;
}

AdmissibilityReport check_admissible(const DimensionlessParams& q) {
  q.validate();
  AdmissibilityReport rep;
  auto fail = [&rep](const std::string& field, const std::string& bound) {
    rep.pass = false;
    rep.violations.push_back({field, bound});
  };
  if (q.dim == 1) {
    if (!(q.K_star > -std::numbers::pi)) fail("K_star", "K* > -pi");
  } else {
    if (!(q.K_star > -1.4)) fail("K_star", "K* > -1.4");
    if (!(q.J0_star > -7.3)) fail("J0_star", "J0* > -7.3");
    if (!(q.J0_star < 3.1)) fail("J0_star", "J0* < 3.1");
    if (!(q.J_star > -3.65)) fail("J_star", "J* > -3.65");
    if (!(q.J_star < 1.9)) fail("J_star", "J* < 1.9");
  }
  return rep;
}

const char* to_string(SigmaKind k) {
  return k == SigmaKind::Linear ? "Linear" : "Logistic";
}

ModelParams params_from_json(const nlohmann::json& j, const ModelParams& base) {
  if (!j.is_object()) throw ValidationError("params: expected a JSON object");
  static const std::set<std::string> known = {
      "J0", "J", "K", "omega", "Dx", "Dtheta", "rho", "L", "Rbar",
      "dim", "sigma_kind", "Rmax"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key))
      throw ValidationError("params: unknown key \"" + key + "\"");

  ModelParams p = base;
  auto num = [&j](const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number())
      throw ValidationError(std::string("params.") + key + ": expected a number");
    return j.at(key).get<double>();
  };
  p.J0 = num("J0", p.J0);
  p.J = num("J", p.J);
  p.K = num("K", p.K);
  p.omega = num("omega", p.omega);
  p.Dx = num("Dx", p.Dx);
  p.Dtheta = num("Dtheta", p.Dtheta);
  p.rho = num("rho", p.rho);
  p.L = num("L", p.L);
  p.Rbar = num("Rbar", p.Rbar);
  p.Rmax = num("Rmax", p.Rmax);
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer())
      throw ValidationError("params.dim: expected an integer");
    p.dim = j.at("dim").get<int>();
  }
  if (j.contains("sigma_kind")) {
    const std::string s = j.at("sigma_kind").get<std::string>();
    if (s == "Linear")
      p.sigma_kind = SigmaKind::Linear;
    else if (s == "Logistic")
      p.sigma_kind = SigmaKind::Logistic;
    else
      throw ValidationError("params.sigma_kind: expected \"Linear\" or \"Logistic\"");
  }
  p.validate();
  return p;
}

nlohmann::json params_to_json(const ModelParams& p) {
  return nlohmann::json{
      {"J0", p.J0},        {"J", p.J},
      {"K", p.K},          {"omega", p.omega},
      {"Dx", p.Dx},        {"Dtheta", p.Dtheta},
      {"rho", p.rho},      {"L", p.L},
      {"Rbar", p.Rbar},    {"dim", p.dim},
      {"sigma_kind", to_string(p.sigma_kind)}, {"Rmax", p.Rmax}};
}

}  // namespace oscicell
