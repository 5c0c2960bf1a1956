#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace oscicell {

enum class SigmaKind { Linear, Logistic };

// Physical model constants. Unit conventions: J0, J carry
// 1/(density*time*length^(d-1)); K one extra power of 1/length; omega rad/time;
// Dx length^2/time; Dtheta rad^2/time; rho, L length; Rbar density.
struct ModelParams {
  double J0 = 0.0;    // baseline adhesion strength
  double J = 0.0;     // phase-dependent adhesion strength
  double K = 0.0;     // clock coupling strength
  double omega = 0.0; // intrinsic clock frequency; applied as a rigid
                      // diagnostic drift, the solver integrates the omega=0 gauge
  double Dx = 1.0;
  double Dtheta = 0.0;
  double rho = 1.0;   // sensing radius
  double L = 10.0;    // spatial period
  double Rbar = 1.0;  // reference mean density
  int dim = 1;
  SigmaKind sigma_kind = SigmaKind::Linear;
  double Rmax = 30.0; // logistic saturation density (> 1)

  void validate() const;  // throws ValidationError naming the offending field
};

struct DimensionlessParams {
  double J0_star = 0.0;
  double J_star = 0.0;
  double K_star = 0.0;
  double Dtheta_star = 0.0;
  int dim = 1;

  void validate() const;
};

DimensionlessParams nondimensionalize(const ModelParams& p);

struct BoundViolation {
  std::string field;  // "K_star", "J0_star", "J_star"
  std::string bound;  // e.g. "K* > -pi"
};

// Report-only admissibility screen (pattern scales not finer than rho).
// The 2D bounds are not sharp; callers treat failure as a warning.
struct AdmissibilityReport {
  bool pass = true;
  std::vector<BoundViolation> violations;
};

AdmissibilityReport check_admissible(const DimensionlessParams& q);

// Strict JSON ingestion: exactly the field names of ModelParams, unknown keys
// are an error. Missing keys fall back to `base`.
ModelParams params_from_json(const nlohmann::json& j,
                             const ModelParams& base = ModelParams{});
nlohmann::json params_to_json(const ModelParams& p);

const char* to_string(SigmaKind k);

}  // namespace oscicell
