#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscicell/params.hpp"

namespace oscicell::linstab {

// --- neighborhood-kernel transforms -----------------------------------------
//
// d=1:  F = 4*pi*sin^2(k*/2)  (== 2*pi*(1-cos k*)),  G = 2*pi*sinc(k*)
// d=2:  F = pi^3*(J1(k*)H0(k*) - J0(k*)H1(k*)),      G = 2*pi^2*J1(k*)/k*
// with the removable singularity G(2,0) = pi^2. Throws std::domain_error for
// negative or non-finite k*.
double F(int dim, double kstar);
double G(int dim, double kstar);

// Closed-form first derivatives (used by the boundary-curve parametrization).
double F_deriv(int dim, double kstar);
double G_deriv(int dim, double kstar);

// Independent quadrature oracles: composite Simpson of the defining integrals,
// panel counts doubled until one doubling changes the result by < 1e-9.
double F_quad(int dim, double kstar);
double G_quad(int dim, double kstar);

// Struve functions (power series for small argument, Y_nu + asymptotic series
// for large argument). Exposed for direct testing.
double struve_h0(double x);
double struve_h1(double x);

// --- dispersion relations ----------------------------------------------------
//
// sigma1 = -k*^2 + 2 J0* F_d(k*)
// sigma3 = -k*^2 - Dtheta* + J* F_d(k*) + K* G_d(k*)
double sigma1(const DimensionlessParams& q, double kstar);
double sigma3(const DimensionlessParams& q, double kstar);

enum class OnsetClass { UI, AI, UGS, ULS, AGS, ALS };
const char* to_string(OnsetClass c);

struct OnsetReport {
  double lambda1 = 0.0;  // max of sigma1 over admissible k* > 0
  double k1 = 0.0;       // smallest maximizer
  double lambda2 = 0.0;  // max of sigma3 over admissible k* >= 0
  double k2 = 0.0;       // smallest maximizer
  std::optional<OnsetClass> onset_class;  // filled by classify_onset
  bool cutoff_warning = false;  // growth still rising at kstar_max
};

struct MaximizeOptions {
  double kstar_max = 12.566370614359172;  // 4*pi
  double grid_step = 1e-3;
  double refine_tol = 1e-8;
  double k_zero_tol = 1e-6;
  double lambda_tol = 1e-10;
};

// Continuum sentinel for the admissible-wavenumber set; any L_over_rho <= 0
// maximizes over all real k* in (0, kstar_max], otherwise over the discrete
// set k* = 2*pi*m*rho/L.
inline constexpr double kContinuum = 0.0;

OnsetReport growth_rates(const DimensionlessParams& q, double L_over_rho,
                         const MaximizeOptions& opt = {});

// growth_rates + the six-class table; throws MarginalCase when either growth
// rate is within lambda_tol of zero.
OnsetReport classify_onset(const DimensionlessParams& q, double L_over_rho,
                           const MaximizeOptions& opt = {});

// Critical baseline adhesion 1/F_d''(0): 1/(2*pi) in 1D, 3/(2*pi^2) in 2D.
double j_crit(int dim);

// Boundary curve J* = f_d(K*) separating k2 = 0 from k2 > 0. Closed form for
// K* >= 0; for K* < 0 the parametric branch (sigma3(kappa) = sigma3'(kappa) = 0)
// is inverted by bracketing scan + bisection to 1e-10 in kappa.
double f_boundary(int dim, double K_star);

struct SweepSpec {
  int dim = 1;
  double J0_star = 0.0;
  double Dtheta_star = 0.0;
  double K_min = -3.0, K_max = 3.0;
  int nK = 0;
  double J_min = -2.0, J_max = 2.0;
  int nJ = 0;
  double L_over_rho = kContinuum;
  MaximizeOptions opt;
};

struct SweepRow {
  double K_star, J_star;
  double lambda1, lambda2, k2;
  std::string cls;  // onset class name, or "BOUNDARY" for marginal points
};

// Row-major over (K index, J index); deterministic ordering independent of the
// thread count.
std::vector<SweepRow> sweep_phase_diagram(const SweepSpec& spec, int threads = 1);

}  // namespace oscicell::linstab
