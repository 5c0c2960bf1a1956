#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oscicell/params.hpp"

namespace oscicell::pde {

// Cell-averaged density R(x, theta) on a periodic Nx x Ntheta grid, x-major.
struct Field {
  int Nx = 0;
  int Ntheta = 0;
  double L = 0.0;
  double time = 0.0;
  std::vector<double> values;

  Field() = default;
  Field(int nx, int ntheta, double length)
      : Nx(nx), Ntheta(ntheta), L(length),
        values(static_cast<std::size_t>(nx) * ntheta, 0.0) {}

  double dx() const { return L / Nx; }
  double dtheta() const { return 2.0 * 3.14159265358979323846 / Ntheta; }
  double x_center(int i) const { return (i + 0.5) * dx(); }
  double theta_center(int j) const { return (j + 0.5) * dtheta(); }
  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * Ntheta + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * Ntheta + j]; }
  double mass() const;
};

Field make_field(int Nx, int Ntheta, double L,
                 const std::function<double(double, double)>& f);

struct Diagnostics {
  double time = 0.0;
  double r = 0.0;     // Kuramoto order parameter in [0,1]
  double mass = 0.0;
  double aggregation_index = 0.0;  // (max-min)/mean of the spatial density
  std::vector<double> spatial_density;  // integral of R over theta, per x cell
  std::vector<double> mean_phase;       // circular mean of theta weighted by R
};

// sigma(R): Linear -> R; Logistic -> (Rmax/(Rmax-1)) R max(1 - R/Rmax, 0)
double sigma_flux(double R_value, SigmaKind kind, double Rmax);

struct Velocities {
  std::vector<double> v;   // adhesion velocity, per cell
  std::vector<double> v2;  // clock-phase velocity (includes omega), per cell
};

// Nonlocal velocities by midpoint sums over the sensing neighborhood; cells cut
// by |x~| = rho get their overlap fraction as weight. The theta integrals
// reduce to cos/sin moments per x cell. Throws GeometryError if rho >= L/2.
Velocities compute_velocities(const Field& f, const ModelParams& p);

// One explicit flux-form update: upwind advection (face velocity = mean of the
// adjacent cells) plus central diffusion, both directions, periodic. Mass is
// conserved by construction. Throws StepSizeError past the CFL bound and
// PositivityFault if a cell lands below -1e-12.
void step(Field& f, const ModelParams& p, double dt);

Diagnostics diagnostics(const Field& f);  // throws DegenerateField on zero mass

// Net winding and total circular variation of the mean phase across the
// periodic domain (phase-wave detector).
struct Winding {
  double net = 0.0;
  double total_variation = 0.0;
};
Winding phase_winding(const std::vector<double>& mean_phase);

// Fourier amplitude of the (q, m_x) mode: a such that the field contains
// a*cos(q*theta + k*x + phase) with k = 2*pi*m_x/L.
std::complex<double> fourier_amplitude(const Field& f, int q, int m_x);

struct RunConfig {
  int Nx = 200;
  int Ntheta = 128;
  double T_final = 100.0;
  double cadence = 0.5;        // diagnostics output period
  double ic_epsilon = 0.01;    // uniform(-1,1) noise amplitude on R0 = 1
  double cfl_safety = 0.4;
  std::uint64_t seed = 1;
  double snapshot_cadence = 0.0;  // 0 = final snapshot only
};

struct RunResult {
  std::vector<Diagnostics> trajectory;
  Field field;                  // final (or last good on abort)
  std::vector<Field> snapshots; // populated when snapshot_cadence > 0
  bool aborted = false;
  std::string fault;
  std::int64_t steps = 0;
};

// Deterministic given (config, seed): R0 = 1 + eps*U shifted to exact mean
// Rbar, adaptive dt within the CFL budget, diagnostics every cadence.
// Integrates the omega = 0 gauge; a nonzero omega appears as a rigid drift of
// the reported mean phases.
RunResult run(const ModelParams& p, const RunConfig& cfg);

// Reusable solver (buffers persist across steps).
class Solver {
 public:
  Solver(const ModelParams& p, int Nx, int Ntheta);

  void refresh_velocities(const Field& f);
  // explicit update using the currently stored velocities; leaves f untouched
  // if the result violates positivity or finiteness
  void advance(Field& f, double dt);
  double cfl_dt_bound() const;     // min-form bound (step precondition)
  double suggested_dt(double safety) const;  // sum-form, strictly positive

  std::vector<double>& v() { return v_; }
  std::vector<double>& v2() { return v2_; }

 private:
  ModelParams p_;
  int Nx_, Nt_;
  double dx_, dth_;
  int M_ = 0;             // kernel offsets with nonzero weight
  double w0_ = 0.0;       // weight of the m = 0 cell (symmetric kernel)
  std::vector<double> w_;  // clipped offset weights, w_[m], m = 1..M
  std::vector<double> cosT_, sinT_;
  std::vector<double> sig_, msig_, csig_, ssig_, cr_, sr_;
  std::vector<double> u0_, uc_, us_, wc_, ws_;
  std::vector<double> v_, v2_, fx_, ft_, ftpad_, rnew_;
};

}  // namespace oscicell::pde
