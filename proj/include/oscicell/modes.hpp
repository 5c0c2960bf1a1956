#pragma once

#include <complex>
#include <string>
#include <vector>

#include "oscicell/pde1d.hpp"

namespace oscicell::modes {

// Truncated Fourier coefficients A_0..A_M of a space-independent density
// R(theta) = sum_j A_j e^{i j theta}, with A_{-j} the conjugate of A_j held
// implicitly. A_0 stays exactly constant along trajectories.
struct ModeVector {
  int M = 32;
  std::vector<std::complex<double>> A;  // size M+1
  double D_rho = 2.0;   // measure of the sensing neighborhood (2*rho in 1D)
  double K = 0.0;
  double Dtheta = 0.0;

  ModeVector() = default;
  ModeVector(int order, double d_rho, double k, double dtheta)
      : M(order), A(order + 1, 0.0), D_rho(d_rho), K(k), Dtheta(dtheta) {}
};

// dA_j/dt = j |D_rho| pi K (A_1 A_{j-1} - conj(A_1) A_{j+1}) - j^2 Dtheta A_j,
// spectral closure A_{M+1} = 0.
std::vector<std::complex<double>> mode_rhs(const ModeVector& m);

// u = sum_{k=1}^{M} |A_k|^2 / k
double lyapunov_u(const ModeVector& m);

double reconstruct_density(const ModeVector& m, double theta);

struct ModeTrajectory {
  std::vector<double> t;
  std::vector<std::vector<std::complex<double>>> A;  // snapshot per sample
  std::vector<double> u;
  bool saturated = false;   // |A_M|/|A_1| exceeded the saturation ratio
  double t_end = 0.0;
  ModeVector final_state;
};

struct IntegrateOptions {
  double dt = 5e-4;
  double cadence = 0.1;
  double saturation_ratio = 0.1;  // halt when |A_M|/|A_1| exceeds this
};

// Non-finite coefficients raise this; it carries the last finite state and the
// trajectory sampled up to that point.
struct ModeBlowup : BlowupError {
  ModeVector last_state;
  ModeTrajectory partial;
  ModeBlowup(double t, ModeVector last, ModeTrajectory part)
      : BlowupError(t), last_state(std::move(last)), partial(std::move(part)) {}
};

// Classical RK4 with fixed step; halts cleanly at spectral saturation and
// throws ModeBlowup on non-finite state.
ModeTrajectory integrate_modes(const ModeVector& m0, double T,
                               const IntegrateOptions& opt = {});

// Max over samples of the L2-over-theta distance between the reconstructed
// mode density and the PDE column at x index x_probe. The PDE run must have
// snapshots on the same time grid (throws AlignmentError otherwise).
double max_l2_deviation(const ModeTrajectory& mt, const pde::RunResult& pr,
                        int x_probe = 0);

}  // namespace oscicell::modes
