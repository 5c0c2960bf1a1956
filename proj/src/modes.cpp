#include "oscicell/modes.hpp"

#include <cmath>
#include <numbers>

#include "oscicell/errors.hpp"

namespace oscicell::modes {

namespace {
constexpr double kPi = std::numbers::pi;

using CVec = std::vector<std::complex<double>>;

CVec rhs_of(const CVec& A, int M, double D_rho, double K, double Dtheta) {
  CVec out(M + 1);
  const std::complex<double> A1 = A[1];
  const std::complex<double> A1c = std::conj(A1);
  const double c = D_rho * kPi * K;
  out[0] = 0.0;  // exactly, j = 0 kills every term
  for (int j = 1; j <= M; ++j) {
    const std::complex<double> Ajm1 = A[j - 1];
    const std::complex<double> Ajp1 = (j + 1 <= M) ? A[j + 1] : 0.0;
    out[j] = double(j) * c * (A1 * Ajm1 - A1c * Ajp1) -
             double(j) * double(j) * Dtheta * A[j];
  }
  return out;
}

bool finite(const CVec& A) {
  for (const auto& a : A)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
  return true;
}
}  // namespace

std::vector<std::complex<double>> mode_rhs(const ModeVector& m) {
  if (m.M < 2) throw ValidationError("mode truncation order M must be >= 2");
  if (static_cast<int>(m.A.size()) != m.M + 1)
    throw ValidationError("ModeVector.A must have M+1 entries");
  return rhs_of(m.A, m.M, m.D_rho, m.K, m.Dtheta);
}

double lyapunov_u(const ModeVector& m) {
  double u = 0.0;
  for (int k = 1; k < static_cast<int>(m.A.size()); ++k)
    u += std::norm(m.A[k]) / k;
  return u;
}

double reconstruct_density(const ModeVector& m, double theta) {
  double r = m.A[0].real();
  for (int j = 1; j < static_cast<int>(m.A.size()); ++j) {
    r += 2.0 * (m.A[j].real() * std::cos(j * theta) -
                m.A[j].imag() * std::sin(j * theta));
  }
  return r;
}

ModeTrajectory integrate_modes(const ModeVector& m0, double T,
                               const IntegrateOptions& opt) {
  if (m0.M < 2) throw ValidationError("mode truncation order M must be >= 2");
  if (static_cast<int>(m0.A.size()) != m0.M + 1)
    throw ValidationError("ModeVector.A must have M+1 entries");
  if (!(opt.dt > 0.0) || !(T >= 0.0))
    throw ValidationError("integrate_modes: need dt > 0 and T >= 0");

  ModeTrajectory out;
  ModeVector m = m0;
  double t = 0.0;
  auto sample = [&]() {
    out.t.push_back(t);
    out.A.push_back(m.A);
    out.u.push_back(lyapunov_u(m));
  };
  sample();
  double next_sample = opt.cadence;

  const int M = m.M;
  while (t < T - 1e-12) {
    double dt = std::min(opt.dt, T - t);
    if (next_sample > t) dt = std::min(dt, next_sample - t);

    const CVec k1 = rhs_of(m.A, M, m.D_rho, m.K, m.Dtheta);
    CVec tmp(M + 1);
    for (int j = 0; j <= M; ++j) tmp[j] = m.A[j] + 0.5 * dt * k1[j];
    const CVec k2 = rhs_of(tmp, M, m.D_rho, m.K, m.Dtheta);
    for (int j = 0; j <= M; ++j) tmp[j] = m.A[j] + 0.5 * dt * k2[j];
    const CVec k3 = rhs_of(tmp, M, m.D_rho, m.K, m.Dtheta);
    for (int j = 0; j <= M; ++j) tmp[j] = m.A[j] + dt * k3[j];
    const CVec k4 = rhs_of(tmp, M, m.D_rho, m.K, m.Dtheta);
    for (int j = 0; j <= M; ++j)
      m.A[j] += dt / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
    t += dt;

    if (!finite(m.A)) throw BlowupError(t - dt);
    if (t >= next_sample - 1e-12) {
      sample();
      next_sample += opt.cadence;
    }
    const double a1 = std::abs(m.A[1]);
    if (a1 > 0.0 && std::abs(m.A[M]) / a1 > opt.saturation_ratio) {
      out.saturated = true;
      break;
    }
  }
  if (out.t.empty() || out.t.back() < t - 1e-12) sample();
  out.t_end = t;
  out.final_state = std::move(m);
  return out;
}

double max_l2_deviation(const ModeTrajectory& mt, const pde::RunResult& pr,
                        int x_probe) {
  if (pr.snapshots.empty())
    throw AlignmentError("PDE run carries no snapshots to compare against");
  double worst = 0.0;
  std::size_t pi_idx = 0;
  for (std::size_t s = 0; s < mt.t.size(); ++s) {
    // locate the PDE snapshot at the same time
    bool found = false;
    for (std::size_t q = pi_idx; q < pr.snapshots.size(); ++q) {
      if (std::fabs(pr.snapshots[q].time - mt.t[s]) < 1e-9) {
        pi_idx = q;
        found = true;
        break;
      }
    }
    if (!found)
      throw AlignmentError("no PDE snapshot at t = " + std::to_string(mt.t[s]));
    const pde::Field& f = pr.snapshots[pi_idx];
    ModeVector probe;
    probe.M = static_cast<int>(mt.A[s].size()) - 1;
    probe.A = mt.A[s];
    double acc = 0.0;
    for (int j = 0; j < f.Ntheta; ++j) {
      const double d =
          reconstruct_density(probe, f.theta_center(j)) - f.at(x_probe, j);
      acc += d * d;
    }
    worst = std::max(worst, std::sqrt(acc * f.dtheta()));
  }
  return worst;
}

}  // namespace oscicell::modes
