#include "oscicell/pde1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "oscicell/errors.hpp"
#include "oscicell/kernels.hpp"
#include "oscicell/rng.hpp"

namespace oscicell::pde {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPositivityTol = -1e-12;

double wrap_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double wrap_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > kPi) a -= kTwoPi;
  if (a <= -kPi) a += kTwoPi;
  return a;
}
}  // namespace

double Field::mass() const {
  return kern::ops().sum(values.data(), values.size()) * dx() * dtheta();
}

Field make_field(int Nx, int Ntheta, double L,
                 const std::function<double(double, double)>& f) {
  Field out(Nx, Ntheta, L);
  for (int i = 0; i < Nx; ++i)
    for (int j = 0; j < Ntheta; ++j)
      out.at(i, j) = f(out.x_center(i), out.theta_center(j));
  return out;
}

double sigma_flux(double R_value, SigmaKind kind, double Rmax) {
  if (kind == SigmaKind::Linear) return R_value;
  const double pref = Rmax / (Rmax - 1.0);  // sigma(1) = 1
  return pref * R_value * std::max(1.0 - R_value / Rmax, 0.0);
}

Solver::Solver(const ModelParams& p, int Nx, int Ntheta)
    : p_(p), Nx_(Nx), Nt_(Ntheta) {
  p_.validate();
  if (Nx < 4 || Ntheta < 4)
    throw ValidationError("grid must have at least 4 cells per direction");
  dx_ = p_.L / Nx_;
  dth_ = kTwoPi / Nt_;
  if (!(p_.rho < 0.5 * p_.L))
    throw GeometryError("sensing radius rho must be < L/2");

  // Offset weights: interior cells carry their full width dx, the cell cut by
  // |x~| = rho carries its overlap with the neighborhood.
  M_ = 0;
  while (((M_ + 1) - 0.5) * dx_ < p_.rho) ++M_;
  w_.assign(M_ + 1, 0.0);
  for (int m = 1; m <= M_; ++m)
    w_[m] = std::min(p_.rho, (m + 0.5) * dx_) - (m - 0.5) * dx_;
  w0_ = 2.0 * std::min(p_.rho, 0.5 * dx_);

  cosT_.resize(Nt_);
  sinT_.resize(Nt_);
  for (int j = 0; j < Nt_; ++j) {
    const double th = (j + 0.5) * dth_;
    cosT_[j] = std::cos(th);
    sinT_[j] = std::sin(th);
  }
  const std::size_t n = static_cast<std::size_t>(Nx_) * Nt_;
  sig_.resize(n);
  v_.resize(n);
  v2_.resize(n);
  fx_.resize(n);
  ft_.resize(n);
  rnew_.resize(n);
  ftpad_.resize(Nt_ + 1);
  msig_.resize(Nx_);
  csig_.resize(Nx_);
  ssig_.resize(Nx_);
  cr_.resize(Nx_);
  sr_.resize(Nx_);
  u0_.resize(Nx_);
  uc_.resize(Nx_);
  us_.resize(Nx_);
  wc_.resize(Nx_);
  ws_.resize(Nx_);
}

void Solver::refresh_velocities(const Field& f) {
  const auto& k = kern::ops();
  const std::size_t n = f.values.size();
  const double* R = f.values.data();

  if (p_.sigma_kind == SigmaKind::Linear) {
    std::memcpy(sig_.data(), R, n * sizeof(double));
  } else {
    k.logistic_map(R, sig_.data(), n, p_.Rmax, p_.Rmax / (p_.Rmax - 1.0));
  }

  for (int i = 0; i < Nx_; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * Nt_;
    double m0, mc, ms;
    k.theta_moments(sig_.data() + off, cosT_.data(), sinT_.data(), Nt_, &m0, &mc,
                    &ms);
    msig_[i] = m0 * dth_;
    csig_[i] = mc * dth_;
    ssig_[i] = ms * dth_;
    k.theta_moments(R + off, cosT_.data(), sinT_.data(), Nt_, &m0, &mc, &ms);
    cr_[i] = mc * dth_;
    sr_[i] = ms * dth_;
  }

  // odd kernel (adhesion) and symmetric kernel (clock coupling) sums over x
  for (int i = 0; i < Nx_; ++i) {
    double a0 = 0.0, ac = 0.0, as = 0.0, bc = 0.0, bs = 0.0;
    for (int m = 1; m <= M_; ++m) {
      const int ip = (i + m) % Nx_;
      const int im = ((i - m) % Nx_ + Nx_) % Nx_;
      const double w = w_[m];
      a0 += w * (msig_[ip] - msig_[im]);
      ac += w * (csig_[ip] - csig_[im]);
      as += w * (ssig_[ip] - ssig_[im]);
      bc += w * (cr_[ip] + cr_[im]);
      bs += w * (sr_[ip] + sr_[im]);
    }
    u0_[i] = a0;
    uc_[i] = ac;
    us_[i] = as;
    wc_[i] = bc + w0_ * cr_[i];
    ws_[i] = bs + w0_ * sr_[i];
  }

  // v  = J0*U0 + J*(cos th * UC + sin th * US)
  // v2 = K*(cos th * WS - sin th * WC)   (omega handled as diagnostic drift)
  for (int i = 0; i < Nx_; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * Nt_;
    k.assemble_trig(v_.data() + off, cosT_.data(), sinT_.data(), Nt_,
                    p_.J0 * u0_[i], p_.J * uc_[i], p_.J * us_[i]);
    k.assemble_trig(v2_.data() + off, cosT_.data(), sinT_.data(), Nt_, 0.0,
                    p_.K * ws_[i], -p_.K * wc_[i]);
  }
}

double Solver::cfl_dt_bound() const {
  const auto& k = kern::ops();
  double bound = dx_ * dx_ / (2.0 * p_.Dx);
  if (p_.Dtheta > 0.0)
    bound = std::min(bound, dth_ * dth_ / (2.0 * p_.Dtheta));
  const double vmax = k.max_abs(v_.data(), v_.size());
  if (vmax > 0.0) bound = std::min(bound, dx_ / vmax);
  const double v2max = k.max_abs(v2_.data(), v2_.size());
  if (v2max > 0.0) bound = std::min(bound, dth_ / v2max);
  return bound;
}

double Solver::suggested_dt(double safety) const {
  const auto& k = kern::ops();
  const double rate = 2.0 * p_.Dx / (dx_ * dx_) +
                      2.0 * p_.Dtheta / (dth_ * dth_) +
                      k.max_abs(v_.data(), v_.size()) / dx_ +
                      k.max_abs(v2_.data(), v2_.size()) / dth_;
  return safety / rate;
}

void Solver::advance(Field& f, double dt) {
  if (dt > cfl_dt_bound() * (1.0 + 1e-12))
    throw StepSizeError("dt exceeds the CFL bound");
  const auto& k = kern::ops();
  const double* R = f.values.data();

  for (int i = 0; i < Nx_; ++i) {
    const int ip = (i + 1) % Nx_;
    k.face_flux(v_.data() + static_cast<std::size_t>(i) * Nt_,
                v_.data() + static_cast<std::size_t>(ip) * Nt_,
                R + static_cast<std::size_t>(i) * Nt_,
                R + static_cast<std::size_t>(ip) * Nt_, p_.Dx / dx_, Nt_,
                fx_.data() + static_cast<std::size_t>(i) * Nt_);
  }
  for (int i = 0; i < Nx_; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * Nt_;
    const double* vl = v2_.data() + off;
    const double* rl = R + off;
    k.face_flux(vl, vl + 1, rl, rl + 1, p_.Dtheta / dth_, Nt_ - 1,
                ft_.data() + off);
    // wrap face between theta cells Nt-1 and 0
    const double vf = 0.5 * (vl[Nt_ - 1] + vl[0]);
    const double up = std::max(vf, 0.0) * rl[Nt_ - 1] + std::min(vf, 0.0) * rl[0];
    ft_[off + Nt_ - 1] = up - (p_.Dtheta / dth_) * (rl[0] - rl[Nt_ - 1]);
  }
  const double cdx = dt / dx_;
  const double cdt = dt / dth_;
  for (int i = 0; i < Nx_; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * Nt_;
    const int im = (i - 1 + Nx_) % Nx_;
    ftpad_[0] = ft_[off + Nt_ - 1];
    std::memcpy(ftpad_.data() + 1, ft_.data() + off, Nt_ * sizeof(double));
    k.flux_divergence(rnew_.data() + off, R + off, fx_.data() + off,
                      fx_.data() + static_cast<std::size_t>(im) * Nt_,
                      ftpad_.data() + 1, ftpad_.data(), cdx, cdt, Nt_);
  }

  const double lowest = k.minv(rnew_.data(), rnew_.size());
  if (!(lowest >= kPositivityTol)) {
    for (std::size_t c = 0; c < rnew_.size(); ++c) {
      if (rnew_[c] == lowest)
        throw PositivityFault(static_cast<int>(c) / Nt_,
                              static_cast<int>(c) % Nt_, lowest);
    }
    throw PositivityFault(-1, -1, lowest);  // NaN case
  }
  f.values.swap(rnew_);
  f.time += dt;
}

Velocities compute_velocities(const Field& f, const ModelParams& p) {
  Solver s(p, f.Nx, f.Ntheta);
  s.refresh_velocities(f);
  Velocities out;
  out.v = s.v();
  out.v2 = s.v2();
  // the public operation reports the true clock velocity, omega included
  if (p.omega != 0.0)
    for (double& x : out.v2) x += p.omega;
  return out;
}

void step(Field& f, const ModelParams& p, double dt) {
  Solver s(p, f.Nx, f.Ntheta);
  s.refresh_velocities(f);
  s.advance(f, dt);
}

Diagnostics diagnostics(const Field& f) {
  const auto& k = kern::ops();
  Diagnostics d;
  d.time = f.time;
  d.spatial_density.resize(f.Nx);
  d.mean_phase.resize(f.Nx);
  std::vector<double> cosT(f.Ntheta), sinT(f.Ntheta);
  for (int j = 0; j < f.Ntheta; ++j) {
    cosT[j] = std::cos(f.theta_center(j));
    sinT[j] = std::sin(f.theta_center(j));
  }
  double tot = 0.0, totc = 0.0, tots = 0.0;
  for (int i = 0; i < f.Nx; ++i) {
    double m0, mc, ms;
    k.theta_moments(f.values.data() + static_cast<std::size_t>(i) * f.Ntheta,
                    cosT.data(), sinT.data(), f.Ntheta, &m0, &mc, &ms);
    d.spatial_density[i] = m0 * f.dtheta();
    d.mean_phase[i] = wrap_2pi(std::atan2(ms, mc));
    tot += m0;
    totc += mc;
    tots += ms;
  }
  d.mass = tot * f.dx() * f.dtheta();
  if (!(d.mass > 0.0) || !std::isfinite(d.mass))
    throw DegenerateField("field has nonpositive or non-finite total mass");
  d.r = std::hypot(totc, tots) / tot;
  const auto [mn, mx] =
      std::minmax_element(d.spatial_density.begin(), d.spatial_density.end());
  const double mean = d.mass / f.L;
  d.aggregation_index = (*mx - *mn) / mean;
  return d;
}

Winding phase_winding(const std::vector<double>& mean_phase) {
  Winding w;
  const std::size_t n = mean_phase.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = wrap_pi(mean_phase[(i + 1) % n] - mean_phase[i]);
    w.net += diff;
    w.total_variation += std::fabs(diff);
  }
  return w;
}

std::complex<double> fourier_amplitude(const Field& f, int q, int m_x) {
  const double kx = 2.0 * kPi * m_x / f.L;
  std::complex<double> acc = 0.0;
  for (int i = 0; i < f.Nx; ++i) {
    const double px = kx * f.x_center(i);
    for (int j = 0; j < f.Ntheta; ++j) {
      const double ph = q * f.theta_center(j) + px;
      acc += f.at(i, j) * std::complex<double>(std::cos(ph), -std::sin(ph));
    }
  }
  return 2.0 * acc / static_cast<double>(f.values.size());
}

RunResult run(const ModelParams& p, const RunConfig& cfg) {
  p.validate();
  Solver solver(p, cfg.Nx, cfg.Ntheta);

  Field f(cfg.Nx, cfg.Ntheta, p.L);
  Rng rng(cfg.seed);
  for (double& v : f.values) v = 1.0 + cfg.ic_epsilon * (2.0 * rng.u01() - 1.0);
  const double mean =
      kern::ops().sum(f.values.data(), f.values.size()) / f.values.size();
  for (double& v : f.values) v += p.Rbar - mean;

  RunResult out;
  auto emit = [&](const Field& fld) {
    Diagnostics d = diagnostics(fld);
    if (p.omega != 0.0)
      for (double& mp : d.mean_phase) mp = wrap_2pi(mp + p.omega * fld.time);
    out.trajectory.push_back(std::move(d));
  };
  emit(f);

  const double snap_cad = cfg.snapshot_cadence;
  double next_diag = cfg.cadence;
  double next_snap = snap_cad > 0.0 ? snap_cad : std::numeric_limits<double>::infinity();
  if (snap_cad > 0.0) out.snapshots.push_back(f);

  const double t_end = cfg.T_final;
  while (f.time < t_end - 1e-12) {
    solver.refresh_velocities(f);
    double dt = solver.suggested_dt(cfg.cfl_safety);
    dt = std::min(dt, t_end - f.time);
    if (next_diag > f.time) dt = std::min(dt, next_diag - f.time);
    if (next_snap > f.time) dt = std::min(dt, next_snap - f.time);
    try {
      solver.advance(f, dt);
    } catch (const PositivityFault& e) {
      out.aborted = true;
      out.fault = e.what();
      break;
    }
    ++out.steps;
    if (!std::isfinite(kern::ops().sum(f.values.data(), f.values.size()))) {
      out.aborted = true;
      out.fault = "non-finite density";
      break;
    }
    if (f.time >= next_diag - 1e-12) {
      emit(f);
      next_diag += cfg.cadence;
    }
    if (f.time >= next_snap - 1e-12) {
      out.snapshots.push_back(f);
      next_snap += snap_cad;
    }
  }
  if (out.trajectory.empty() || out.trajectory.back().time < f.time - 1e-12)
    emit(f);
  out.field = std::move(f);
  return out;
}

}  // namespace oscicell::pde
