#include "oscicell/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscicell/errors.hpp"
#include "oscicell/parallel.hpp"

namespace oscicell::linstab {

namespace {

constexpr double kPi = std::numbers::pi;

struct ScanResult {
  double lambda;
  double k;
  bool rising_at_cutoff = false;
};

// Golden-section maximization on [a,b] to tolerance tol in k.
template <class Fn>
double golden_max(const Fn& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 >= f2) {  // keep the left interval on ties (smaller maximizer)
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Maximize sigma over the admissible wavenumber set. include_zero selects
// whether k* = 0 belongs to the set (it does for sigma3, not for sigma1).
template <class Fn>
ScanResult max_sigma(const Fn& sigma, bool include_zero, double L_over_rho,
                     const MaximizeOptions& opt) {
  ScanResult best;
  if (L_over_rho > 0.0) {  // discrete set k* = 2 pi m rho / L
    const double dk = 2.0 * kPi / L_over_rho;
    const int m0 = include_zero ? 0 : 1;
    best.lambda = sigma(m0 * dk);
    best.k = m0 * dk;
    double prev = best.lambda;
    double last = best.lambda;
    for (int m = m0 + 1; m * dk <= opt.kstar_max; ++m) {
      const double k = m * dk;
      const double v = sigma(k);
      prev = last;
      last = v;
      if (v > best.lambda) {
        best.lambda = v;
        best.k = k;
      }
    }
    best.rising_at_cutoff =
        (best.k + dk > opt.kstar_max) && (last > prev);
    return best;
  }

  // continuum: dense grid scan, ascending with strict improvement so ties
  // resolve to the smallest k*, then golden-section refinement
  const double step = opt.grid_step;
  const int n = static_cast<int>(std::floor(opt.kstar_max / step));
  int besti = 0;
  if (include_zero) {
    best.lambda = sigma(0.0);
    best.k = 0.0;
  } else {
    best.lambda = sigma(step);
    best.k = step;
    besti = 1;
  }
  double prev = best.lambda, last = best.lambda;
  for (int i = (include_zero ? 1 : 2); i <= n; ++i) {
    const double k = i * step;
    const double v = sigma(k);
    prev = last;
    last = v;
    if (v > best.lambda) {
      best.lambda = v;
      best.k = k;
      besti = i;
    }
  }
  best.rising_at_cutoff = (besti >= n - 1) && (last > prev);
  if (best.k > 0.0) {
    const double lo = std::max(include_zero ? 0.0 : step, best.k - step);
    const double hi = std::min(opt.kstar_max, best.k + step);
    const double kref = golden_max(sigma, lo, hi, opt.refine_tol);
    const double vref = sigma(kref);
    if (vref > best.lambda) {
      best.lambda = vref;
      best.k = kref;
    }
  }
  return best;
}

OnsetClass class_from_signs(bool lam1_pos, bool lam2_pos, bool k2_nonzero) {
  if (!lam2_pos) return lam1_pos ? OnsetClass::AI : OnsetClass::UI;
  if (!lam1_pos) return k2_nonzero ? OnsetClass::ULS : OnsetClass::UGS;
  return k2_nonzero ? OnsetClass::ALS : OnsetClass::AGS;
}

}  // namespace

const char* to_string(OnsetClass c) {
  switch (c) {
    case OnsetClass::UI: return "UI";
    case OnsetClass::AI: return "AI";
    case OnsetClass::UGS: return "UGS";
    case OnsetClass::ULS: return "ULS";
    case OnsetClass::AGS: return "AGS";
    case OnsetClass::ALS: return "ALS";
  }
  return "?";
}

double sigma1(const DimensionlessParams& q, double kstar) {
  return -kstar * kstar + 2.0 * q.J0_star * F(q.dim, kstar);
}

double sigma3(const DimensionlessParams& q, double kstar) {
  return -kstar * kstar - q.Dtheta_star + q.J_star * F(q.dim, kstar) +
         q.K_star * G(q.dim, kstar);
}

OnsetReport growth_rates(const DimensionlessParams& q, double L_over_rho,
                         const MaximizeOptions& opt) {
  q.validate();
  auto s1 = [&q](double k) { return sigma1(q, k); };
  auto s3 = [&q](double k) { return sigma3(q, k); };
  const ScanResult r1 = max_sigma(s1, /*include_zero=*/false, L_over_rho, opt);
  const ScanResult r3 = max_sigma(s3, /*include_zero=*/true, L_over_rho, opt);
  OnsetReport rep;
  rep.lambda1 = r1.lambda;
  rep.k1 = r1.k;
  rep.lambda2 = r3.lambda;
  rep.k2 = r3.k;
  rep.cutoff_warning = r1.rising_at_cutoff || r3.rising_at_cutoff;
  return rep;
}

OnsetReport classify_onset(const DimensionlessParams& q, double L_over_rho,
                           const MaximizeOptions& opt) {
  OnsetReport rep = growth_rates(q, L_over_rho, opt);
  if (std::fabs(rep.lambda1) < opt.lambda_tol ||
      std::fabs(rep.lambda2) < opt.lambda_tol)
    throw MarginalCase("growth rate within lambda_tol of zero; parameters sit on a classification boundary");
  rep.onset_class = class_from_signs(rep.lambda1 > 0.0, rep.lambda2 > 0.0,
                                     rep.k2 > opt.k_zero_tol);
  return rep;
}

double j_crit(int dim) {
  if (dim == 1) return 1.0 / (2.0 * kPi);           // 1/F_1''(0)
  if (dim == 2) return 3.0 / (2.0 * kPi * kPi);     // 1/F_2''(0)
  throw std::domain_error("dim must be 1 or 2");
}

namespace {

// Parametric branch of the boundary curve for K* < 0: the curve
// (K*(kappa), J*(kappa)) on which sigma3(kappa) = sigma3'(kappa) = 0.
struct BranchPoint {
  double K, J;
};

BranchPoint branch_point(int dim, double kappa) {
  const double Fv = F(dim, kappa), Gv = G(dim, kappa);
  const double Fp = F_deriv(dim, kappa), Gp = G_deriv(dim, kappa);
  const double den = Gv * Fp - Fv * Gp;
  return {(kappa * kappa * Fp - 2.0 * kappa * Fv) / den,
          (-kappa * kappa * Gp + 2.0 * kappa * Gv) / den};
}

}  // namespace

double f_boundary(int dim, double K_star) {
  if (dim != 1 && dim != 2) throw std::domain_error("dim must be 1 or 2");
  if (!std::isfinite(K_star))
    throw BoundaryRangeError("K_star must be finite");
  const double K_min = (dim == 1) ? -kPi : -1.4;
  if (K_star <= K_min)
    throw BoundaryRangeError("K_star outside the admissible range for dim " +
                             std::to_string(dim));
  if (K_star >= 0.0)
    return (dim == 1) ? 1.0 / kPi + K_star / 3.0
                      : 3.0 / (kPi * kPi) + 0.375 * K_star;

  // Invert K*(kappa) = K_star on the principal branch (K* decreases from 0- as
  // kappa grows). Near kappa = 0 the numerator cancels to O(kappa^5); starting
  // the scan at 1e-6 keeps it well above double round-off.
  const double lim = (dim == 1) ? 1.0 / kPi : 3.0 / (kPi * kPi);
  double lo = 1e-6;
  if (branch_point(dim, lo).K <= K_star) return lim;
  double hi = lo;
  bool bracketed = false;
  for (double k = 2e-6; k <= 16.0; k *= (k < 0.1 ? 2.0 : 1.01)) {
    if (branch_point(dim, k).K <= K_star) {
      hi = k;
      bracketed = true;
      break;
    }
    lo = k;
  }
  if (!bracketed)
    throw BoundaryRangeError("K_star not reached on the parametrized branch");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (branch_point(dim, mid).K <= K_star)
      hi = mid;
    else
      lo = mid;
  }
  return branch_point(dim, 0.5 * (lo + hi)).J;
}

std::vector<SweepRow> sweep_phase_diagram(const SweepSpec& spec, int threads) {
  if (spec.nK < 0 || spec.nJ < 0)
    throw ValidationError("sweep grid sizes must be >= 0");
  const std::size_t total =
      static_cast<std::size_t>(spec.nK) * static_cast<std::size_t>(spec.nJ);
  std::vector<SweepRow> rows(total);
  if (total == 0) return rows;

  auto kval = [&spec](int i) {
    return spec.nK == 1 ? spec.K_min
                        : spec.K_min + (spec.K_max - spec.K_min) * i / (spec.nK - 1);
  };
  auto jval = [&spec](int j) {
    return spec.nJ == 1 ? spec.J_min
                        : spec.J_min + (spec.J_max - spec.J_min) * j / (spec.nJ - 1);
  };

  parallel_for(total, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const int i = static_cast<int>(idx) / spec.nJ;
      const int j = static_cast<int>(idx) % spec.nJ;
      DimensionlessParams q;
      q.dim = spec.dim;
      q.J0_star = spec.J0_star;
      q.Dtheta_star = spec.Dtheta_star;
      q.K_star = kval(i);
      q.J_star = jval(j);
      SweepRow& row = rows[idx];
      row.K_star = q.K_star;
      row.J_star = q.J_star;
      try {
        const OnsetReport rep = classify_onset(q, spec.L_over_rho, spec.opt);
        row.lambda1 = rep.lambda1;
        row.lambda2 = rep.lambda2;
        row.k2 = rep.k2;
        row.cls = to_string(*rep.onset_class);
      } catch (const MarginalCase&) {
        const OnsetReport rep = growth_rates(q, spec.L_over_rho, spec.opt);
        row.lambda1 = rep.lambda1;
        row.lambda2 = rep.lambda2;
        row.k2 = rep.k2;
        row.cls = "BOUNDARY";
      }
    }
  });
  return rows;
}

}  // namespace oscicell::linstab
