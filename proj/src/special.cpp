// Kernel transforms F_d, G_d, their derivatives, Struve functions, and the
// Simpson quadrature oracles for the defining integrals.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oscicell/linstab.hpp"

namespace oscicell::linstab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_kstar(double k) {
  if (!(std::isfinite(k) && k >= 0.0))
    throw std::domain_error("kstar must be finite and >= 0");
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw std::domain_error("dim must be 1 or 2");
}

// Struve H_nu power series, long double to absorb the alternating-series
// cancellation up to the switch point.
long double struve_series(int nu, long double z) {
  const long double half = z * 0.5L;
  // t_0 = (z/2)^(nu+1) / (Gamma(3/2) Gamma(nu+3/2)): 2z/pi resp. 2z^2/(3 pi)
  long double t = (nu == 0) ? 2.0L * z / kPi : 2.0L * z * z / (3.0L * kPi);
  long double sum = t;
  const long double z2 = half * half;
  for (int m = 0; m < 200; ++m) {
    const long double den =
        (m + 1.5L) * (m + nu + 1.5L);
    t *= -z2 / den;
    sum += t;
    if (std::fabs((double)t) < 1e-22L * (1.0L + std::fabs((double)sum))) break;
  }
  return sum;
}

// H_nu(z) - Y_nu(z) asymptotic tail, truncated at the smallest term.
double struve_asymptotic_tail(int nu, double z) {
  const double inv2 = 1.0 / (z * z);
  double t = (nu == 0) ? 2.0 / (kPi * z) : 2.0 / kPi;
  double sum = t;
  for (int k = 0; k < 64; ++k) {
    double ratio;
    if (nu == 0) {
      const double c = 2.0 * k + 1.0;
      ratio = -c * c * inv2;
    } else {
      ratio = (2.0 * k + 1.0) * (1.0 - 2.0 * k) * inv2;
    }
    const double tn = t * ratio;
    if (std::fabs(tn) >= std::fabs(t)) break;  // divergence onset
    t = tn;
    sum += t;
    if (std::fabs(t) < 1e-18 * (1.0 + std::fabs(sum))) break;
  }
  return sum;
}

constexpr double kStruveSwitch = 22.0;

}  // namespace

double struve_h0(double x) {
  check_kstar(x);
  if (x <= kStruveSwitch) return (double)struve_series(0, (long double)x);
  return std::cyl_neumann(0.0, x) + struve_asymptotic_tail(0, x);
}

double struve_h1(double x) {
  check_kstar(x);
  if (x <= kStruveSwitch) return (double)struve_series(1, (long double)x);
  return std::cyl_neumann(1.0, x) + struve_asymptotic_tail(1, x);
}

double F(int dim, double kstar) {
  check_dim(dim);
  check_kstar(kstar);
  if (dim == 1) {
    const double s = std::sin(0.5 * kstar);
    return 4.0 * kPi * s * s;
  }
  if (kstar == 0.0) return 0.0;
  const double j0 = std::cyl_bessel_j(0.0, kstar);
  const double j1 = std::cyl_bessel_j(1.0, kstar);
  return kPi * kPi * kPi * (j1 * struve_h0(kstar) - j0 * struve_h1(kstar));
}

double G(int dim, double kstar) {
  check_dim(dim);
  check_kstar(kstar);
  if (dim == 1) {
    if (kstar < 1e-8) {
      const double k2 = kstar * kstar;
      return 2.0 * kPi * (1.0 - k2 / 6.0 + k2 * k2 / 120.0);
    }
    return 2.0 * kPi * std::sin(kstar) / kstar;
  }
  if (kstar < 1e-6) {
    const double k2 = kstar * kstar;
    return kPi * kPi * (1.0 - k2 / 8.0 + k2 * k2 / 192.0);
  }
  return 2.0 * kPi * kPi * std::cyl_bessel_j(1.0, kstar) / kstar;
}

double F_deriv(int dim, double kstar) {
  check_dim(dim);
  check_kstar(kstar);
  if (dim == 1) return 2.0 * kPi * std::sin(kstar);
  if (kstar == 0.0) return 0.0;
  return -F(2, kstar) / kstar + 2.0 * kPi * kPi * std::cyl_bessel_j(1.0, kstar);
}

double G_deriv(int dim, double kstar) {
  check_dim(dim);
  check_kstar(kstar);
  if (dim == 1) {
    if (kstar < 1e-3) {
      const double k2 = kstar * kstar;
      return -2.0 * kPi * kstar * (1.0 / 3.0 - k2 / 30.0 + k2 * k2 / 840.0);
    }
    return 2.0 * kPi * (kstar * std::cos(kstar) - std::sin(kstar)) /
           (kstar * kstar);
  }
  if (kstar < 1e-3) {
    const double k2 = kstar * kstar;
    return 2.0 * kPi * kPi * kstar * (-1.0 / 8.0 + k2 / 96.0 - k2 * k2 / 3072.0);
  }
  return 2.0 * kPi * kPi *
         (std::cyl_bessel_j(0.0, kstar) / kstar -
          2.0 * std::cyl_bessel_j(1.0, kstar) / (kstar * kstar));
}

// ---------------------------------------------------------------------------
// Quadrature oracles

namespace {

// composite Simpson with n panels (n even) on [a,b]
template <class Fn>
double simpson(const Fn& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

template <class Fn>
double simpson_converged(const Fn& f, double a, double b, int n0) {
  int n = n0;
  double prev = simpson(f, a, b, n);
  for (int iter = 0; iter < 16; ++iter) {
    n *= 2;
    const double cur = simpson(f, a, b, n);
    if (std::fabs(cur - prev) < 1e-9) return cur;
    prev = cur;
  }
  return prev;
}

int pow2_at_least(double x) {
  int n = 32;
  while (n < x && n < (1 << 20)) n *= 2;
  return n;
}

// Tensor Simpson of f(r, cos_phi) over r in [0,1], phi in [0,2pi], with the
// doubling convergence test applied to both directions together.
template <class Fn>
double tensor_simpson_converged(const Fn& f, double kstar) {
  int nr = pow2_at_least(std::max(32.0, 48.0 * kstar));
  int nphi = pow2_at_least(std::max(32.0, 8.0 * kstar));
  auto eval = [&f](int nr_, int nphi_) {
    const double hphi = 2.0 * kPi / nphi_;
    std::vector<double> cphi(nphi_ + 1), wphi(nphi_ + 1);
    for (int j = 0; j <= nphi_; ++j) {
      cphi[j] = std::cos(j * hphi);
      wphi[j] = (j == 0 || j == nphi_) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    }
    const double hr = 1.0 / nr_;
    double outer = 0.0;
    for (int i = 0; i <= nr_; ++i) {
      const double r = i * hr;
      double inner = 0.0;
      for (int j = 0; j <= nphi_; ++j) inner += wphi[j] * f(r, cphi[j]);
      inner *= hphi / 3.0;
      const double wr = (i == 0 || i == nr_) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      outer += wr * inner;
    }
    return outer * hr / 3.0;
  };
  double prev = eval(nr, nphi);
  for (int iter = 0; iter < 8; ++iter) {
    nr *= 2;
    nphi *= 2;
    const double cur = eval(nr, nphi);
    if (std::fabs(cur - prev) < 1e-9) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double F_quad(int dim, double kstar) {
  check_dim(dim);
  check_kstar(kstar);
  if (dim == 1) {
    // pi*k* * int_{-1}^{1} sign(x) sin(k* x) dx ; split at the kink
    const double k = kstar;
    auto f = [k](double x) { return std::sin(k * x); };
    const double neg =
        simpson_converged([&f](double x) { return -f(x); }, -1.0, 0.0, 64);
    const double pos = simpson_converged(f, 0.0, 1.0, 64);
    return kPi * k * (neg + pos);
  }
  const double k = kstar;
  const double inner = tensor_simpson_converged(
      [k](double r, double c) { return std::sin(k * r * c) * r * c; }, kstar);
  return kPi * k * inner;
}

double G_quad(int dim, double kstar) {
  check_dim(dim);
  check_kstar(kstar);
  if (dim == 1) {
    const double k = kstar;
    return kPi *
           simpson_converged([k](double x) { return std::cos(k * x); }, -1.0,
                             1.0, 64);
  }
  const double k = kstar;
  const double inner = tensor_simpson_converged(
      [k](double r, double c) { return std::cos(k * r * c) * r; }, kstar);
  return kPi * inner;
}

}  // namespace oscicell::linstab
