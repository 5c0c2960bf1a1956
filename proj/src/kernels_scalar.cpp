#include <algorithm>
#include <cmath>

#include "oscicell/kernels.hpp"

namespace oscicell::kern {
namespace {

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_minv(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

double s_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void s_theta_moments(const double* r, const double* c, const double* s,
                     std::size_t n, double* m0, double* mc, double* ms) {
  double a0 = 0.0, ac = 0.0, as = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a0 += r[i];
    ac += r[i] * c[i];
    as += r[i] * s[i];
  }
  *m0 = a0;
  *mc = ac;
  *ms = as;
}

void s_logistic_map(const double* r, double* out, std::size_t n, double rmax,
                    double pref) {
  const double inv = 1.0 / rmax;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::max(1.0 - r[i] * inv, 0.0);
    out[i] = pref * r[i] * t;
  }
}

void s_assemble_trig(double* out, const double* c, const double* s, std::size_t n,
                     double a, double ca, double cb) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a + ca * c[i] + cb * s[i];
}

void s_face_flux(const double* vl, const double* vr, const double* rl,
                 const double* rr, double d_over_h, std::size_t n, double* fx) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = 0.5 * (vl[i] + vr[i]);
    const double up = std::max(v, 0.0) * rl[i] + std::min(v, 0.0) * rr[i];
    fx[i] = up - d_over_h * (rr[i] - rl[i]);
  }
}

void s_flux_divergence(double* rnew, const double* r, const double* fxr,
                       const double* fxl, const double* ftr, const double* ftl,
                       double cdx, double cdt, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    rnew[i] = r[i] - cdx * (fxr[i] - fxl[i]) - cdt * (ftr[i] - ftl[i]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table = {s_sum,          s_minv,          s_max_abs,
                            s_theta_moments, s_logistic_map, s_assemble_trig,
                            s_face_flux,    s_flux_divergence};
  return table;
}

}  // namespace oscicell::kern
