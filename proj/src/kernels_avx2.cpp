// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; it must only be entered after the runtime CPU probe.

#include "oscicell/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace oscicell::kern {
namespace {

inline double hsum(__m256d v) {
  // fixed combine order: (l0+l2) + (l1+l3)
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double a_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return hsum(acc) + tail;
}

double a_minv(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

double a_max_abs(const double* x, std::size_t n) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(mask, _mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void a_theta_moments(const double* r, const double* c, const double* s,
                     std::size_t n, double* m0, double* mc, double* ms) {
  __m256d a0 = _mm256_setzero_pd(), ac = _mm256_setzero_pd(),
          as = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d rv = _mm256_loadu_pd(r + i);
    a0 = _mm256_add_pd(a0, rv);
    ac = _mm256_fmadd_pd(rv, _mm256_loadu_pd(c + i), ac);
    as = _mm256_fmadd_pd(rv, _mm256_loadu_pd(s + i), as);
  }
  double t0 = 0.0, tc = 0.0, ts = 0.0;
  for (; i < n; ++i) {
    t0 += r[i];
    tc += r[i] * c[i];
    ts += r[i] * s[i];
  }
  *m0 = hsum(a0) + t0;
  *mc = hsum(ac) + tc;
  *ms = hsum(as) + ts;
}

void a_logistic_map(const double* r, double* out, std::size_t n, double rmax,
                    double pref) {
  const __m256d inv = _mm256_set1_pd(1.0 / rmax);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pf = _mm256_set1_pd(pref);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d rv = _mm256_loadu_pd(r + i);
    __m256d t = _mm256_fnmadd_pd(rv, inv, one);  // 1 - r/rmax
    t = _mm256_max_pd(t, zero);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(pf, rv), t));
  }
  const double invs = 1.0 / rmax;
  for (; i < n; ++i) {
    const double t = std::max(1.0 - r[i] * invs, 0.0);
    out[i] = pref * r[i] * t;
  }
}

void a_assemble_trig(double* out, const double* c, const double* s, std::size_t n,
                     double a, double ca, double cb) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d cav = _mm256_set1_pd(ca);
  const __m256d cbv = _mm256_set1_pd(cb);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_fmadd_pd(cav, _mm256_loadu_pd(c + i), av);
    acc = _mm256_fmadd_pd(cbv, _mm256_loadu_pd(s + i), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = a + ca * c[i] + cb * s[i];
}

void a_face_flux(const double* vl, const double* vr, const double* rl,
                 const double* rr, double d_over_h, std::size_t n, double* fx) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d dv = _mm256_set1_pd(d_over_h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v =
        _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(vl + i),
                                          _mm256_loadu_pd(vr + i)));
    const __m256d rlv = _mm256_loadu_pd(rl + i);
    const __m256d rrv = _mm256_loadu_pd(rr + i);
    const __m256d up = _mm256_add_pd(_mm256_mul_pd(_mm256_max_pd(v, zero), rlv),
                                     _mm256_mul_pd(_mm256_min_pd(v, zero), rrv));
    _mm256_storeu_pd(fx + i,
                     _mm256_fnmadd_pd(dv, _mm256_sub_pd(rrv, rlv), up));
  }
  for (; i < n; ++i) {
    const double v = 0.5 * (vl[i] + vr[i]);
    const double up = std::max(v, 0.0) * rl[i] + std::min(v, 0.0) * rr[i];
    fx[i] = up - d_over_h * (rr[i] - rl[i]);
  }
}

void a_flux_divergence(double* rnew, const double* r, const double* fxr,
                       const double* fxl, const double* ftr, const double* ftl,
                       double cdx, double cdt, std::size_t n) {
  const __m256d cx = _mm256_set1_pd(cdx);
  const __m256d ct = _mm256_set1_pd(cdt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(fxr + i),
                                     _mm256_loadu_pd(fxl + i));
    const __m256d dt = _mm256_sub_pd(_mm256_loadu_pd(ftr + i),
                                     _mm256_loadu_pd(ftl + i));
    __m256d acc = _mm256_fnmadd_pd(cx, dx, _mm256_loadu_pd(r + i));
    acc = _mm256_fnmadd_pd(ct, dt, acc);
    _mm256_storeu_pd(rnew + i, acc);
  }
  for (; i < n; ++i)
    rnew[i] = r[i] - cdx * (fxr[i] - fxl[i]) - cdt * (ftr[i] - ftl[i]);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table = {a_sum,          a_minv,          a_max_abs,
                            a_theta_moments, a_logistic_map, a_assemble_trig,
                            a_face_flux,    a_flux_divergence};
  return table;
}

}  // namespace oscicell::kern

#else  // non-x86: scalar table stands in, never selected at runtime

namespace oscicell::kern {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace oscicell::kern

#endif
