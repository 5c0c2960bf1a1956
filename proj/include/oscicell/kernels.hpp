#pragma once

#include <cstddef>

// Data-parallel inner loops of the solvers. Scalar reference implementations
// live in kernels_scalar.cpp; an AVX2+FMA variant is selected at runtime when
// the CPU supports it (override with OSCICELL_SIMD=scalar|avx2|auto or
// kern::select()). The two backends are equivalence-tested against each other;
// reductions may differ by summation order within ~1e-13 relative.

namespace oscicell::kern {

enum class Backend { scalar, avx2 };

struct Ops {
  // reductions
  double (*sum)(const double* x, std::size_t n);
  double (*minv)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);

  // m0 = sum r, mc = sum r*c, ms = sum r*s  (theta moments of one x-row)
  void (*theta_moments)(const double* r, const double* c, const double* s,
                        std::size_t n, double* m0, double* mc, double* ms);

  // out = pref * r * max(1 - r/rmax, 0)
  void (*logistic_map)(const double* r, double* out, std::size_t n, double rmax,
                       double pref);

  // out[j] = a + ca*c[j] + cb*s[j]
  void (*assemble_trig)(double* out, const double* c, const double* s,
                        std::size_t n, double a, double ca, double cb);

  // face velocity 0.5*(vl+vr); fx = max(v,0)*rl + min(v,0)*rr - d_over_h*(rr-rl)
  void (*face_flux)(const double* vl, const double* vr, const double* rl,
                    const double* rr, double d_over_h, std::size_t n, double* fx);

  // rnew = r - cdx*(fxr-fxl) - cdt*(ftr-ftl)
  void (*flux_divergence)(double* rnew, const double* r, const double* fxr,
                          const double* fxl, const double* ftr, const double* ftl,
                          double cdx, double cdt, std::size_t n);
};

// Active table (initialized on first use from the environment / CPU probe).
const Ops& ops();
Backend active();
const char* backend_name();

// Force a backend (throws ValidationError if unavailable on this machine).
void select(Backend b);

bool avx2_supported();
const Ops& scalar_ops();
const Ops& avx2_ops();  // valid only if avx2_supported()

}  // namespace oscicell::kern
