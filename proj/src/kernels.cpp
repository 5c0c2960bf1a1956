#include "oscicell/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "oscicell/errors.hpp"

namespace oscicell::kern {
namespace {

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void init_from_env() {
  Backend b = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("OSCICELL_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) {
      b = Backend::scalar;
    } else if (std::strcmp(env, "avx2") == 0) {
      if (!cpu_has_avx2())
        throw ValidationError("OSCICELL_SIMD=avx2 but CPU lacks AVX2/FMA");
      b = Backend::avx2;
    } else if (std::strcmp(env, "auto") != 0) {
      throw ValidationError(std::string("unknown OSCICELL_SIMD value: ") + env);
    }
  }
  g_backend.store(b);
  g_active.store(b == Backend::avx2 ? &avx2_ops() : &scalar_ops());
}

}  // namespace

bool avx2_supported() { return cpu_has_avx2(); }

const Ops& ops() {
  const Ops* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    init_from_env();
    t = g_active.load();
  }
  return *t;
}

Backend active() {
  ops();
  return g_backend.load();
}

const char* backend_name() {
  return active() == Backend::avx2 ? "avx2" : "scalar";
}

void select(Backend b) {
  if (b == Backend::avx2 && !cpu_has_avx2())
    throw ValidationError("AVX2 backend requested but CPU lacks AVX2/FMA");
  g_backend.store(b);
  g_active.store(b == Backend::avx2 ? &avx2_ops() : &scalar_ops());
}

}  // namespace oscicell::kern
