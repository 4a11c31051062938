#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "comiclab/simd/transfer.hpp"

namespace comiclab::simd {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::avx512: return "avx512";
  }
  return "scalar";
}

Backend backend_from_string(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "avx512") return Backend::avx512;
  throw std::invalid_argument("unknown SIMD backend '" + std::string(name) + "'");
}

bool available(Backend backend) {
  switch (backend) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(COMICLAB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::avx512:
#if defined(COMICLAB_HAVE_AVX512)
      return __builtin_cpu_supports("avx512f");
#else
      return false;
#endif
  }
  return false;
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("COMIC_LAB_SIMD")) {
    const Backend requested = backend_from_string(env);
    if (!available(requested)) throw std::runtime_error("COMIC_LAB_SIMD requests an unavailable backend");
    return requested;
  }
  if (available(Backend::avx512)) return Backend::avx512;
  return available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& selected() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

Backend active_backend() { return selected().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!available(backend)) throw std::invalid_argument("SIMD backend not available on this machine");
  selected().store(backend, std::memory_order_relaxed);
}

void row_sums(const GaussianPairs& pairs, std::span<double> out, Backend backend) {
  if (out.size() != pairs.positions.size()) throw std::invalid_argument("row_sums output has the wrong length");
#if defined(COMICLAB_HAVE_AVX2)
  if (backend == Backend::avx2) return avx2::row_sums(pairs, out);
#endif
#if defined(COMICLAB_HAVE_AVX512)
  if (backend == Backend::avx512) return avx512::row_sums(pairs, out);
#endif
  (void)backend;
  scalar::row_sums(pairs, out);
}

void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta, Backend backend) {
  if (masses.size() != pairs.positions.size() || delta.size() != masses.size())
    throw std::invalid_argument("transfer operands differ in length");
#if defined(COMICLAB_HAVE_AVX2)
  if (backend == Backend::avx2) return avx2::transfer(pairs, masses, delta);
#endif
#if defined(COMICLAB_HAVE_AVX512)
  if (backend == Backend::avx512) return avx512::transfer(pairs, masses, delta);
#endif
  (void)backend;
  scalar::transfer(pairs, masses, delta);
}

}  // namespace comiclab::simd
