#include <atomic>

#include "segsim/errors.hpp"
#include "segsim/kernels.hpp"

namespace segsim::kernels {

namespace {

Backend detect() noexcept {
#if defined(SEGSIM_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return detect() == Backend::Avx2;
  }
  return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw UsageError("kernel backend '" + std::string(backend_name(b)) +
                     "' is not supported on this host");
  }
  current().store(b, std::memory_order_relaxed);
}

void reset_backend() noexcept { current().store(detect(), std::memory_order_relaxed); }

void neighbor_counts(std::span<const std::uint8_t> padded, int width, int height,
                     std::span<std::uint8_t> expat_out, std::span<std::uint8_t> native_out) {
#if defined(SEGSIM_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) {
    avx2::neighbor_counts(padded, width, height, expat_out, native_out);
    return;
  }
#endif
  scalar::neighbor_counts(padded, width, height, expat_out, native_out);
}

std::size_t expire(std::span<std::uint8_t> tags, std::span<std::int64_t> expiry, std::int64_t now,
                   std::int64_t none) {
#if defined(SEGSIM_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::expire(tags, expiry, now, none);
#endif
  return scalar::expire(tags, expiry, now, none);
}

}  // namespace segsim::kernels
