#pragma once

// Data-parallel inner loops of a tick. Every kernel has a scalar reference
// version and, where the target supports it, an AVX2 version; both produce
// bit-identical results. The active backend is chosen at first use from the
// host CPU and can be pinned with set_backend().

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace segsim::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b) noexcept;
bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
/// Throws UsageError if `b` is not supported on this host.
void set_backend(Backend b);
/// Reverts to the best supported backend.
void reset_backend() noexcept;

/// For every cell of a width x height grid, counts the Moore neighbours whose
/// occupancy code is 1 (expat) and 2 (native). `padded` is the zero-bordered
/// (width+2) x (height+2) occupancy grid; outputs are width*height, row-major.
void neighbor_counts(std::span<const std::uint8_t> padded, int width, int height,
                     std::span<std::uint8_t> expat_out, std::span<std::uint8_t> native_out);

/// Clears every cell with expiry <= now: tag -> 0, expiry -> `none`. Returns the count.
std::size_t expire(std::span<std::uint8_t> tags, std::span<std::int64_t> expiry, std::int64_t now,
                   std::int64_t none);

namespace scalar {
void neighbor_counts(std::span<const std::uint8_t> padded, int width, int height,
                     std::span<std::uint8_t> expat_out, std::span<std::uint8_t> native_out);
std::size_t expire(std::span<std::uint8_t> tags, std::span<std::int64_t> expiry, std::int64_t now,
                   std::int64_t none);
}  // namespace scalar

#if defined(SEGSIM_HAVE_AVX2)
namespace avx2 {
void neighbor_counts(std::span<const std::uint8_t> padded, int width, int height,
                     std::span<std::uint8_t> expat_out, std::span<std::uint8_t> native_out);
std::size_t expire(std::span<std::uint8_t> tags, std::span<std::int64_t> expiry, std::int64_t now,
                   std::int64_t none);
}  // namespace avx2
#endif

}  // namespace segsim::kernels
