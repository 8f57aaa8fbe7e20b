#include "segsim/kernels.hpp"

namespace segsim::kernels::scalar {

void neighbor_counts(std::span<const std::uint8_t> padded, int width, int height,
                     std::span<std::uint8_t> expat_out, std::span<std::uint8_t> native_out) {
  const auto stride = static_cast<std::size_t>(width) + 2;
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* up = padded.data() + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* mid = up + stride;
    const std::uint8_t* down = mid + stride;
    const auto out_row = static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
    for (int x = 0; x < width; ++x) {
      const std::uint8_t ring[8] = {up[x], up[x + 1],   up[x + 2],   mid[x],
                                    mid[x + 2], down[x], down[x + 1], down[x + 2]};
      std::uint8_t e = 0;
      std::uint8_t n = 0;
      for (const std::uint8_t v : ring) {
        e += static_cast<std::uint8_t>(v == 1);
        n += static_cast<std::uint8_t>(v == 2);
      }
      expat_out[out_row + static_cast<std::size_t>(x)] = e;
      native_out[out_row + static_cast<std::size_t>(x)] = n;
    }
  }
}

std::size_t expire(std::span<std::uint8_t> tags, std::span<std::int64_t> expiry, std::int64_t now,
                   std::int64_t none) {
  std::size_t cleared = 0;
  for (std::size_t i = 0; i < expiry.size(); ++i) {
    if (expiry[i] <= now) {
      expiry[i] = none;
      tags[i] = 0;
      ++cleared;
    }
  }
  return cleared;
}

}  // namespace segsim::kernels::scalar
