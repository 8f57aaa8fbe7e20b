#include <immintrin.h>

#include "segsim/kernels.hpp"

namespace segsim::kernels::avx2 {

namespace {

inline __m256i load(const std::uint8_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

}  // namespace

void neighbor_counts(std::span<const std::uint8_t> padded, int width, int height,
                     std::span<std::uint8_t> expat_out, std::span<std::uint8_t> native_out) {
  const auto stride = static_cast<std::size_t>(width) + 2;
  const __m256i one = _mm256_set1_epi8(1);
  const __m256i two = _mm256_set1_epi8(2);

  for (int y = 0; y < height; ++y) {
    const std::uint8_t* up = padded.data() + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* mid = up + stride;
    const std::uint8_t* down = mid + stride;
    std::uint8_t* eo = expat_out.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
    std::uint8_t* no = native_out.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width);

    int x = 0;
    // Loads reach column x+33 of the padded row, which exists while x+32 <= width.
    for (; x + 32 <= width; x += 32) {
      const __m256i ring[8] = {load(up + x),  load(up + x + 1),   load(up + x + 2),
                               load(mid + x), load(mid + x + 2),  load(down + x),
                               load(down + x + 1), load(down + x + 2)};
      __m256i e = _mm256_setzero_si256();
      __m256i n = _mm256_setzero_si256();
      for (const __m256i& v : ring) {
        // cmpeq yields 0xFF (= -1) per matching byte.
        e = _mm256_sub_epi8(e, _mm256_cmpeq_epi8(v, one));
        n = _mm256_sub_epi8(n, _mm256_cmpeq_epi8(v, two));
      }
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(eo + x), e);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(no + x), n);
    }
    for (; x < width; ++x) {
      const std::uint8_t ring[8] = {up[x],  up[x + 1],   up[x + 2],   mid[x],
                                    mid[x + 2], down[x], down[x + 1], down[x + 2]};
      std::uint8_t e = 0;
      std::uint8_t n = 0;
      for (const std::uint8_t v : ring) {
        e += static_cast<std::uint8_t>(v == 1);
        n += static_cast<std::uint8_t>(v == 2);
      }
      eo[x] = e;
      no[x] = n;
    }
  }
}

std::size_t expire(std::span<std::uint8_t> tags, std::span<std::int64_t> expiry, std::int64_t now,
                   std::int64_t none) {
  std::size_t cleared = 0;
  const std::size_t n = expiry.size();
  const __m256i now_v = _mm256_set1_epi64x(now);
  const __m256i none_v = _mm256_set1_epi64x(none);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    auto* p = reinterpret_cast<__m256i*>(expiry.data() + i);
    const __m256i v = _mm256_loadu_si256(p);
    // Lanes with expiry <= now are the complement of expiry > now.
    const __m256i keep = _mm256_cmpgt_epi64(v, now_v);
    const int keep_bits = _mm256_movemask_pd(_mm256_castsi256_pd(keep));
    if (keep_bits == 0xF) continue;
    _mm256_storeu_si256(p, _mm256_blendv_epi8(none_v, v, keep));
    for (int lane = 0; lane < 4; ++lane) {
      if ((keep_bits & (1 << lane)) == 0) {
        tags[i + static_cast<std::size_t>(lane)] = 0;
        ++cleared;
      }
    }
  }
  for (; i < n; ++i) {
    if (expiry[i] <= now) {
      expiry[i] = none;
      tags[i] = 0;
      ++cleared;
    }
  }
  return cleared;
}

}  // namespace segsim::kernels::avx2
