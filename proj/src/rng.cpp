#include "segsim/rng.hpp"

#include <cassert>

namespace segsim {

std::uint64_t Rng::below(std::uint64_t n) {
  assert(n > 0);
  // Values below `threshold` would make x % n non-uniform.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

}  // namespace segsim
