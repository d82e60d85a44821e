#include "smalldev/rng.hpp"

#include <cstdlib>
#include <string>

namespace smalldev {

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x5eedu};
  engine_.seed(seq);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SMALLDEV_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 20240101ULL;
}

}  // namespace smalldev
