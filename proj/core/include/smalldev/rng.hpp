#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace smalldev {

/// Standard normal variates for one (seed, stream index) pair.
///
/// Every path owns its own stream keyed by its index, so a batch produces the
/// same values regardless of how indices are split across worker threads.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t index);

  double operator()() { return dist_(engine_); }

  void fill(std::span<double> out) {
    for (double& v : out) v = dist_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_;
};

/// Seed used when none is supplied: SMALLDEV_SEED if set, else a fixed constant.
std::uint64_t default_seed();

}  // namespace smalldev
