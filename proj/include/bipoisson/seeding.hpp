#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "bipoisson/linalg.hpp"

namespace bipoisson {

/// Seed of the random stream owned by (stage, index) under a master seed.
/// Streams are independent of evaluation order, so a parallel loop that
/// draws from stream i reproduces the serial loop bit for bit.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t index = 0);

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  Stream(std::uint64_t master, std::string_view stage, std::uint64_t index = 0)
      : engine_(derive_seed(master, stage, index)) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Vector normal_vector(int n);
  Vector uniform_vector(int n, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace bipoisson
