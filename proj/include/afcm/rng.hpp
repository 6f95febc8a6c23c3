#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace afcm {

/// One master seed, many named substreams. Every randomized phase of a run
/// pulls its own stream by label, so reconfiguring one phase never shifts
/// the draws of another.
class RngPool {
 public:
  explicit RngPool(std::uint64_t master_seed) : master_(master_seed) {}

  /// Fresh engine for the given label. Same (seed, label) -> same stream.
  std::mt19937_64 stream(std::string_view label) const;

  std::uint64_t master_seed() const { return master_; }

 private:
  std::uint64_t master_;
};

std::uint64_t fnv1a64(std::string_view s);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& gen);

/// Uniform double in (0, 1); never returns 0 (safe to take logs).
double uniform_open01(std::mt19937_64& gen);

/// Standard normal via Box-Muller. Two uniforms consumed per value; no
/// cached spare, so the stream position is a pure function of call count.
double standard_normal(std::mt19937_64& gen);

}  // namespace afcm
