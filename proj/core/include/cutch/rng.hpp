// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace cutch {

// SplitMix64: reproducible across platforms, used for initial data and for
// parameter sampling (with an independent stream tag).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): next_u64() / 2^64.
  double next_double() { return static_cast<double>(next_u64()) * 0x1.0p-64; }

 private:
  std::uint64_t state_;
};

// Stream tags separating parameter sampling from initial-condition sampling
// (seed XOR tag seeds the stream).
inline constexpr std::uint64_t kParameterStreamTag = 0xC07F3A9D2B581E44ULL;
inline constexpr std::uint64_t kTestParameterStreamTag = 0x9D41E6B8523AFC07ULL;

}  // namespace cutch
