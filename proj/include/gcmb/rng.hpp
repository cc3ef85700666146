#pragma once

#include <cstdint>
#include <random>

#include "gcmb/numerics.hpp"

namespace gcmb {

/// Deterministic random source. Wraps std::mt19937_64, whose output sequence is
/// fixed by the standard, and does its own uniform/normal transforms so results
/// do not depend on the standard library's distribution implementations.
///
/// Single owner: parallel work derives independent children with derive().
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  /// Child stream keyed by (seed, a, b), e.g. (run seed, SNR index, trial index).
  static SeededRng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double standard_normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Circularly symmetric complex Gaussian; real and imaginary parts each carry
/// variance / 2. Throws std::invalid_argument unless variance > 0.
Complex sample_complex_gaussian(SeededRng& rng, double variance);

/// rows x cols matrix of i.i.d. complex Gaussian entries.
CMatrix sample_complex_gaussian_matrix(SeededRng& rng, Eigen::Index rows, Eigen::Index cols,
                                       double variance);

}  // namespace gcmb
