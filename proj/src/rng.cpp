#include "gcmb/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gcmb {

namespace {

// splitmix64 finaliser
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

SeededRng SeededRng::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return SeededRng(mix(mix(mix(seed) ^ a) ^ b));
}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SeededRng::below: n must be positive");
  if ((n & (n - 1)) == 0) return engine_() & (n - 1);
  // Rejection keeps the result unbiased for non power-of-two n.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double SeededRng::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex sample_complex_gaussian(SeededRng& rng, double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("sample_complex_gaussian: variance must be positive");
  }
  const double sigma = std::sqrt(variance / 2.0);
  const double re = rng.standard_normal();
  const double im = rng.standard_normal();
  return {sigma * re, sigma * im};
}

CMatrix sample_complex_gaussian_matrix(SeededRng& rng, Eigen::Index rows, Eigen::Index cols,
                                       double variance) {
  CMatrix out(rows, cols);
  // Row-major fill so the draw order reads naturally as Y_{1,1}, Y_{1,2}, ...
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = sample_complex_gaussian(rng, variance);
  return out;
}

}  // namespace gcmb
