#include "gcmb/constellation.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "gcmb/errors.hpp"

namespace gcmb {

Constellation Constellation::qam(int order) {
  int side = 0;
  switch (order) {
    case 4: side = 2; break;
    case 16: side = 4; break;
    case 64: side = 8; break;
    case 256: side = 16; break;
    default:
      throw ConfigError("unsupported QAM order " + std::to_string(order) +
                        " (expected 4, 16, 64 or 256)");
  }

  Constellation c;
  c.order_ = order;
  c.side_ = side;
  c.bits_per_axis_ = std::countr_zero(static_cast<unsigned>(side));

  // Odd-integer grid scaled so that E|s|^2 = 2 (M-1)/3 * scale^2 = 1.
  const double scale = std::sqrt(3.0 / (2.0 * (order - 1)));
  c.levels_.reserve(static_cast<std::size_t>(side));
  for (int i = 0; i < side; ++i) c.levels_.push_back((2 * i - (side - 1)) * scale);

  c.points_.reserve(static_cast<std::size_t>(order));
  c.labels_.reserve(static_cast<std::size_t>(order));
  for (int re = 0; re < side; ++re) {
    for (int im = 0; im < side; ++im) {
      c.points_.emplace_back(c.levels_[static_cast<std::size_t>(re)],
                             c.levels_[static_cast<std::size_t>(im)]);
      c.labels_.push_back((gray(static_cast<std::uint32_t>(re)) << c.bits_per_axis_) |
                          gray(static_cast<std::uint32_t>(im)));
    }
  }
  return c;
}

int bit_errors(const Constellation& c, int sent, int decided) {
  return std::popcount(c.label(sent) ^ c.label(decided));
}

}  // namespace gcmb
