#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcmb/numerics.hpp"

namespace gcmb {

/// Square M-QAM with unit average energy and per-axis Gray labelling.
///
/// A symbol is addressed by its index `re * side() + im`, where `re` and `im`
/// index the sorted PAM levels of the two axes. The bit label of a symbol is
/// the real-axis Gray code in the high bits followed by the imaginary-axis
/// Gray code in the low bits.
class Constellation {
 public:
  /// M must be one of 4, 16, 64, 256; anything else throws ConfigError.
  static Constellation qam(int order);

  int order() const noexcept { return order_; }
  int side() const noexcept { return side_; }
  int bits_per_axis() const noexcept { return bits_per_axis_; }
  int bits_per_symbol() const noexcept { return 2 * bits_per_axis_; }

  std::span<const double> pam_levels() const noexcept { return levels_; }
  std::span<const Complex> points() const noexcept { return points_; }

  Complex point(int symbol) const { return points_[static_cast<std::size_t>(symbol)]; }
  std::uint32_t label(int symbol) const { return labels_[static_cast<std::size_t>(symbol)]; }

  int symbol_from_axes(int re_index, int im_index) const noexcept {
    return re_index * side_ + im_index;
  }
  int re_index(int symbol) const noexcept { return symbol / side_; }
  int im_index(int symbol) const noexcept { return symbol % side_; }

  static std::uint32_t gray(std::uint32_t index) noexcept { return index ^ (index >> 1); }

 private:
  Constellation() = default;

  int order_ = 0;
  int side_ = 0;
  int bits_per_axis_ = 0;
  std::vector<double> levels_;
  std::vector<Complex> points_;
  std::vector<std::uint32_t> labels_;
};

/// Number of differing label bits between two symbols.
int bit_errors(const Constellation& c, int sent, int decided);

}  // namespace gcmb
