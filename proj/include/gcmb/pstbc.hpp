#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "gcmb/constellation.hpp"
#include "gcmb/golden.hpp"
#include "gcmb/numerics.hpp"

namespace gcmb {

/// Corner element of the shift matrix: i for S = 2, 4; e^{2 pi i / 3} for
/// S = 3; -e^{2 pi i / 3} for S = 6. Other S throw ConfigError.
Complex shift_corner(int dim);

/// Ones on the superdiagonal and `g` in the bottom-left corner.
CMatrix build_E(int dim, Complex g);

/// Phi_j for group j in 1..S: ones on the first S+1-j diagonal entries, g on the rest.
CMatrix phi_matrix(int dim, int group, Complex g);

/// Perfect code description: dimension, unitary generator and shift matrix.
class PerfectCodeSpec {
 public:
  /// The Golden Code as the S = 2 case.
  static PerfectCodeSpec golden();

  /// Validates dim, |g| = 1, g against the table for dim, and G G^H = I
  /// within 1e-10. Violations throw ConfigError.
  static PerfectCodeSpec from_generator(int dim, Complex g, CMatrix generator);

  int dim() const noexcept { return dim_; }
  Complex g() const noexcept { return g_; }
  const CMatrix& generator() const noexcept { return generator_; }
  const CMatrix& shift() const noexcept { return shift_; }

  /// Realness gate for the effective R: 1e-10 for S = 2, 1e-8 otherwise.
  double realness_tolerance() const noexcept { return dim_ == 2 ? 1e-10 : 1e-8; }

 private:
  PerfectCodeSpec(int dim, Complex g, CMatrix generator);

  int dim_;
  Complex g_;
  CMatrix generator_;
  CMatrix shift_;
};

/// Generator file: first line "S g_re g_im", then S rows of 2S reals
/// (re im pairs). Numbers are parsed with from_chars, independent of locale.
PerfectCodeSpec parse_generator(std::istream& in);
PerfectCodeSpec load_generator_file(const std::filesystem::path& path);

/// X = sum_j diag(G x_j) E^{j-1}. `x` holds S vectors of S symbols.
CMatrix pstbc_encode(const PerfectCodeSpec& spec, std::span<const CVector> x);

/// Group j (0-based here) collects Y(k, (k + j) mod S) for k = 0..S-1.
std::vector<CVector> pcmb_group(const CMatrix& y, int dim);

/// QR of Lambda G for a general perfect code, with the realness report.
EffectiveChannel pcmb_effective_channel(const RVector& lambda, const PerfectCodeSpec& spec);

/// Beamformed perfect-code decoder. Throws UnsupportedDimensionError when the
/// effective R fails the realness gate (always the case for S = 3, 6).
DecodeResult pcmb_decode(const CMatrix& y, const RVector& lambda, const PerfectCodeSpec& spec,
                         const Constellation& c);

}  // namespace gcmb
