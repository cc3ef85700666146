#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gcmb/constellation.hpp"
#include "gcmb/lattice.hpp"
#include "gcmb/numerics.hpp"

namespace gcmb {

/// Golden Code constants. Built once; every encoder form reads the same values.
struct GoldenConstants {
  double alpha;      // (1 + sqrt 5) / 2
  double beta;       // (1 - sqrt 5) / 2
  double inv_sqrt5;
  CMatrix g;         // generator, 1/sqrt5 included
  CMatrix e;         // [[0, 1], [i, 0]]

  static const GoldenConstants& get();
};

/// x1 = (s1, s2), x2 = (s3, s4).
struct SymbolPair {
  std::array<Complex, 2> x1{};
  std::array<Complex, 2> x2{};

  static SymbolPair from_symbols(const Constellation& c, std::span<const int> symbols);
};

/// Entry-by-entry codeword formula.
CMatrix golden_encode(const SymbolPair& pair);

/// X = diag(G x1) + diag(G x2) E.
CMatrix golden_encode_lattice(const SymbolPair& pair);

/// y1 = (Y11, Y22) sees Lambda G x1; y2 = (Y12, Y21) sees Phi Lambda G x2.
struct DecoupledReceive {
  CVector y1;
  CVector y2;
  CMatrix phi;  // diag(1, i)
};

DecoupledReceive receive_decompose(const CMatrix& y);

/// QR of Lambda G, with R returned as a real matrix once realness is checked.
struct EffectiveChannel {
  CMatrix q;
  RMatrix r;
  double max_imag = 0.0;  // max |Im R_jk| before the imaginary part was dropped
};

/// Singular values must satisfy lambda_1 >= lambda_2 > 1e-12; a smaller
/// lambda_2 throws DegenerateChannelError.
EffectiveChannel effective_channel(const RVector& lambda);

/// Real-valued 2D (or S-dimensional) subsystem R x = y over PAM levels.
struct RealSubsystem {
  RMatrix r;
  RVector y;
  std::span<const double> levels;

  LatticeProblem problem() const;
};

/// Splits R x + n into its real-part and imaginary-part systems.
std::pair<RealSubsystem, RealSubsystem> split_real(const CVector& ytilde, const RMatrix& r,
                                                   std::span<const double> levels);

struct DecodeResult {
  std::vector<int> symbols;        // s1, s2, ... in codeword order
  double metric = 0.0;             // total squared distance of the decision
  std::vector<SearchStats> stats;  // one entry per searched subsystem

  std::uint64_t max_nodes() const;
  std::uint64_t total_nodes() const;
};

/// Realness threshold for the Golden generator's effective R.
inline constexpr double kGoldenRealnessTolerance = 1e-10;

/// Decodes already-rotated groups ytilde_j = R x_j + n_j, j = 0..S-1, by two
/// real searches per group with last-layer rounding.
DecodeResult decode_rotated_groups(std::span<const CVector> rotated, const RMatrix& r,
                                   const Constellation& c);

/// Beamformed Golden Code decoder for Y = Lambda X + N.
DecodeResult gcmb_decode(const CMatrix& y, const RVector& lambda, const Constellation& c);

/// Every Golden codeword of a constellation, indexed lexicographically by
/// (s1, s2, s3, s4).
class GoldenCodebook {
 public:
  explicit GoldenCodebook(const Constellation& c);

  const Constellation& constellation() const noexcept { return constellation_; }
  std::size_t size() const noexcept { return codewords_.size(); }
  const Eigen::Matrix2cd& codeword(std::size_t index) const { return codewords_[index]; }
  std::array<int, 4> symbols(std::size_t index) const;

 private:
  Constellation constellation_;
  std::vector<Eigen::Matrix2cd, Eigen::aligned_allocator<Eigen::Matrix2cd>> codewords_;
};

/// Exhaustive joint ML over the codebook for Y = H X + N with an arbitrary
/// 2x2 channel H (pass Lambda for the beamformed link).
DecodeResult gc_ml_decode(const CMatrix& y, const CMatrix& h, const GoldenCodebook& book);

}  // namespace gcmb
