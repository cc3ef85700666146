#include "gcmb/golden.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gcmb/errors.hpp"

namespace gcmb {

namespace {

GoldenConstants make_constants() {
  GoldenConstants k{};
  k.alpha = std::numbers::phi;
  k.beta = 1.0 - std::numbers::phi;
  k.inv_sqrt5 = 1.0 / std::sqrt(5.0);
  const double s = k.inv_sqrt5;
  k.g.resize(2, 2);
  k.g << Complex(s, k.beta * s), Complex(k.alpha * s, -s),
         Complex(s, k.alpha * s), Complex(k.beta * s, -s);
  k.e.resize(2, 2);
  k.e << 0.0, 1.0,
         kI, 0.0;
  return k;
}

}  // namespace

const GoldenConstants& GoldenConstants::get() {
  static const GoldenConstants constants = make_constants();
  return constants;
}

SymbolPair SymbolPair::from_symbols(const Constellation& c, std::span<const int> symbols) {
  if (symbols.size() != 4) throw DimensionError("SymbolPair: expected four symbols");
  SymbolPair p;
  p.x1 = {c.point(symbols[0]), c.point(symbols[1])};
  p.x2 = {c.point(symbols[2]), c.point(symbols[3])};
  return p;
}

CMatrix golden_encode(const SymbolPair& pair) {
  const auto& k = GoldenConstants::get();
  const double s = k.inv_sqrt5;
  // (1+i beta)/sqrt5, (alpha-i)/sqrt5, (i-alpha)/sqrt5, (1+i alpha)/sqrt5, (beta-i)/sqrt5
  const Complex one_i_beta(s, k.beta * s);
  const Complex alpha_minus_i(k.alpha * s, -s);
  const Complex i_minus_alpha(-(k.alpha * s), s);
  const Complex one_i_alpha(s, k.alpha * s);
  const Complex beta_minus_i(k.beta * s, -s);

  const auto [s1, s2] = pair.x1;
  const auto [s3, s4] = pair.x2;
  CMatrix x(2, 2);
  x(0, 0) = one_i_beta * s1 + alpha_minus_i * s2;
  x(0, 1) = one_i_beta * s3 + alpha_minus_i * s4;
  x(1, 0) = i_minus_alpha * s3 + one_i_beta * s4;
  x(1, 1) = one_i_alpha * s1 + beta_minus_i * s2;
  return x;
}

CMatrix golden_encode_lattice(const SymbolPair& pair) {
  const auto& k = GoldenConstants::get();
  CVector x1(2), x2(2);
  x1 << pair.x1[0], pair.x1[1];
  x2 << pair.x2[0], pair.x2[1];
  const CVector gx1 = k.g * x1;
  const CVector gx2 = k.g * x2;
  return CMatrix(gx1.asDiagonal()) + gx2.asDiagonal() * k.e;
}

DecoupledReceive receive_decompose(const CMatrix& y) {
  if (y.rows() != 2 || y.cols() != 2) throw DimensionError("receive_decompose: expected 2x2 Y");
  DecoupledReceive out;
  out.y1.resize(2);
  out.y2.resize(2);
  out.y1 << y(0, 0), y(1, 1);
  out.y2 << y(0, 1), y(1, 0);
  out.phi = CMatrix::Identity(2, 2);
  out.phi(1, 1) = kI;
  return out;
}

EffectiveChannel effective_channel(const RVector& lambda) {
  if (lambda.size() != 2) throw DimensionError("effective_channel: expected two singular values");
  if (lambda(0) < lambda(1)) {
    throw DimensionError("effective_channel: singular values must be in decreasing order");
  }
  if (!(lambda(1) > 1e-12)) {
    throw DegenerateChannelError("effective_channel: smallest singular value " +
                                 std::to_string(lambda(1)) + " is numerically zero");
  }
  const auto& k = GoldenConstants::get();
  const QrFactors f = qr(lambda.cast<Complex>().asDiagonal() * k.g);
  return {f.q, f.r.real(), max_abs_imag(f.r)};
}

LatticeProblem RealSubsystem::problem() const {
  return {r, y, std::vector<std::span<const double>>(static_cast<std::size_t>(r.rows()), levels)};
}

std::pair<RealSubsystem, RealSubsystem> split_real(const CVector& ytilde, const RMatrix& r,
                                                   std::span<const double> levels) {
  if (ytilde.size() != r.rows()) throw DimensionError("split_real: ytilde length does not match R");
  return {RealSubsystem{r, ytilde.real(), levels}, RealSubsystem{r, ytilde.imag(), levels}};
}

std::uint64_t DecodeResult::max_nodes() const {
  std::uint64_t m = 0;
  for (const auto& s : stats) m = std::max(m, s.nodes_visited);
  return m;
}

std::uint64_t DecodeResult::total_nodes() const {
  std::uint64_t t = 0;
  for (const auto& s : stats) t += s.nodes_visited;
  return t;
}

DecodeResult decode_rotated_groups(std::span<const CVector> rotated, const RMatrix& r,
                                   const Constellation& c) {
  const auto dim = static_cast<std::size_t>(r.rows());
  DecodeResult out;
  out.symbols.reserve(dim * rotated.size());
  out.stats.reserve(2 * rotated.size());
  for (const CVector& yt : rotated) {
    const auto [re_sys, im_sys] = split_real(yt, r, c.pam_levels());
    const LatticeSolution re = real_sd(re_sys.problem(), true);
    const LatticeSolution im = real_sd(im_sys.problem(), true);
    for (std::size_t k = 0; k < dim; ++k) out.symbols.push_back(c.symbol_from_axes(re.indices[k], im.indices[k]));
    out.metric += re.metric + im.metric;
    out.stats.push_back(re.stats);
    out.stats.push_back(im.stats);
  }
  return out;
}

DecodeResult gcmb_decode(const CMatrix& y, const RVector& lambda, const Constellation& c) {
  const EffectiveChannel ch = effective_channel(lambda);
  if (ch.max_imag > kGoldenRealnessTolerance) {
    throw UnsupportedDimensionError("gcmb_decode: effective R has imaginary part " +
                                    std::to_string(ch.max_imag));
  }
  const DecoupledReceive parts = receive_decompose(y);
  const std::array<CVector, 2> rotated{ch.q.adjoint() * parts.y1,
                                       ch.q.adjoint() * (parts.phi.adjoint() * parts.y2)};
  return decode_rotated_groups(rotated, ch.r, c);
}

GoldenCodebook::GoldenCodebook(const Constellation& c) : constellation_(c) {
  const auto m = static_cast<std::size_t>(c.order());
  codewords_.reserve(m * m * m * m);
  for (std::size_t index = 0; index < m * m * m * m; ++index) {
    const auto s = symbols(index);
    codewords_.emplace_back(golden_encode(SymbolPair::from_symbols(c, s)));
  }
}

std::array<int, 4> GoldenCodebook::symbols(std::size_t index) const {
  const auto m = static_cast<std::size_t>(constellation_.order());
  std::array<int, 4> s{};
  for (std::size_t k = 4; k-- > 0;) {
    s[k] = static_cast<int>(index % m);
    index /= m;
  }
  return s;
}

DecodeResult gc_ml_decode(const CMatrix& y, const CMatrix& h, const GoldenCodebook& book) {
  if (y.rows() != 2 || y.cols() != 2 || h.rows() != 2 || h.cols() != 2) {
    throw DimensionError("gc_ml_decode: expected 2x2 Y and H");
  }
  const Eigen::Matrix2cd yf = y;
  const Eigen::Matrix2cd hf = h;
  const MlChoice best = exhaustive_ml(book.size(), [&](std::size_t i) {
    return (yf - hf * book.codeword(i)).squaredNorm();
  });
  DecodeResult out;
  const auto s = book.symbols(best.index);
  out.symbols.assign(s.begin(), s.end());
  out.metric = best.metric;
  SearchStats stats;
  stats.nodes_visited = book.size();
  stats.leaves_evaluated = book.size();
  stats.tree_nodes = book.size();
  out.stats.push_back(stats);
  return out;
}

}  // namespace gcmb
