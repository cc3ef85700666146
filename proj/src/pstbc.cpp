#include "gcmb/pstbc.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "gcmb/errors.hpp"

namespace gcmb {

namespace {

void require_dimension(int dim) {
  if (dim != 2 && dim != 3 && dim != 4 && dim != 6) {
    throw ConfigError("perfect code dimension " + std::to_string(dim) + " not in {2,3,4,6}");
  }
}

}  // namespace

Complex shift_corner(int dim) {
  require_dimension(dim);
  const Complex cube_root = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  switch (dim) {
    case 3: return cube_root;
    case 6: return -cube_root;
    default: return kI;
  }
}

CMatrix build_E(int dim, Complex g) {
  require_dimension(dim);
  CMatrix e = CMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) e(k, k + 1) = 1.0;
  e(dim - 1, 0) = g;
  return e;
}

CMatrix phi_matrix(int dim, int group, Complex g) {
  require_dimension(dim);
  if (group < 1 || group > dim) throw ConfigError("phi_matrix: group index out of range");
  CMatrix phi = CMatrix::Identity(dim, dim);
  for (int k = dim + 2 - group; k <= dim; ++k) phi(k - 1, k - 1) = g;
  return phi;
}

PerfectCodeSpec::PerfectCodeSpec(int dim, Complex g, CMatrix generator)
    : dim_(dim), g_(g), generator_(std::move(generator)), shift_(build_E(dim, g)) {}

PerfectCodeSpec PerfectCodeSpec::golden() {
  return PerfectCodeSpec(2, kI, GoldenConstants::get().g);
}

PerfectCodeSpec PerfectCodeSpec::from_generator(int dim, Complex g, CMatrix generator) {
  require_dimension(dim);
  if (generator.rows() != dim || generator.cols() != dim) {
    throw ConfigError("generator must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (!all_finite(generator)) throw ConfigError("generator contains non-finite entries");
  if (std::abs(std::abs(g) - 1.0) > 1e-10) throw ConfigError("shift corner g must have unit magnitude");
  if (std::abs(g - shift_corner(dim)) > 1e-9) {
    throw ConfigError("shift corner g does not match the value for dimension " + std::to_string(dim));
  }
  const double err = unitarity_error(generator);
  if (err > 1e-10) {
    throw ConfigError("generator is not unitary (||G G^H - I|| = " + std::to_string(err) + ")");
  }
  return PerfectCodeSpec(dim, g, std::move(generator));
}

namespace {

double parse_number(const std::string& token, int line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("generator file line " + std::to_string(line) + ": bad number '" + token + "'");
  }
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

PerfectCodeSpec parse_generator(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("generator file is empty");
  const auto head = tokens(line);
  if (head.size() != 3) throw ConfigError("generator file line 1: expected 'S g_re g_im'");
  const double dim_value = parse_number(head[0], 1);
  const int dim = static_cast<int>(dim_value);
  if (dim_value != dim) throw ConfigError("generator file line 1: S must be an integer");
  require_dimension(dim);
  const Complex g(parse_number(head[1], 1), parse_number(head[2], 1));

  CMatrix generator(dim, dim);
  for (int row = 0; row < dim; ++row) {
    if (!std::getline(in, line)) {
      throw ConfigError("generator file: expected " + std::to_string(dim) + " matrix rows");
    }
    const auto t = tokens(line);
    if (static_cast<int>(t.size()) != 2 * dim) {
      throw ConfigError("generator file line " + std::to_string(row + 2) + ": expected " +
                        std::to_string(2 * dim) + " numbers");
    }
    for (int col = 0; col < dim; ++col) {
      generator(row, col) = Complex(parse_number(t[static_cast<std::size_t>(2 * col)], row + 2),
                                    parse_number(t[static_cast<std::size_t>(2 * col + 1)], row + 2));
    }
  }
  while (std::getline(in, line)) {
    if (!tokens(line).empty()) throw ConfigError("generator file: trailing content after matrix");
  }
  return PerfectCodeSpec::from_generator(dim, g, std::move(generator));
}

PerfectCodeSpec load_generator_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open generator file " + path.string());
  return parse_generator(in);
}

CMatrix pstbc_encode(const PerfectCodeSpec& spec, std::span<const CVector> x) {
  const int dim = spec.dim();
  if (static_cast<int>(x.size()) != dim) {
    throw DimensionError("pstbc_encode: expected " + std::to_string(dim) + " symbol vectors");
  }
  CMatrix out = CMatrix::Zero(dim, dim);
  CMatrix shift_power = CMatrix::Identity(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const CVector& xj = x[static_cast<std::size_t>(j)];
    if (xj.size() != dim) throw DimensionError("pstbc_encode: symbol vector length mismatch");
    const CVector gx = spec.generator() * xj;
    out += gx.asDiagonal() * shift_power;
    shift_power = shift_power * spec.shift();
  }
  return out;
}

std::vector<CVector> pcmb_group(const CMatrix& y, int dim) {
  if (y.rows() != dim || y.cols() != dim) throw DimensionError("pcmb_group: Y must be SxS");
  std::vector<CVector> groups(static_cast<std::size_t>(dim), CVector(dim));
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) groups[static_cast<std::size_t>(j)](k) = y(k, (k + j) % dim);
  return groups;
}

EffectiveChannel pcmb_effective_channel(const RVector& lambda, const PerfectCodeSpec& spec) {
  const int dim = spec.dim();
  if (lambda.size() != dim) throw DimensionError("pcmb: expected S singular values");
  for (int k = 1; k < dim; ++k) {
    if (lambda(k - 1) < lambda(k)) throw DimensionError("pcmb: singular values must be decreasing");
  }
  if (!(lambda(dim - 1) > 1e-12)) {
    throw DegenerateChannelError("pcmb: smallest singular value " + std::to_string(lambda(dim - 1)) +
                                 " is numerically zero");
  }
  const QrFactors f = qr(lambda.cast<Complex>().asDiagonal() * spec.generator());
  return {f.q, f.r.real(), max_abs_imag(f.r)};
}

DecodeResult pcmb_decode(const CMatrix& y, const RVector& lambda, const PerfectCodeSpec& spec,
                         const Constellation& c) {
  const int dim = spec.dim();
  if (dim == 3 || dim == 6) {
    throw UnsupportedDimensionError("pcmb: dimension " + std::to_string(dim) +
                                    " needs complex-valued search, not supported");
  }
  const EffectiveChannel ch = pcmb_effective_channel(lambda, spec);
  if (ch.max_imag > spec.realness_tolerance()) {
    throw UnsupportedDimensionError("pcmb: effective R is complex (max |Im R| = " +
                                    std::to_string(ch.max_imag) + ")");
  }
  std::vector<CVector> groups = pcmb_group(y, dim);
  const CMatrix qh = ch.q.adjoint();
  for (int j = 0; j < dim; ++j) {
    const CMatrix phi = phi_matrix(dim, j + 1, spec.g());
    groups[static_cast<std::size_t>(j)] = qh * (phi.adjoint() * groups[static_cast<std::size_t>(j)]);
  }
  return decode_rotated_groups(groups, ch.r, c);
}

}  // namespace gcmb
