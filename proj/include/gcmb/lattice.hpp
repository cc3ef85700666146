#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gcmb/errors.hpp"
#include "gcmb/numerics.hpp"

namespace gcmb {

/// Two metrics closer than this are treated as equal and the lexicographically
/// smaller candidate wins. Shared by every decoder and every oracle.
inline constexpr double kTieTolerance = 1e-9;

struct SearchStats {
  /// Candidates reached on the deepest enumerated layer. Each full assignment of
  /// the enumerated layers is reached at most once, so this is bounded by the
  /// product of the enumerated layers' level counts.
  std::uint64_t nodes_visited = 0;
  /// Complete candidates whose metric was compared against the radius.
  std::uint64_t leaves_evaluated = 0;
  std::uint64_t radius_updates = 0;
  /// Candidates reached on any enumerated layer (the conventional tree count).
  std::uint64_t tree_nodes = 0;
};

/// min ||y - R x||^2 over x in levels[0] x ... x levels[L-1].
///
/// Row 0 of R is the layer solved last. `levels` are non-owning views; the
/// caller keeps the underlying storage alive for the duration of the search.
struct LatticeProblem {
  RMatrix r;
  RVector y;
  std::vector<std::span<const double>> levels;

  Eigen::Index size() const noexcept { return r.rows(); }
  /// Throws ConfigError for empty or unsorted levels and DimensionError for
  /// shape problems or a non-positive diagonal.
  void validate() const;
};

struct LatticeSolution {
  std::vector<int> indices;  // chosen level index per layer
  RVector point;
  double metric = 0.0;
  SearchStats stats;
};

/// Index of the nearest level; an exact midpoint goes to the smaller level.
std::size_t round_to_levels_index(double v, std::span<const double> levels);
double round_to_levels(double v, std::span<const double> levels);

/// Depth-first sphere decoder with Schnorr-Euchner ordering and an infinite
/// initial radius. With `round_last`, layer 0 is not enumerated: given the
/// other layers its cost is a one-dimensional nearest-level problem, so
/// rounding keeps the search exact.
///
/// `radius_trace`, when given, receives the radius after every update.
LatticeSolution real_sd(const LatticeProblem& problem, bool round_last,
                        std::vector<double>* radius_trace = nullptr);

struct MlChoice {
  std::size_t index = 0;
  double metric = 0.0;
};

/// Global minimiser of `metric` over candidate indices [0, count). Ties within
/// kTieTolerance go to the lower index.
template <typename Metric>
  requires std::invocable<Metric&, std::size_t>
MlChoice exhaustive_ml(std::size_t count, Metric&& metric) {
  if (count == 0) throw ConfigError("exhaustive_ml: empty candidate set");
  MlChoice best{0, static_cast<double>(metric(std::size_t{0}))};
  for (std::size_t i = 1; i < count; ++i) {
    const double m = metric(i);
    if (m < best.metric - kTieTolerance) best = {i, m};
  }
  return best;
}

/// Brute-force solution of a LatticeProblem over the full level grid; layer 0
/// is the most significant digit of the candidate ordering.
LatticeSolution lattice_exhaustive(const LatticeProblem& problem);

}  // namespace gcmb
