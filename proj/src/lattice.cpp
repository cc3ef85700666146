#include "gcmb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gcmb {

void LatticeProblem::validate() const {
  const auto n = r.rows();
  if (n < 1 || r.cols() != n) throw DimensionError("lattice problem: R must be square and non-empty");
  if (y.size() != n) throw DimensionError("lattice problem: y length does not match R");
  if (static_cast<Eigen::Index>(levels.size()) != n) {
    throw DimensionError("lattice problem: need one level list per layer");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(r(i, i) > 0.0)) throw DimensionError("lattice problem: R diagonal must be positive");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (r(i, j) != 0.0) throw DimensionError("lattice problem: R must be upper triangular");
    }
  }
  for (const auto& layer : levels) {
    if (layer.empty()) throw ConfigError("lattice problem: empty level list");
    if (!std::is_sorted(layer.begin(), layer.end())) {
      throw ConfigError("lattice problem: level list must be sorted");
    }
  }
}

std::size_t round_to_levels_index(double v, std::span<const double> levels) {
  const auto it = std::lower_bound(levels.begin(), levels.end(), v);
  if (it == levels.begin()) return 0;
  if (it == levels.end()) return levels.size() - 1;
  const auto hi = static_cast<std::size_t>(it - levels.begin());
  const std::size_t lo = hi - 1;
  return (v - levels[lo] <= levels[hi] - v) ? lo : hi;
}

double round_to_levels(double v, std::span<const double> levels) {
  return levels[round_to_levels_index(v, levels)];
}

namespace {

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class Search {
 public:
  Search(const LatticeProblem& p, bool round_last, std::vector<double>* trace)
      : p_(p),
        n_(static_cast<int>(p.size())),
        round_last_(round_last),
        bottom_(round_last ? 1 : 0),
        trace_(trace),
        current_(static_cast<std::size_t>(n_), 0),
        best_(static_cast<std::size_t>(n_), 0),
        value_(static_cast<std::size_t>(n_), 0.0) {}

  LatticeSolution run() {
    if (n_ == 1 && round_last_) {
      // Nothing to enumerate: the single layer is rounded directly.
      ++stats_.nodes_visited;
      ++stats_.tree_nodes;
      finish_by_rounding(0.0);
    } else {
      descend(n_ - 1, 0.0);
    }

    LatticeSolution out;
    out.indices = best_;
    out.point.resize(n_);
    for (int i = 0; i < n_; ++i) out.point(i) = level(i, best_[static_cast<std::size_t>(i)]);
    out.metric = best_metric_;
    out.stats = stats_;
    return out;
  }

 private:
  double level(int layer, int index) const {
    return p_.levels[static_cast<std::size_t>(layer)][static_cast<std::size_t>(index)];
  }

  double center(int layer) const {
    double acc = p_.y(layer);
    for (int k = layer + 1; k < n_; ++k) acc -= p_.r(layer, k) * value_[static_cast<std::size_t>(k)];
    return acc / p_.r(layer, layer);
  }

  void set(int layer, int index) {
    current_[static_cast<std::size_t>(layer)] = index;
    value_[static_cast<std::size_t>(layer)] = level(layer, index);
  }

  void descend(int layer, double partial) {
    const auto levels = p_.levels[static_cast<std::size_t>(layer)];
    const double c = center(layer);
    const double diag = p_.r(layer, layer);
    const int count = static_cast<int>(levels.size());

    // Zig-zag outwards from the nearest level: visits levels in order of
    // non-decreasing distance, ties going to the smaller level.
    const int start = static_cast<int>(round_to_levels_index(c, levels));
    int lo = start - 1;
    int hi = start + 1;
    int next = start;
    while (true) {
      const double e = diag * (c - levels[static_cast<std::size_t>(next)]);
      const double d = partial + e * e;
      ++stats_.tree_nodes;
      if (layer == bottom_) ++stats_.nodes_visited;
      if (d > radius_ + kTieTolerance) break;

      set(layer, next);
      if (layer == bottom_) {
        if (round_last_) {
          finish_by_rounding(d);
        } else {
          leaf(d);
        }
      } else {
        descend(layer - 1, d);
      }

      const bool lo_ok = lo >= 0;
      const bool hi_ok = hi < count;
      if (!lo_ok && !hi_ok) break;
      if (lo_ok && (!hi_ok || c - levels[static_cast<std::size_t>(lo)] <=
                                  levels[static_cast<std::size_t>(hi)] - c)) {
        next = lo--;
      } else {
        next = hi++;
      }
    }
  }

  void finish_by_rounding(double partial) {
    const double c = center(0);
    const auto idx = static_cast<int>(round_to_levels_index(c, p_.levels[0]));
    const double e = p_.r(0, 0) * (c - level(0, idx));
    set(0, idx);
    leaf(partial + e * e);
  }

  void leaf(double metric) {
    ++stats_.leaves_evaluated;
    const bool better = metric < best_metric_ - kTieTolerance ||
                        (metric <= best_metric_ + kTieTolerance && lex_less(current_, best_));
    if (!better) return;
    best_ = current_;
    best_metric_ = metric;
    radius_ = std::min(radius_, metric);
    ++stats_.radius_updates;
    if (trace_ != nullptr) trace_->push_back(radius_);
  }

  const LatticeProblem& p_;
  int n_;
  bool round_last_;
  int bottom_;
  std::vector<double>* trace_;

  std::vector<int> current_;
  std::vector<int> best_;
  std::vector<double> value_;
  double best_metric_ = std::numeric_limits<double>::infinity();
  double radius_ = std::numeric_limits<double>::infinity();
  SearchStats stats_;
};

}  // namespace

LatticeSolution real_sd(const LatticeProblem& problem, bool round_last,
                        std::vector<double>* radius_trace) {
  problem.validate();
  return Search(problem, round_last, radius_trace).run();
}

LatticeSolution lattice_exhaustive(const LatticeProblem& problem) {
  problem.validate();
  const auto n = static_cast<std::size_t>(problem.size());
  std::size_t total = 1;
  for (const auto& layer : problem.levels) total *= layer.size();

  auto digits = [&](std::size_t candidate) {
    std::vector<int> idx(n);
    for (std::size_t i = n; i-- > 0;) {
      const std::size_t base = problem.levels[i].size();
      idx[i] = static_cast<int>(candidate % base);
      candidate /= base;
    }
    return idx;
  };
  auto point_of = [&](const std::vector<int>& idx) {
    RVector x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = problem.levels[i][static_cast<std::size_t>(idx[i])];
    return x;
  };

  const MlChoice best = exhaustive_ml(total, [&](std::size_t candidate) {
    return (problem.y - problem.r * point_of(digits(candidate))).squaredNorm();
  });

  LatticeSolution out;
  out.indices = digits(best.index);
  out.point = point_of(out.indices);
  out.metric = best.metric;
  out.stats.nodes_visited = total;
  out.stats.leaves_evaluated = total;
  out.stats.tree_nodes = total;
  return out;
}

}  // namespace gcmb
