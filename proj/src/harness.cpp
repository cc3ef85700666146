#include "gcmb/harness.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "gcmb/channel.hpp"
#include "gcmb/constellation.hpp"
#include "gcmb/errors.hpp"
#include "gcmb/golden.hpp"
#include "gcmb/pstbc.hpp"
#include "gcmb/rng.hpp"

namespace gcmb {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::gcmb: return "gcmb";
    case Scheme::gc_ml: return "gc-ml";
    case Scheme::pcmb: return "pcmb";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "gcmb") return Scheme::gcmb;
  if (name == "gc-ml") return Scheme::gc_ml;
  if (name == "pcmb") return Scheme::pcmb;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected gcmb, gc-ml or pcmb)");
}

void SimConfig::validate() const {
  Constellation::qam(order);  // throws on unsupported M
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (snr_db.empty()) throw ConfigError("SNR list is empty");
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    if (!std::isfinite(snr_db[i])) throw ConfigError("SNR values must be finite");
    if (i > 0 && !(snr_db[i] > snr_db[i - 1])) throw ConfigError("SNR list must be strictly increasing");
  }
  switch (scheme) {
    case Scheme::gcmb:
      if (dim != 2) throw ConfigError("gcmb is defined for dimension 2 only");
      break;
    case Scheme::gc_ml:
      if (dim != 2) throw ConfigError("gc-ml is defined for dimension 2 only");
      if (order > 16) throw ConfigError("gc-ml runs an exhaustive M^4 search; M must be at most 16");
      break;
    case Scheme::pcmb:
      if (dim != 2 && dim != 4) throw ConfigError("pcmb decoding supports dimensions 2 and 4");
      if (dim == 4 && !generator) throw ConfigError("pcmb with dimension 4 needs --generator");
      break;
  }
}

std::vector<double> SimConfig::snr_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("SNR step must be positive");
  if (!(stop >= start)) throw ConfigError("SNR stop must not be below SNR start");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double v = start + k * step;
    if (v > stop + 1e-9) break;
    grid.push_back(v);
  }
  return grid;
}

std::uint64_t bits_per_codeword(int dim, int order) {
  return static_cast<std::uint64_t>(dim * dim) *
         static_cast<std::uint64_t>(std::countr_zero(static_cast<unsigned>(order)));
}

namespace {

constexpr std::uint64_t kBatch = 2048;

struct TrialOutcome {
  std::uint64_t bit_errors = 0;
  std::array<std::uint64_t, 8> nodes{};
  int searches = 0;
};

class TrialRunner {
 public:
  explicit TrialRunner(const SimConfig& cfg)
      : cfg_(cfg), constellation_(Constellation::qam(cfg.order)) {
    if (cfg.scheme == Scheme::gc_ml) codebook_.emplace(constellation_);
    if (cfg.scheme == Scheme::pcmb) {
      spec_.emplace(cfg.generator ? load_generator_file(*cfg.generator) : PerfectCodeSpec::golden());
      if (spec_->dim() != cfg.dim) {
        throw ConfigError("generator file dimension " + std::to_string(spec_->dim()) +
                          " does not match --dim " + std::to_string(cfg.dim));
      }
    }
  }

  TrialOutcome run(std::size_t snr_index, std::uint64_t trial, const SnrPoint& snr) const {
    const int dim = cfg_.dim;
    SeededRng rng = SeededRng::derive(cfg_.seed, snr_index, trial);

    // Draw order is fixed across schemes: channel, symbols, noise.
    const ChannelRealization chan = sample_channel(dim, dim, rng);
    std::vector<int> sent(static_cast<std::size_t>(dim * dim));
    for (int& s : sent) s = static_cast<int>(rng.below(static_cast<std::uint64_t>(constellation_.order())));
    const CMatrix noise = cfg_.noiseless ? CMatrix(CMatrix::Zero(dim, dim))
                                         : sample_complex_gaussian_matrix(rng, dim, dim, snr.n0);

    DecodeResult decided;
    switch (cfg_.scheme) {
      case Scheme::gcmb: {
        const CMatrix x = golden_encode(SymbolPair::from_symbols(constellation_, sent));
        decided = gcmb_decode(observe(x, chan, noise), chan.singular_values(), constellation_);
        break;
      }
      case Scheme::gc_ml: {
        const CMatrix x = golden_encode(SymbolPair::from_symbols(constellation_, sent));
        decided = gc_ml_decode(gc_baseline_observe(x, chan.h, noise), chan.h, *codebook_);
        break;
      }
      case Scheme::pcmb: {
        std::vector<CVector> groups(static_cast<std::size_t>(dim), CVector(dim));
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            groups[static_cast<std::size_t>(j)](k) = constellation_.point(sent[static_cast<std::size_t>(j * dim + k)]);
        const CMatrix x = pstbc_encode(*spec_, groups);
        decided = pcmb_decode(observe(x, chan, noise), chan.singular_values(), *spec_, constellation_);
        break;
      }
    }

    TrialOutcome out;
    for (std::size_t i = 0; i < sent.size(); ++i) {
      out.bit_errors += static_cast<std::uint64_t>(bit_errors(constellation_, sent[i], decided.symbols[i]));
    }
    out.searches = static_cast<int>(std::min(decided.stats.size(), out.nodes.size()));
    for (int i = 0; i < out.searches; ++i) out.nodes[static_cast<std::size_t>(i)] = decided.stats[static_cast<std::size_t>(i)].nodes_visited;
    return out;
  }

 private:
  CMatrix observe(const CMatrix& x, const ChannelRealization& chan, const CMatrix& noise) const {
    return cfg_.shared_observation ? gcmb_explicit_observe(x, chan, noise) : gcmb_observe(x, chan, noise);
  }

  const SimConfig& cfg_;
  Constellation constellation_;
  std::optional<GoldenCodebook> codebook_;
  std::optional<PerfectCodeSpec> spec_;
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Fills out[i] = fn(begin + i). Work is split dynamically; results land in
/// fixed slots so the aggregate does not depend on scheduling.
template <typename Fn>
void parallel_fill(std::vector<TrialOutcome>& out, std::uint64_t begin, unsigned threads, Fn&& fn) {
  const std::size_t n = out.size();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(begin + i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) out[i] = fn(begin + i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct PointTally {
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t searches = 0;
  std::uint64_t node_sum = 0;
  std::uint64_t max_nodes = 0;

  void add(const TrialOutcome& o, std::map<std::uint64_t, std::uint64_t>* histogram) {
    ++trials;
    bit_errors += o.bit_errors;
    for (int i = 0; i < o.searches; ++i) {
      const std::uint64_t nodes = o.nodes[static_cast<std::size_t>(i)];
      node_sum += nodes;
      max_nodes = std::max(max_nodes, nodes);
      if (histogram != nullptr) ++(*histogram)[nodes];
    }
    searches += static_cast<std::uint64_t>(o.searches);
  }
};

PointTally run_point(const TrialRunner& runner, const SimConfig& cfg, std::size_t snr_index,
                     std::uint64_t target_errors, std::map<std::uint64_t, std::uint64_t>* histogram) {
  const SnrPoint snr = SnrPoint::from_db(cfg.snr_db[snr_index], cfg.dim);
  const unsigned threads = resolve_threads(cfg.threads);
  PointTally tally;
  std::vector<TrialOutcome> batch;
  for (std::uint64_t begin = 0; begin < cfg.trials;) {
    const std::uint64_t end = std::min(cfg.trials, begin + kBatch);
    batch.assign(static_cast<std::size_t>(end - begin), TrialOutcome{});
    parallel_fill(batch, begin, threads,
                  [&](std::uint64_t trial) { return runner.run(snr_index, trial, snr); });
    // Sequential scan: the stopping trial is the same for any thread count.
    for (const TrialOutcome& o : batch) {
      tally.add(o, histogram);
      if (target_errors > 0 && tally.bit_errors >= target_errors) return tally;
    }
    begin = end;
  }
  return tally;
}

}  // namespace

std::vector<BerRecord> run_ber_sweep(const SimConfig& cfg) {
  cfg.validate();
  const TrialRunner runner(cfg);
  const std::uint64_t bits = bits_per_codeword(cfg.dim, cfg.order);

  std::vector<BerRecord> records;
  records.reserve(cfg.snr_db.size());
  for (std::size_t k = 0; k < cfg.snr_db.size(); ++k) {
    const auto started = std::chrono::steady_clock::now();
    const PointTally tally = run_point(runner, cfg, k, cfg.target_errors, nullptr);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

    BerRecord r;
    r.scheme = cfg.scheme;
    r.order = cfg.order;
    r.snr_db = cfg.snr_db[k];
    r.trials = tally.trials;
    r.bit_errors = tally.bit_errors;
    r.ber = static_cast<double>(tally.bit_errors) / static_cast<double>(tally.trials * bits);
    r.max_nodes = tally.max_nodes;
    r.mean_nodes = tally.searches > 0
                       ? static_cast<double>(tally.node_sum) / static_cast<double>(tally.searches)
                       : 0.0;
    r.elapsed_seconds = cfg.record_timing ? elapsed.count() : 0.0;
    r.seed = cfg.seed;
    records.push_back(r);
  }
  return records;
}

ComplexityReport complexity_report(const SimConfig& cfg) {
  cfg.validate();
  const TrialRunner runner(cfg);

  ComplexityReport rep;
  rep.scheme = cfg.scheme;
  rep.order = cfg.order;
  rep.dim = cfg.dim;
  const auto side = static_cast<std::uint64_t>(std::lround(std::sqrt(cfg.order)));
  if (cfg.scheme == Scheme::gc_ml) {
    rep.bound = static_cast<std::uint64_t>(cfg.order) * cfg.order * cfg.order * cfg.order;
  } else {
    rep.bound = 1;
    for (int k = 1; k < cfg.dim; ++k) rep.bound *= side;
  }

  std::uint64_t node_sum = 0;
  for (std::size_t k = 0; k < cfg.snr_db.size(); ++k) {
    const PointTally tally = run_point(runner, cfg, k, 0, &rep.histogram);
    rep.trials += tally.trials;
    rep.searches += tally.searches;
    node_sum += tally.node_sum;
    rep.max_nodes = std::max(rep.max_nodes, tally.max_nodes);
  }
  rep.mean_nodes = rep.searches > 0 ? static_cast<double>(node_sum) / static_cast<double>(rep.searches) : 0.0;
  for (const auto& [nodes, count] : rep.histogram) {
    if (nodes > rep.bound) rep.violations += count;
  }
  return rep;
}

AgreementReport compare_gcmb_with_ml(int order, double snr_db, std::uint64_t trials,
                                     std::uint64_t seed) {
  const Constellation c = Constellation::qam(order);
  if (order > 16) throw ConfigError("compare_gcmb_with_ml: M must be at most 16");
  const GoldenCodebook book(c);
  const SnrPoint snr = SnrPoint::from_db(snr_db, 2);

  AgreementReport rep;
  std::array<int, 4> sent{};
  for (std::uint64_t t = 0; t < trials; ++t) {
    SeededRng rng = SeededRng::derive(seed, 0, t);
    const ChannelRealization chan = sample_channel(2, 2, rng);
    for (int& s : sent) s = static_cast<int>(rng.below(static_cast<std::uint64_t>(order)));
    const CMatrix x = golden_encode(SymbolPair::from_symbols(c, sent));
    const CMatrix y = gcmb_channel_apply(x, chan, snr, rng);

    const DecodeResult fast = gcmb_decode(y, chan.singular_values(), c);
    const DecodeResult ml = gc_ml_decode(y, chan.factors.lambda(), book);
    ++rep.trials;
    if (fast.symbols != ml.symbols) ++rep.mismatches;
    rep.worst_metric_excess = std::max(rep.worst_metric_excess, fast.metric - ml.metric);
  }
  return rep;
}

double estimate_diversity_slope(std::span<const BerRecord> records, double ber_hi, double ber_lo) {
  std::vector<std::pair<double, double>> pts;
  for (const BerRecord& r : records) {
    if (r.ber > 0.0 && r.ber <= ber_hi && r.ber >= ber_lo) pts.emplace_back(r.snr_db / 10.0, std::log10(r.ber));
  }
  if (pts.size() < 2) {
    throw std::invalid_argument("estimate_diversity_slope: fewer than two points inside the BER window");
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("estimate_diversity_slope: SNR points coincide");
  return std::abs(sxy / sxx);
}

double snr_at_ber(std::span<const BerRecord> curve, double target_ber) {
  if (!(target_ber > 0.0)) throw std::invalid_argument("snr_at_ber: target BER must be positive");
  std::vector<BerRecord> sorted(curve.begin(), curve.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.snr_db < b.snr_db; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const BerRecord& a = sorted[i];
    if (a.ber == target_ber) return a.snr_db;
    if (i + 1 == sorted.size()) break;
    const BerRecord& b = sorted[i + 1];
    if (a.ber > target_ber && b.ber < target_ber && b.ber > 0.0) {
      const double la = std::log10(a.ber);
      const double lb = std::log10(b.ber);
      const double t = (std::log10(target_ber) - la) / (lb - la);
      return a.snr_db + t * (b.snr_db - a.snr_db);
    }
  }
  throw std::invalid_argument("snr_at_ber: curve does not cross the target BER");
}

double gap_at_ber(std::span<const BerRecord> a, std::span<const BerRecord> b, double target_ber) {
  return snr_at_ber(a, target_ber) - snr_at_ber(b, target_ber);
}

void write_csv(std::ostream& os, std::span<const BerRecord> records) {
  os << kCsvHeader << '\n';
  char line[512];
  for (const BerRecord& r : records) {
    std::snprintf(line, sizeof line, "%s,%d,%.6g,%llu,%llu,%.10e,%llu,%.6f,%.6f,%llu\n",
                  std::string(to_string(r.scheme)).c_str(), r.order, r.snr_db,
                  static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.bit_errors), r.ber,
                  static_cast<unsigned long long>(r.max_nodes), r.mean_nodes, r.elapsed_seconds,
                  static_cast<unsigned long long>(r.seed));
    os << line;
  }
}

void write_jsonl(std::ostream& os, std::span<const BerRecord> records) {
  for (const BerRecord& r : records) {
    const nlohmann::ordered_json j = {
        {"scheme", to_string(r.scheme)}, {"M", r.order},
        {"snr_db", r.snr_db},            {"trials", r.trials},
        {"bit_errors", r.bit_errors},    {"ber", r.ber},
        {"max_nodes", r.max_nodes},      {"mean_nodes", r.mean_nodes},
        {"elapsed_seconds", r.elapsed_seconds}, {"seed", r.seed},
    };
    os << j.dump() << '\n';
  }
}

void write_records(const std::filesystem::path& path, OutputFormat format,
                   std::span<const BerRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  if (format == OutputFormat::csv) {
    write_csv(out, records);
  } else {
    write_jsonl(out, records);
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace gcmb
