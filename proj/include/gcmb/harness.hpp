#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gcmb {

enum class Scheme { gcmb, gc_ml, pcmb };
enum class OutputFormat { csv, json };

std::string_view to_string(Scheme scheme);
/// Accepts "gcmb", "gc-ml" and "pcmb"; anything else throws ConfigError.
Scheme parse_scheme(std::string_view name);

struct SimConfig {
  Scheme scheme = Scheme::gcmb;
  int order = 4;
  std::vector<double> snr_db;
  std::uint64_t trials = 1000;
  /// Stop an SNR point once this many bit errors are reached; 0 disables.
  std::uint64_t target_errors = 200;
  std::uint64_t seed = 1;
  int dim = 2;
  std::optional<std::filesystem::path> generator;
  std::filesystem::path out;
  OutputFormat format = OutputFormat::csv;
  /// Validation mode: transmit without noise.
  bool noiseless = false;
  /// Beamformed schemes draw their noise at the receive antennas and rotate it
  /// by U^H, so every scheme sees the same (H, symbols, noise) per trial.
  bool shared_observation = false;
  /// Write wall-clock time per point. Off by default so output files are
  /// reproducible byte for byte.
  bool record_timing = false;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError describing the first problem found.
  void validate() const;

  /// start, start + step, ... up to stop inclusive (with a 1e-9 dB slack).
  static std::vector<double> snr_grid(double start, double stop, double step);
};

struct BerRecord {
  Scheme scheme = Scheme::gcmb;
  int order = 4;
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  std::uint64_t max_nodes = 0;
  double mean_nodes = 0.0;
  double elapsed_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Bits carried by one codeword: S^2 symbols of log2(M) bits.
std::uint64_t bits_per_codeword(int dim, int order);

std::vector<BerRecord> run_ber_sweep(const SimConfig& cfg);

struct ComplexityReport {
  Scheme scheme = Scheme::gcmb;
  int order = 4;
  int dim = 2;
  std::uint64_t trials = 0;
  std::uint64_t searches = 0;  // subsystem decodes counted
  std::uint64_t max_nodes = 0;
  double mean_nodes = 0.0;
  std::uint64_t bound = 0;     // sqrt(M)^(S-1) per real subsystem, M^4 for gc-ml
  std::uint64_t violations = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // nodes -> occurrences
};

/// Runs cfg.trials trials at every SNR point (no early stop) and summarises
/// the per-subsystem node counts.
ComplexityReport complexity_report(const SimConfig& cfg);

/// Decoder agreement on matched observations Y = Lambda X + N: the beamformed
/// decoder against exhaustive joint ML over all M^4 Golden codewords.
struct AgreementReport {
  std::uint64_t trials = 0;
  std::uint64_t mismatches = 0;
  double worst_metric_excess = 0.0;  // max of (decoder metric - ML metric)
};
AgreementReport compare_gcmb_with_ml(int order, double snr_db, std::uint64_t trials,
                                     std::uint64_t seed);

/// Magnitude of the least-squares slope of log10(BER) against SNR(dB)/10 over
/// points with ber_lo <= BER <= ber_hi. Fewer than two such points throws
/// std::invalid_argument.
double estimate_diversity_slope(std::span<const BerRecord> records, double ber_hi, double ber_lo);

/// SNR at which each curve crosses `target_ber` (log-linear interpolation);
/// returns a - b in dB. A curve that never crosses throws std::invalid_argument.
double snr_at_ber(std::span<const BerRecord> curve, double target_ber);
double gap_at_ber(std::span<const BerRecord> a, std::span<const BerRecord> b, double target_ber);

inline constexpr std::string_view kCsvHeader =
    "scheme,M,snr_db,trials,bit_errors,ber,max_nodes,mean_nodes,elapsed_seconds,seed";

void write_csv(std::ostream& os, std::span<const BerRecord> records);
void write_jsonl(std::ostream& os, std::span<const BerRecord> records);
void write_records(const std::filesystem::path& path, OutputFormat format,
                   std::span<const BerRecord> records);

}  // namespace gcmb
