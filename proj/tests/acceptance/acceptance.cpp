// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion.
// Usage: acceptance [criterion-number ...]   (no arguments runs all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/QR>

#include "gcmb/channel.hpp"
#include "gcmb/constellation.hpp"
#include "gcmb/errors.hpp"
#include "gcmb/golden.hpp"
#include "gcmb/harness.hpp"
#include "gcmb/lattice.hpp"
#include "gcmb/pstbc.hpp"
#include "gcmb/rng.hpp"

using namespace gcmb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CMatrix phase_orthogonal_generator(SeededRng& rng, int dim) {
  RMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.standard_normal();
  const RMatrix o = Eigen::HouseholderQR<RMatrix>(a).householderQ();
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    for (int j = 0; j < dim; ++j) g(i, j) = phase * o(i, j);
  }
  return g;
}

std::vector<CVector> draw_groups(SeededRng& rng, const Constellation& c, int dim, std::vector<int>& symbols) {
  std::vector<CVector> x(static_cast<std::size_t>(dim), CVector(dim));
  symbols.assign(static_cast<std::size_t>(dim * dim), 0);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const int s = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.order())));
      symbols[static_cast<std::size_t>(j * dim + k)] = s;
      x[static_cast<std::size_t>(j)](k) = c.point(s);
    }
  }
  return x;
}

// Generators used for the S = 4 criteria: the shipped example file plus
// random phase-times-orthogonal matrices.
std::vector<PerfectCodeSpec> s4_generators(std::uint64_t seed, int random_count) {
  std::vector<PerfectCodeSpec> out;
  out.push_back(load_generator_file(std::filesystem::path(GCMB_DATA_DIR) / "generator_s4_example.txt"));
  SeededRng rng(seed);
  for (int k = 0; k < random_count; ++k)
    out.push_back(PerfectCodeSpec::from_generator(4, kI, phase_orthogonal_generator(rng, 4)));
  return out;
}

Outcome c1_encoder_equivalence() {
  const auto t0 = Clock::now();
  const Constellation c = Constellation::qam(4);
  double worst = 0.0;
  for (int idx = 0; idx < 256; ++idx) {
    const std::array<int, 4> s{idx >> 6, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3};
    const SymbolPair p = SymbolPair::from_symbols(c, s);
    worst = std::max(worst, (golden_encode(p) - golden_encode_lattice(p)).cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-14 && t < 1.0,
          fmt("256 quadruples, max entry difference %.3e (<= 1e-14), %.3f s (< 1 s)", worst, t)};
}

Outcome c2_realness() {
  const auto t0 = Clock::now();
  SeededRng rng(20240101);
  double worst = 0.0;
  for (int t = 0; t < 100'000; ++t) {
    const ChannelRealization chan = sample_channel(2, 2, rng);
    worst = std::max(worst, effective_channel(chan.singular_values()).max_imag);
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 10.0,
          fmt("1e5 channels, max |Im R| %.3e (<= 1e-10), %.2f s (< 10 s)", worst, t)};
}

Outcome c3_oracle() {
  const auto t0 = Clock::now();
  const AgreementReport rep = compare_gcmb_with_ml(4, 8.0, 10'000, 3);
  const double t = seconds_since(t0);
  const double rate = 1.0 - static_cast<double>(rep.mismatches) / static_cast<double>(rep.trials);
  return {rep.trials == 10'000 && rep.mismatches == 0 && t < 60.0,
          fmt("4-QAM 8 dB, %llu trials, agreement %.4f%% (%llu mismatches), worst metric excess %.2e, %.2f s (< 60 s)",
              static_cast<unsigned long long>(rep.trials), 100.0 * rate,
              static_cast<unsigned long long>(rep.mismatches), rep.worst_metric_excess, t)};
}

Outcome c4_node_budget() {
  bool pass = true;
  std::string detail;
  for (int m : {4, 16, 64}) {
    SimConfig cfg;
    cfg.scheme = Scheme::gcmb;
    cfg.order = m;
    cfg.snr_db = {0.0, 10.0, 20.0, 30.0};
    cfg.trials = 62'500;  // 4 points x 62500 trials x 4 subsystems = 1e6 decodes
    cfg.seed = 44;
    const ComplexityReport rep = complexity_report(cfg);
    const auto bound = static_cast<std::uint64_t>(std::lround(std::sqrt(m)));
    const bool ok = rep.searches >= 1'000'000 && rep.max_nodes <= bound && rep.violations == 0;
    pass = pass && ok;
    detail += fmt("%sM=%d: %llu decodes, max %llu (<= %llu), mean %.3f, %llu violations", detail.empty() ? "" : "; ",
                  m, static_cast<unsigned long long>(rep.searches), static_cast<unsigned long long>(rep.max_nodes),
                  static_cast<unsigned long long>(bound), rep.mean_nodes,
                  static_cast<unsigned long long>(rep.violations));
  }
  return {pass, detail};
}

struct S4Stats {
  std::uint64_t decodes = 0;
  std::uint64_t max_nodes = 0;
  std::uint64_t violations = 0;
  std::uint64_t trials = 0;
  std::uint64_t mismatches = 0;
  double worst_imag = 0.0;
};

// Node budget at S = 4 over noisy trials, plus optional per-group exhaustive ML comparison.
S4Stats s4_run(int m, int trials, bool compare_ml, std::uint64_t seed) {
  const Constellation c = Constellation::qam(m);
  const std::uint64_t bound = static_cast<std::uint64_t>(c.side() * c.side() * c.side());
  const auto specs = s4_generators(seed, 9);
  SeededRng rng(seed + 1);
  S4Stats st;
  const double snrs[] = {0.0, 8.0, 16.0, 24.0};
  for (int t = 0; t < trials; ++t) {
    const PerfectCodeSpec& spec = specs[static_cast<std::size_t>(t) % specs.size()];
    const ChannelRealization chan = sample_channel(4, 4, rng);
    std::vector<int> symbols;
    const auto x = draw_groups(rng, c, 4, symbols);
    const SnrPoint snr = SnrPoint::from_db(snrs[t % 4], 4);
    const CMatrix y = gcmb_channel_apply(pstbc_encode(spec, x), chan, snr, rng);
    st.worst_imag = std::max(st.worst_imag, pcmb_effective_channel(chan.singular_values(), spec).max_imag);
    const DecodeResult d = pcmb_decode(y, chan.singular_values(), spec, c);
    for (const SearchStats& s : d.stats) {
      ++st.decodes;
      st.max_nodes = std::max(st.max_nodes, s.nodes_visited);
      if (s.nodes_visited > bound) ++st.violations;
    }
    ++st.trials;
    if (!compare_ml) continue;
    const CMatrix lg = chan.factors.lambda() * spec.generator();
    const auto groups = pcmb_group(y, 4);
    bool match = true;
    for (int j = 0; j < 4; ++j) {
      const CMatrix a = phi_matrix(4, j + 1, spec.g()) * lg;
      const std::size_t candidates = static_cast<std::size_t>(m) * m * m * m;
      const MlChoice best = exhaustive_ml(candidates, [&](std::size_t cand) {
        CVector v(4);
        std::size_t rest = cand;
        for (int k = 3; k >= 0; --k) {
          v(k) = c.point(static_cast<int>(rest % static_cast<std::size_t>(m)));
          rest /= static_cast<std::size_t>(m);
        }
        return (groups[static_cast<std::size_t>(j)] - a * v).squaredNorm();
      });
      std::size_t rest = best.index;
      for (int k = 3; k >= 0; --k) {
        if (d.symbols[static_cast<std::size_t>(4 * j + k)] != static_cast<int>(rest % static_cast<std::size_t>(m)))
          match = false;
        rest /= static_cast<std::size_t>(m);
      }
    }
    if (!match) ++st.mismatches;
  }
  return st;
}

Outcome c5_pcmb_s4() {
  const S4Stats m4 = s4_run(4, 20'000, false, 500);
  const S4Stats m16 = s4_run(16, 20'000, false, 600);
  const S4Stats ml = s4_run(4, 1000, true, 700);
  const bool pass = m4.max_nodes <= 8 && m4.violations == 0 && m16.max_nodes <= 64 && m16.violations == 0 &&
                    ml.trials == 1000 && ml.mismatches == 0;
  return {pass,
          fmt("M=4: %llu decodes, max %llu (<= 8); M=16: %llu decodes, max %llu (<= 64); "
              "per-group ML at M=4: %llu/%llu trials match; max |Im R| %.2e",
              static_cast<unsigned long long>(m4.decodes), static_cast<unsigned long long>(m4.max_nodes),
              static_cast<unsigned long long>(m16.decodes), static_cast<unsigned long long>(m16.max_nodes),
              static_cast<unsigned long long>(ml.trials - ml.mismatches), static_cast<unsigned long long>(ml.trials),
              std::max({m4.worst_imag, m16.worst_imag, ml.worst_imag}))};
}

Outcome c6_diversity() {
  const auto t0 = Clock::now();
  SimConfig cfg;
  cfg.scheme = Scheme::gcmb;
  cfg.order = 4;
  cfg.snr_db = SimConfig::snr_grid(8.0, 22.0, 1.0);
  cfg.trials = 2'000'000;  // per point; 15 points stay under 1e7 in total
  cfg.target_errors = 200;
  cfg.seed = 66;
  const auto recs = run_ber_sweep(cfg);
  std::uint64_t total = 0;
  bool enough = true;
  std::vector<BerRecord> window;
  std::string curve;
  for (const BerRecord& r : recs) {
    total += r.trials;
    curve += fmt(" %g:%.3e", r.snr_db, r.ber);
    if (r.ber <= 1e-2 && r.ber >= 1e-4) {
      window.push_back(r);
      enough = enough && r.bit_errors >= 200;
    }
  }
  double slope = 0.0;
  try {
    slope = estimate_diversity_slope(recs, 1e-2, 1e-4);
  } catch (const std::exception&) {
    return {false, "fewer than two points inside the BER window"};
  }
  const double t = seconds_since(t0);
  const bool pass = slope >= 3.2 && enough && total <= 10'000'000 && t < 600.0;
  std::string detail = fmt("slope %.3f over (1e-2, 1e-4) with %zu points (>= 3.2), %llu trials (<= 1e7), %.1f s (< 600 s)",
                           slope, window.size(), static_cast<unsigned long long>(total), t);
  if (recs.size() >= 2) {
    const BerRecord& a = recs[recs.size() - 2];
    const BerRecord& b = recs.back();
    if (a.ber > 0.0 && b.ber > 0.0)
      detail += fmt("; local slope %g-%g dB: %.2f", a.snr_db, b.snr_db,
                    std::log10(a.ber / b.ber) / ((b.snr_db - a.snr_db) / 10.0));
  }
  detail += ";" + curve;
  return {pass, detail};
}

Outcome c7_gap() {
  SimConfig cfg;
  cfg.order = 4;
  cfg.snr_db = SimConfig::snr_grid(10.0, 20.0, 1.0);
  cfg.trials = 2'000'000;
  cfg.target_errors = 1000;
  cfg.seed = 77;
  cfg.scheme = Scheme::gcmb;
  const auto gcmb = run_ber_sweep(cfg);
  cfg.scheme = Scheme::gc_ml;
  const auto gcml = run_ber_sweep(cfg);
  const double a = snr_at_ber(gcmb, 1e-3);
  const double b = snr_at_ber(gcml, 1e-3);
  const double gap = a - b;
  return {std::abs(gap) <= 1.5,
          fmt("4-QAM at BER 1e-3: GCMB %.2f dB, GC-ML %.2f dB, |gap| %.2f dB (<= 1.5)", a, b, std::abs(gap))};
}

Outcome c8_substitution() {
  const Outcome c5 = c5_pcmb_s4();
  std::uint64_t trials = 0, failures = 0;
  for (int m : {4, 16, 64}) {
    const Constellation c = Constellation::qam(m);
    const auto specs = s4_generators(800 + static_cast<std::uint64_t>(m), 9);
    SeededRng rng(900 + static_cast<std::uint64_t>(m));
    for (int t = 0; t < 2000; ++t) {
      const PerfectCodeSpec& spec = specs[static_cast<std::size_t>(t) % specs.size()];
      const ChannelRealization chan = sample_channel(4, 4, rng);
      std::vector<int> symbols;
      const auto x = draw_groups(rng, c, 4, symbols);
      const CMatrix y = chan.factors.lambda() * pstbc_encode(spec, x);
      ++trials;
      if (pcmb_decode(y, chan.singular_values(), spec, c).symbols != symbols) ++failures;
    }
  }
  return {c5.pass && failures == 0,
          fmt("S=4 property suite %s; noiseless recovery %llu/%llu exact (M = 4, 16, 64)", c5.pass ? "passes" : "FAILS",
              static_cast<unsigned long long>(trials - failures), static_cast<unsigned long long>(trials))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c9_reproducibility() {
  const auto dir = std::filesystem::temp_directory_path() / ("gcmb_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  bool pass = true;
  std::string detail;
  for (Scheme s : {Scheme::gcmb, Scheme::gc_ml}) {
    SimConfig cfg;
    cfg.scheme = s;
    cfg.order = s == Scheme::gc_ml ? 4 : 16;
    cfg.snr_db = SimConfig::snr_grid(0.0, 16.0, 4.0);
    cfg.trials = 20'000;
    cfg.target_errors = 500;
    cfg.seed = 909;
    std::vector<std::string> outputs;
    for (unsigned threads : {1u, 1u, 4u}) {
      cfg.threads = threads;
      const auto path = dir / ("run" + std::to_string(outputs.size()) + ".csv");
      write_records(path, OutputFormat::csv, run_ber_sweep(cfg));
      outputs.push_back(slurp(path));
    }
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].empty();
    pass = pass && same;
    detail += fmt("%s%s: %s", detail.empty() ? "" : "; ", std::string(to_string(s)).c_str(),
                  same ? "identical CSV for 1, 1 and 4 threads" : "CSV differs");
  }
  std::filesystem::remove_all(dir);
  return {pass, detail};
}

Outcome c10_statistics() {
  SeededRng rng(1010);
  const int n = 1'000'000;
  const double var = 0.7;
  Complex mean{};
  double power = 0.0, re2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex v = sample_complex_gaussian(rng, var);
    mean += v;
    power += std::norm(v);
    re2 += v.real() * v.real();
  }
  const double sd = std::sqrt(var);
  const double noise_mean = std::abs(mean / static_cast<double>(n)) / sd;
  const double noise_var = power / n / var - 1.0;
  const double noise_split = re2 / n / (var / 2.0) - 1.0;

  Complex hmean{};
  double hpow = 0.0;
  const int channels = 100'000;
  for (int t = 0; t < channels; ++t) {
    const CMatrix h = sample_channel(2, 2, rng).h;
    for (int k = 0; k < 4; ++k) {
      hmean += h.data()[k];
      hpow += std::norm(h.data()[k]);
    }
  }
  const double ch_mean = std::abs(hmean / (4.0 * channels));
  const double ch_var = hpow / (4.0 * channels) - 1.0;

  const bool pass = noise_mean <= 0.01 && std::abs(noise_var) <= 0.02 && std::abs(noise_split) <= 0.02 &&
                    ch_mean <= 0.01 && std::abs(ch_var) <= 0.02;
  return {pass, fmt("noise (1e6): |mean|/sd %.4f (<= 0.01), var err %.4f, per-axis var err %.4f (<= 0.02); "
                    "channel (4e5 entries): |mean| %.4f (<= 0.01), var err %.4f (<= 0.02)",
                    noise_mean, noise_var, noise_split, ch_mean, ch_var)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "encoder equivalence", c1_encoder_equivalence},
      {2, "R realness", c2_realness},
      {3, "ML oracle equivalence", c3_oracle},
      {4, "worst-case node budget", c4_node_budget},
      {5, "PCMB S=4 complexity and per-group ML", c5_pcmb_s4},
      {6, "diversity order", c6_diversity},
      {7, "GCMB vs GC-ML gap", c7_gap},
      {8, "S=4 substitution suite", c8_substitution},
      {9, "reproducibility", c9_reproducibility},
      {10, "statistical soundness", c10_statistics},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] C%d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
