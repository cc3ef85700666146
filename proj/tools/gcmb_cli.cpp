// Command-line front end: BER sweeps, node-count reports and the invariant suite.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gcmb/errors.hpp"
#include "gcmb/harness.hpp"
#include "gcmb/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;

struct SweepArgs {
  std::string scheme = "gcmb";
  int order = 4;
  double snr_start = 0.0;
  double snr_stop = 20.0;
  double snr_step = 2.0;
  std::uint64_t trials = 10000;
  std::uint64_t target_errors = 200;
  std::uint64_t seed = 1;
  int dim = 2;
  std::string generator;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  bool noiseless = false;
  bool shared = false;
  bool timing = false;
};

void add_common(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("--scheme", a.scheme, "gcmb | gc-ml | pcmb")
      ->check(CLI::IsMember({"gcmb", "gc-ml", "pcmb"}));
  cmd->add_option("--mod", a.order, "QAM order")->check(CLI::IsMember({4, 16, 64, 256}));
  cmd->add_option("--snr-start", a.snr_start, "first SNR point in dB");
  cmd->add_option("--snr-stop", a.snr_stop, "last SNR point in dB (inclusive)");
  cmd->add_option("--snr-step", a.snr_step, "SNR spacing in dB");
  cmd->add_option("--trials", a.trials, "codewords per SNR point")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "64-bit run seed");
  cmd->add_option("--dim", a.dim, "code dimension S (pcmb only)")->check(CLI::IsMember({2, 4}));
  cmd->add_option("--generator", a.generator, "generator matrix file (pcmb, S=4)");
  cmd->add_option("--threads", a.threads, "worker threads, 0 = all cores");
  cmd->add_flag("--noiseless", a.noiseless, "transmit without noise (validation mode)");
  cmd->add_flag("--shared-observation", a.shared,
                "draw beamformed noise at the receive antennas so all schemes share it");
}

gcmb::SimConfig to_config(const SweepArgs& a) {
  gcmb::SimConfig cfg;
  cfg.scheme = gcmb::parse_scheme(a.scheme);
  cfg.order = a.order;
  cfg.snr_db = gcmb::SimConfig::snr_grid(a.snr_start, a.snr_stop, a.snr_step);
  cfg.trials = a.trials;
  cfg.target_errors = a.target_errors;
  cfg.seed = a.seed;
  cfg.dim = a.dim;
  if (!a.generator.empty()) cfg.generator = a.generator;
  cfg.out = a.out;
  cfg.format = a.format == "json" ? gcmb::OutputFormat::json : gcmb::OutputFormat::csv;
  cfg.noiseless = a.noiseless;
  cfg.shared_observation = a.shared;
  cfg.record_timing = a.timing;
  cfg.threads = a.threads;
  cfg.validate();
  return cfg;
}

int run_simulate(const SweepArgs& a) {
  const gcmb::SimConfig cfg = to_config(a);
  const auto records = gcmb::run_ber_sweep(cfg);
  gcmb::write_records(cfg.out, cfg.format, records);
  for (const auto& r : records) {
    std::cerr << gcmb::to_string(r.scheme) << " M=" << r.order << " snr=" << r.snr_db
              << " dB trials=" << r.trials << " errors=" << r.bit_errors << " ber=" << r.ber
              << " max_nodes=" << r.max_nodes << '\n';
  }
  return kExitOk;
}

int run_complexity(const SweepArgs& a) {
  const gcmb::SimConfig cfg = to_config(a);
  const gcmb::ComplexityReport rep = gcmb::complexity_report(cfg);
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [nodes, count] : rep.histogram) hist[std::to_string(nodes)] = count;
  const nlohmann::ordered_json j = {
      {"scheme", gcmb::to_string(rep.scheme)},
      {"M", rep.order},
      {"dim", rep.dim},
      {"trials", rep.trials},
      {"searches", rep.searches},
      {"max_nodes", rep.max_nodes},
      {"mean_nodes", rep.mean_nodes},
      {"bound", rep.bound},
      {"violations", rep.violations},
      {"histogram", hist},
  };
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(a.out);
    if (!out) throw gcmb::ConfigError("cannot open output file " + a.out);
    out << j.dump(2) << '\n';
  }
  return rep.violations == 0 ? kExitOk : kExitValidation;
}

int run_validate(std::uint64_t seed) {
  gcmb::ValidationOptions options;
  options.seed = seed;
  bool all = true;
  for (const auto& check : gcmb::run_validation(options)) {
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail << '\n';
    all = all && check.passed;
  }
  return all ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Golden coded multiple beamforming simulator.\n"
               "The fully precoded multiple-beamforming baseline is not included."};
  app.require_subcommand(1);

  SweepArgs sim;
  auto* simulate = app.add_subcommand("simulate", "BER sweep over an SNR grid");
  add_common(simulate, sim);
  simulate->add_option("--target-errors", sim.target_errors,
                       "stop a point after this many bit errors (0 = run all trials)");
  simulate->add_option("--out", sim.out, "output file")->required();
  simulate->add_option("--format", sim.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_flag("--timing", sim.timing, "record wall-clock seconds per point");

  SweepArgs cx;
  cx.trials = 10000;
  cx.snr_step = 5.0;
  auto* complexity = app.add_subcommand("complexity", "per-subsystem search node report");
  add_common(complexity, cx);
  complexity->add_option("--out", cx.out, "write the JSON report here instead of stdout");

  std::uint64_t validate_seed = 2024;
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  validate->add_option("--seed", validate_seed, "seed for the randomised checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (complexity->parsed()) return run_complexity(cx);
    if (validate->parsed()) return run_validate(validate_seed);
  } catch (const gcmb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitConfig;
}
