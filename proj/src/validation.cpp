#include "gcmb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include "gcmb/channel.hpp"
#include "gcmb/constellation.hpp"
#include "gcmb/golden.hpp"
#include "gcmb/harness.hpp"
#include "gcmb/lattice.hpp"
#include "gcmb/pstbc.hpp"
#include "gcmb/rng.hpp"

namespace gcmb {

namespace {

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult encoder_equivalence() {
  const Constellation c = Constellation::qam(4);
  const PerfectCodeSpec golden = PerfectCodeSpec::golden();
  double worst_forms = 0.0;
  double worst_pstbc = 0.0;
  for (int idx = 0; idx < 256; ++idx) {
    const std::array<int, 4> s{idx >> 6, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3};
    const SymbolPair p = SymbolPair::from_symbols(c, s);
    const CMatrix a = golden_encode(p);
    const CMatrix b = golden_encode_lattice(p);
    std::vector<CVector> x(2, CVector(2));
    x[0] << p.x1[0], p.x1[1];
    x[1] << p.x2[0], p.x2[1];
    const CMatrix d = pstbc_encode(golden, x);
    worst_forms = std::max(worst_forms, (a - b).cwiseAbs().maxCoeff());
    worst_pstbc = std::max(worst_pstbc, (a - d).cwiseAbs().maxCoeff());
  }
  const bool ok = worst_forms <= 1e-14 && worst_pstbc <= 1e-14;
  return {"encoder equivalence (256 4-QAM inputs)", ok,
          "entry form vs lattice form " + sci(worst_forms) + ", vs generic perfect-code form " +
              sci(worst_pstbc)};
}

CheckResult decoupling_exactness(std::uint64_t seed) {
  const Constellation c = Constellation::qam(16);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    SeededRng rng = SeededRng::derive(seed, 1, t);
    const ChannelRealization chan = sample_channel(2, 2, rng);
    std::array<int, 4> s{};
    for (int& v : s) v = static_cast<int>(rng.below(16));
    const SymbolPair p = SymbolPair::from_symbols(c, s);
    const CMatrix x = golden_encode(p);
    const CMatrix y = gcmb_channel_apply(x, chan, SnrPoint::from_db(5.0, 2), rng);
    const DecoupledReceive parts = receive_decompose(y);
    const CMatrix lg = chan.factors.lambda() * GoldenConstants::get().g;
    CVector x1(2), x2(2);
    x1 << p.x1[0], p.x1[1];
    x2 << p.x2[0], p.x2[1];
    const double joint = (y - chan.factors.lambda() * x).squaredNorm();
    const double split = (parts.y1 - lg * x1).squaredNorm() + (parts.y2 - parts.phi * lg * x2).squaredNorm();
    worst = std::max(worst, std::abs(joint - split));
  }
  return {"decoupling exactness", worst <= 1e-12, "max |joint - split| " + sci(worst)};
}

CheckResult realness(const ValidationOptions& o) {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < o.realness_channels; ++t) {
    SeededRng rng = SeededRng::derive(o.seed, 2, t);
    const ChannelRealization chan = sample_channel(2, 2, rng);
    worst = std::max(worst, effective_channel(chan.singular_values()).max_imag);
  }
  return {"effective R is real (" + std::to_string(o.realness_channels) + " channels)",
          worst <= 1e-10, "max |Im R| " + sci(worst)};
}

CheckResult oracle_agreement(const ValidationOptions& o) {
  const AgreementReport rep = compare_gcmb_with_ml(4, 8.0, o.oracle_trials, o.seed);
  return {"beamformed decoder equals exhaustive ML (4-QAM, 8 dB)", rep.mismatches == 0,
          std::to_string(rep.mismatches) + " mismatches in " + std::to_string(rep.trials) +
              " trials, worst metric excess " + sci(rep.worst_metric_excess)};
}

CheckResult lattice_exactness(const ValidationOptions& o) {
  const Constellation c = Constellation::qam(16);
  std::uint64_t mismatches = 0;
  for (std::uint64_t t = 0; t < o.lattice_instances; ++t) {
    SeededRng rng = SeededRng::derive(o.seed, 3, t);
    const int n = 1 + static_cast<int>(rng.below(4));
    LatticeProblem p;
    p.r = RMatrix::Zero(n, n);
    p.y.resize(n);
    for (int i = 0; i < n; ++i) {
      p.r(i, i) = 0.2 + 2.0 * rng.uniform();
      for (int j = i + 1; j < n; ++j) p.r(i, j) = rng.standard_normal();
      p.y(i) = 2.0 * rng.standard_normal();
    }
    p.levels.assign(static_cast<std::size_t>(n), c.pam_levels());
    const LatticeSolution sd = real_sd(p, true);
    const LatticeSolution ml = lattice_exhaustive(p);
    if (sd.indices != ml.indices) ++mismatches;
  }
  return {"sphere decoder with rounding equals exhaustive search", mismatches == 0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(o.lattice_instances)};
}

CheckResult node_budget(const ValidationOptions& o, int order) {
  SimConfig cfg;
  cfg.scheme = Scheme::gcmb;
  cfg.order = order;
  cfg.snr_db = {0.0, 10.0, 20.0};
  cfg.trials = o.complexity_trials;
  cfg.seed = o.seed;
  cfg.threads = 1;
  const ComplexityReport rep = complexity_report(cfg);
  return {"node budget sqrt(M) at M=" + std::to_string(order), rep.violations == 0,
          "max " + std::to_string(rep.max_nodes) + " (bound " + std::to_string(rep.bound) + ") over " +
              std::to_string(rep.searches) + " searches"};
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> out;
  out.push_back(guarded("encoder equivalence", encoder_equivalence));
  out.push_back(guarded("decoupling exactness", [&] { return decoupling_exactness(options.seed); }));
  out.push_back(guarded("R realness", [&] { return realness(options); }));
  out.push_back(guarded("oracle agreement", [&] { return oracle_agreement(options); }));
  out.push_back(guarded("lattice exactness", [&] { return lattice_exactness(options); }));
  for (int m : {4, 16, 64}) {
    out.push_back(guarded("node budget", [&] { return node_budget(options, m); }));
  }
  return out;
}

}  // namespace gcmb
