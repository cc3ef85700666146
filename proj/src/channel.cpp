#include "gcmb/channel.hpp"

#include <cmath>
#include <string>

#include "gcmb/errors.hpp"

namespace gcmb {

SnrPoint SnrPoint::from_db(double snr_db, int streams) {
  if (streams < 1) throw ConfigError("SnrPoint: stream count must be positive");
  if (!std::isfinite(snr_db)) throw ConfigError("SnrPoint: SNR must be finite");
  return {snr_db, static_cast<double>(streams) / std::pow(10.0, snr_db / 10.0)};
}

ChannelRealization sample_channel(int nr, int nt, SeededRng& rng) {
  if (nr != nt) {
    throw DimensionError("sample_channel: only square channels are supported (got " +
                         std::to_string(nr) + "x" + std::to_string(nt) + ")");
  }
  ChannelRealization out;
  out.h = sample_complex_gaussian_matrix(rng, nr, nt, 1.0);
  out.factors = svd(out.h);
  return out;
}

namespace {

void check_shapes(const CMatrix& x, Eigen::Index dim, const CMatrix& noise) {
  if (x.rows() != dim || x.cols() != dim || noise.rows() != dim || noise.cols() != dim) {
    throw DimensionError("channel: codeword and noise must match the channel dimension");
  }
}

}  // namespace

CMatrix gcmb_observe(const CMatrix& x, const ChannelRealization& chan, const CMatrix& noise) {
  check_shapes(x, chan.h.rows(), noise);
  return chan.singular_values().cast<Complex>().asDiagonal() * x + noise;
}

CMatrix gcmb_channel_apply(const CMatrix& x, const ChannelRealization& chan, const SnrPoint& snr,
                           SeededRng& rng) {
  const auto dim = chan.h.rows();
  return gcmb_observe(x, chan, sample_complex_gaussian_matrix(rng, dim, dim, snr.n0));
}

CMatrix gcmb_explicit_observe(const CMatrix& x, const ChannelRealization& chan,
                              const CMatrix& air_noise) {
  check_shapes(x, chan.h.rows(), air_noise);
  return chan.factors.u.adjoint() * (chan.h * (chan.factors.v * x) + air_noise);
}

CMatrix gcmb_explicit_apply(const CMatrix& x, const ChannelRealization& chan, const SnrPoint& snr,
                            SeededRng& rng) {
  const auto dim = chan.h.rows();
  return gcmb_explicit_observe(x, chan, sample_complex_gaussian_matrix(rng, dim, dim, snr.n0));
}

CMatrix gc_baseline_observe(const CMatrix& x, const CMatrix& h, const CMatrix& noise) {
  check_shapes(x, h.rows(), noise);
  return h * x + noise;
}

CMatrix gc_baseline_apply(const CMatrix& x, const CMatrix& h, const SnrPoint& snr, SeededRng& rng) {
  const auto dim = h.rows();
  return gc_baseline_observe(x, h, sample_complex_gaussian_matrix(rng, dim, dim, snr.n0));
}

}  // namespace gcmb
