#pragma once

#include "gcmb/numerics.hpp"
#include "gcmb/rng.hpp"

namespace gcmb {

/// One quasi-static block: H and its SVD.
struct ChannelRealization {
  CMatrix h;
  SvdFactors factors;

  const RVector& singular_values() const noexcept { return factors.singular_values; }
};

/// Per-receive-antenna SNR. With unit-energy symbols and total transmit power
/// S, the noise variance is N0 = S / SNR.
struct SnrPoint {
  double snr_db = 0.0;
  double n0 = 0.0;

  static SnrPoint from_db(double snr_db, int streams);
};

/// i.i.d. CN(0, 1) entries, then SVD. Only square channels are supported.
ChannelRealization sample_channel(int nr, int nt, SeededRng& rng);

/// Y = Lambda X + noise, with the noise supplied by the caller.
CMatrix gcmb_observe(const CMatrix& x, const ChannelRealization& chan, const CMatrix& noise);

/// Y = Lambda X + N, N i.i.d. CN(0, N0).
CMatrix gcmb_channel_apply(const CMatrix& x, const ChannelRealization& chan, const SnrPoint& snr,
                           SeededRng& rng);

/// Explicit beamformed link: precode with V, pass through H, add receive
/// noise, combine with U^H. Equal in distribution to gcmb_channel_apply.
CMatrix gcmb_explicit_observe(const CMatrix& x, const ChannelRealization& chan,
                              const CMatrix& air_noise);
CMatrix gcmb_explicit_apply(const CMatrix& x, const ChannelRealization& chan, const SnrPoint& snr,
                            SeededRng& rng);

/// Plain MIMO link without beamforming: Y = H X + noise.
CMatrix gc_baseline_observe(const CMatrix& x, const CMatrix& h, const CMatrix& noise);
CMatrix gc_baseline_apply(const CMatrix& x, const CMatrix& h, const SnrPoint& snr, SeededRng& rng);

}  // namespace gcmb
