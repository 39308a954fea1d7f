#pragma once

#include <pstk/stft.hpp>

namespace pstk {

// Smooth dB spectral envelope: the low-quefrency part of the log-power
// cepstrum. Same binning as the source frame.
struct EnvelopeFrame {
  Eigen::ArrayXd env_db;
  double cutoff_quefrency_s = 0.0;
};

// Cepstral smoothing of 10*log10(bin_power). Power is floored 120 dB below
// the frame peak before the log so empty bins cannot inject -inf. Quefrencies
// above the cutoff are discarded; the result cannot vary faster than the
// cutoff allows and the operation is idempotent.
EnvelopeFrame spectral_envelope(const SpectrumFrame& frame, double cutoff_quefrency_s);

// Same smoothing applied directly to a dB curve (used for envelope-of-envelope
// passes and tests).
Eigen::ArrayXd smooth_db_curve(const Eigen::ArrayXd& db, int n_fft, double sample_rate_hz,
                               double cutoff_quefrency_s);

}  // namespace pstk
