#pragma once

#include <pstk/audio_buffer.hpp>
#include <pstk/stft.hpp>
#include <pstk/synth.hpp>

#include <vector>

namespace pstk {

struct FeatureVector {
  double harmonic_ratio = 0.0;      // [0, 1]
  double flatness = 0.0;            // [0, 1]
  double inharmonicity_norm = 0.0;  // populated by the space transform
  double noisiness_norm = 0.0;      // populated by the space transform
  bool degenerate = false;
};

struct PsEstimate {
  double value = 0.0;
  double k = 1.0;
};

// Lag search range for the autocorrelation maximum, expressed in Hz.
struct HrParams {
  double lag_lo_hz = 25.0;
  double lag_hi_hz = 2000.0;
};

// HarmonicRatio: the highest peak of the lag-zero-normalized autocorrelation
// within the lag range, clamped to [0, 1]. An all-zero frame returns 0 and
// sets *degenerate. Requires frame.size() >= 2 * sample_rate / lag_lo_hz.
double harmonic_ratio(Eigen::Ref<const Eigen::ArrayXd> frame, double sample_rate_hz,
                      const HrParams& params = {}, bool* degenerate = nullptr);

// PS = k * 10^AC1. Throws OutOfRange for ac1 outside [0, 1] or k <= 0.
PsEstimate ps_from_ac1(double ac1, double k = 1.0);

// Geometric over arithmetic mean of bin_power restricted to [band_lo, band_hi].
// Zero bins are floored at 1e-12 of the band mean. n_avg is the number of
// periodogram sub-frames averaged into `frame` (metadata; must be >= 1).
double spectral_flatness(const SpectrumFrame& frame, double band_lo_hz, double band_hi_hz,
                         int n_avg = 1);

// Entry (i, j): HarmonicRatio of the equal-amplitude two-sine mixture of
// partial i+1 of tone_a and partial j+1 of tone_b. Throws NyquistViolation.
Eigen::MatrixXd pairwise_hr_matrix(const MauchToneSpec& tone_a, const MauchToneSpec& tone_b);

struct TrackParams {
  double frame_s = 0.2;   // analysis frame for both HR and flatness
  double hop_s = 0.1;
  int welch_subframe = 256;  // periodogram length for the flatness average
  double band_lo_hz = 100.0;
  double band_hi_hz = 10000.0;
  HrParams hr;
};

// Per-frame HarmonicRatio (time domain) and spectral flatness (Welch-averaged
// spectrum). The normalized fields stay zero until the space transform is
// applied. Frames shorter than the HR lag requirement throw FrameTooShort.
std::vector<FeatureVector> track_features(const AudioBuffer& buffer,
                                          const TrackParams& params = {});

}  // namespace pstk
