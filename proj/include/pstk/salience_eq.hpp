#pragma once

#include <pstk/audio_buffer.hpp>

#include <vector>

namespace pstk {

// Offline spectral-peak salience equalizer. Per STFT frame the dB envelope E
// and a strongly smoothed baseline B are estimated; the deviation D = E - B is
// what "salience" means here, and the magnitude spectrum is scaled by
// 10^(gain * D / 20). gain = 0 leaves the signal untouched, +1 doubles the
// deviation, -1 flattens it onto the baseline. Phases are kept.
struct SalienceSettings {
  double gain = 0.0;  // [-1, +1]
  double cutoff_quefrency_s = 1.0 / 700.0;
  int frame_len = 4096;
  int hop = 1024;  // must be <= frame_len / 2; frame_len / 4 gives exact COLA
  // the baseline pass runs at cutoff_quefrency_s / baseline_divisor
  double baseline_divisor = 16.0;
  // measurement band for measure_salience
  double band_lo_hz = 50.0;
  double band_hi_hz = 8000.0;
};

AudioBuffer apply_salience_gain(const AudioBuffer& buffer, const SalienceSettings& settings);

struct SalienceSeries {
  Eigen::ArrayXd frame_db;          // per-frame max of D over the band
  std::vector<char> degenerate;     // silent frames, reported as 0 dB
};

SalienceSeries measure_salience(const AudioBuffer& buffer, const SalienceSettings& settings);

}  // namespace pstk
