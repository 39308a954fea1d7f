#pragma once

#include <pstk/audio_buffer.hpp>

#include <cstdint>
#include <vector>

namespace pstk {

// Eleven psychoacoustic reference sounds, numbered in order of decreasing
// pitch strength:
//   1  pure tone
//   2  harmonic complex, -3 dB/oct, 7 partials
//   3  harmonic complex, -3 dB/oct, full series to Nyquist
//   4  narrow-band noise, 10 Hz total width
//   5  AM tone, m = 1 (carrier 4*fc, modulator fc)
//   6  band-pass harmonic complex, one octave each side of fc
//   7  band-pass noise, 96 dB/oct slopes, one octave each side of fc
//   8  low-pass noise, 192 dB/oct, edge at fc
//   9  comb-filter noise, 40 dB peak-to-notch depth, delay 1/fc
//  10  AM noise, m = 1 (modulator fc)
//  11  high-pass noise, 192 dB/oct, edge at fc
// All outputs are RMS-normalized to -20 dBFS with 10 ms raised-cosine fades.
struct ReferenceSoundSpec {
  int sound_id = 1;               // 1..11
  double center_freq_hz = 500.0;  // one of {125, 250, 500}
  double duration_s = 1.0;
  int sample_rate_hz = 48000;
  std::uint64_t seed = 0;
};

// Iterated rippled noise, "add-same" network:
//   y_0 = seeded white Gaussian noise
//   y_{i+1}(t) = y_i(t) + gain * y_i(t - delay_s)
struct IrnSpec {
  double delay_s = 0.004;
  double gain = 1.0;  // in [-1, 1]
  int iterations = 1;
  double duration_s = 1.0;
  int sample_rate_hz = 48000;
  std::uint64_t seed = 0;
};

// Harmonic complex with partial amplitudes s^(k-1), zero phases.
struct MauchToneSpec {
  double f0_hz = 440.0;
  double s = 0.8;  // in (0, 1)
  int n_harmonics = 10;
  double duration_s = 1.0;
  int sample_rate_hz = 48000;
};

// Memoryless polynomial y = sum_i coeffs[i] * x^i.
struct WaveshaperSpec {
  std::vector<double> polynomial_coeffs;  // c0..cd, degree >= 1
  enum class Normalization { none, peak } output_normalization = Normalization::none;
};

AudioBuffer gen_reference_sound(const ReferenceSoundSpec& spec);
AudioBuffer gen_irn(const IrnSpec& spec);
AudioBuffer gen_mauch_tone(const MauchToneSpec& spec);
AudioBuffer apply_waveshaper(const AudioBuffer& input, const WaveshaperSpec& spec);

// -20 dBFS; shared target of all generators.
inline constexpr double kSynthTargetRms = 0.1;

Eigen::ArrayXd rms_normalized(const Eigen::ArrayXd& x, double target_rms = kSynthTargetRms);

}  // namespace pstk
