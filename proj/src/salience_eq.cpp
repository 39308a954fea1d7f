#include <pstk/salience_eq.hpp>

#include <pstk/envelope.hpp>
#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>
#include <pstk/stft.hpp>

#include <cmath>

namespace pstk {

namespace {

void check_settings(const SalienceSettings& s) {
  if (!(s.gain >= -1.0 && s.gain <= 1.0)) throw InvalidArgument("gain must be in [-1, 1]");
  if (s.frame_len < 128 || s.frame_len % 2 != 0)
    throw InvalidArgument("frame_len must be even and >= 128");
  if (s.hop <= 0 || s.hop > s.frame_len / 2)
    throw InvalidArgument("hop must satisfy 0 < hop <= frame_len/2");
  if (s.cutoff_quefrency_s <= 0.0) throw InvalidArgument("cutoff quefrency must be positive");
  if (s.baseline_divisor <= 1.0) throw InvalidArgument("baseline divisor must exceed 1");
}

// Envelope deviation of one frame's power spectrum, in dB per bin.
// Returns false for silent frames.
bool frame_deviation(const Eigen::ArrayXd& power, int n_fft, double sr,
                     const SalienceSettings& s, Eigen::ArrayXd& deviation) {
  const double peak = power.maxCoeff();
  if (peak <= 0.0) return false;
  const Eigen::ArrayXd log_power = 10.0 * power.max(peak * 1e-12).log10();
  const Eigen::ArrayXd env = smooth_db_curve(log_power, n_fft, sr, s.cutoff_quefrency_s);
  const Eigen::ArrayXd base =
      smooth_db_curve(env, n_fft, sr, s.cutoff_quefrency_s / s.baseline_divisor);
  // clamp so floored bins cannot command extreme boosts
  deviation = (env - base).min(60.0).max(-60.0);
  return true;
}

}  // namespace

AudioBuffer apply_salience_gain(const AudioBuffer& buffer, const SalienceSettings& settings) {
  check_settings(settings);
  const int n = settings.frame_len;
  if (buffer.samples.size() < n) throw BufferTooShort("buffer shorter than one frame");
  const double sr = buffer.sample_rate_hz;

  // zero padding on both sides gives every real sample full window coverage,
  // so gain = 0 reconstructs exactly including the edges
  const Eigen::Index pad = n;
  const Eigen::Index padded_len = buffer.samples.size() + 2 * pad;
  Eigen::ArrayXd padded = Eigen::ArrayXd::Zero(padded_len);
  padded.segment(pad, buffer.samples.size()) = buffer.samples;

  const Eigen::ArrayXd window = make_window(Window::hann, n);
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(padded_len);
  Eigen::ArrayXd norm = Eigen::ArrayXd::Zero(padded_len);

  Eigen::ArrayXd deviation;
  for (Eigen::Index start = 0; start + n <= padded_len; start += settings.hop) {
    const Eigen::ArrayXd frame = padded.segment(start, n) * window;
    Eigen::ArrayXcd spec = rfft(frame);
    const Eigen::ArrayXd power = spec.abs2() / static_cast<double>(n);
    if (frame_deviation(power, n, sr, settings, deviation)) {
      // magnitude-only modification; 10^(g*D/20) per bin
      spec *= (settings.gain * deviation * (std::log(10.0) / 20.0))
                  .exp()
                  .cast<std::complex<double>>();
    }
    acc.segment(start, n) += irfft(spec, n) * window;
    norm.segment(start, n) += window.square();
  }

  Eigen::ArrayXd out =
      (norm.segment(pad, buffer.samples.size()) > 1e-12)
          .select(acc.segment(pad, buffer.samples.size()) /
                      norm.segment(pad, buffer.samples.size()).max(1e-12),
                  0.0);

  // energy guard: keep the output peak within 4x the input peak
  const double in_peak = buffer.samples.size() ? buffer.samples.abs().maxCoeff() : 0.0;
  const double out_peak = out.size() ? out.abs().maxCoeff() : 0.0;
  if (in_peak > 0.0 && out_peak > 4.0 * in_peak) out *= 4.0 * in_peak / out_peak;

  return {std::move(out), buffer.sample_rate_hz};
}

SalienceSeries measure_salience(const AudioBuffer& buffer, const SalienceSettings& settings) {
  check_settings(settings);
  const int n = settings.frame_len;
  if (buffer.samples.size() < n) throw BufferTooShort("buffer shorter than one frame");
  const double sr = buffer.sample_rate_hz;
  const double bin_hz = sr / n;
  const auto lo = static_cast<Eigen::Index>(std::ceil(settings.band_lo_hz / bin_hz));
  const auto hi = std::min<Eigen::Index>(
      n / 2, static_cast<Eigen::Index>(std::floor(settings.band_hi_hz / bin_hz)));
  if (hi <= lo) throw EmptyBand("measurement band is empty");

  const Eigen::ArrayXd window = make_window(Window::hann, n);
  SalienceSeries series;
  std::vector<double> values;
  Eigen::ArrayXd deviation;
  for (Eigen::Index start = 0; start + n <= buffer.samples.size(); start += settings.hop) {
    const Eigen::ArrayXd frame = buffer.samples.segment(start, n) * window;
    const Eigen::ArrayXd power = rfft(frame).abs2() / static_cast<double>(n);
    if (frame_deviation(power, n, sr, settings, deviation)) {
      values.push_back(deviation.segment(lo, hi - lo + 1).maxCoeff());
      series.degenerate.push_back(0);
    } else {
      values.push_back(0.0);
      series.degenerate.push_back(1);
    }
  }
  series.frame_db = Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                                     static_cast<Eigen::Index>(values.size()));
  return series;
}

}  // namespace pstk
