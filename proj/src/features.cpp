#include <pstk/features.hpp>

#include <pstk/autocorr.hpp>
#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>

#include <cmath>

namespace pstk {

double harmonic_ratio(Eigen::Ref<const Eigen::ArrayXd> frame, double sample_rate_hz,
                      const HrParams& params, bool* degenerate) {
  if (sample_rate_hz <= 0.0) throw InvalidArgument("sample rate must be positive");
  if (!(params.lag_lo_hz > 0.0 && params.lag_hi_hz > params.lag_lo_hz))
    throw InvalidArgument("lag range must satisfy 0 < lo < hi");
  const int max_lag = static_cast<int>(std::floor(sample_rate_hz / params.lag_lo_hz));
  const int min_lag =
      std::max(1, static_cast<int>(std::ceil(sample_rate_hz / params.lag_hi_hz)));
  if (frame.size() < 2 * static_cast<Eigen::Index>(max_lag))
    throw FrameTooShort("frame shorter than twice the longest search lag");

  bool degen = false;
  const Eigen::ArrayXd rho = acf_lag0_normalized(frame, max_lag, &degen);
  if (degenerate) *degenerate = degen;
  if (degen) return 0.0;
  const double best = rho.segment(min_lag, max_lag - min_lag + 1).maxCoeff();
  return std::clamp(best, 0.0, 1.0);
}

PsEstimate ps_from_ac1(double ac1, double k) {
  if (!(ac1 >= 0.0 && ac1 <= 1.0)) throw OutOfRange("ac1 must be in [0, 1]");
  if (!(k > 0.0)) throw OutOfRange("k must be positive");
  return {k * std::pow(10.0, ac1), k};
}

double spectral_flatness(const SpectrumFrame& frame, double band_lo_hz, double band_hi_hz,
                         int n_avg) {
  if (n_avg < 1) throw InvalidArgument("n_avg must be >= 1");
  const double nyquist = frame.sample_rate_hz() / 2.0;
  if (!(band_lo_hz >= 0.0 && band_hi_hz > band_lo_hz && band_lo_hz < nyquist))
    throw EmptyBand("band must be non-empty and below Nyquist");

  const auto lo = static_cast<Eigen::Index>(std::ceil(band_lo_hz / frame.bin_hz));
  const auto hi = std::min<Eigen::Index>(
      frame.bin_power.size() - 1, static_cast<Eigen::Index>(std::floor(band_hi_hz / frame.bin_hz)));
  if (hi < lo) throw EmptyBand("band contains no bins");

  const Eigen::ArrayXd band = frame.bin_power.segment(lo, hi - lo + 1);
  const double mean = band.mean();
  if (mean <= 0.0) return 1.0;  // empty spectrum is trivially flat
  const Eigen::ArrayXd floored = band.max(mean * 1e-12);
  const double log_gm = floored.log().mean();
  return std::exp(log_gm) / floored.mean();
}

Eigen::MatrixXd pairwise_hr_matrix(const MauchToneSpec& tone_a, const MauchToneSpec& tone_b) {
  if (tone_a.sample_rate_hz != tone_b.sample_rate_hz)
    throw InvalidArgument("tones must share a sample rate");
  const int sr = tone_a.sample_rate_hz;
  if (tone_a.f0_hz * tone_a.n_harmonics >= sr / 2.0 ||
      tone_b.f0_hz * tone_b.n_harmonics >= sr / 2.0)
    throw NyquistViolation("partials reach Nyquist");

  // 0.2 s frames; pair purity depends on frame length through the lag taper
  const auto n = static_cast<Eigen::Index>(std::lround(0.2 * sr));
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / sr;

  Eigen::MatrixXd out(tone_a.n_harmonics, tone_b.n_harmonics);
  for (int i = 0; i < tone_a.n_harmonics; ++i) {
    const Eigen::ArrayXd pa = (2.0 * M_PI * (i + 1) * tone_a.f0_hz * t).sin();
    for (int j = 0; j < tone_b.n_harmonics; ++j) {
      const Eigen::ArrayXd mix = pa + (2.0 * M_PI * (j + 1) * tone_b.f0_hz * t).sin();
      out(i, j) = harmonic_ratio(mix, sr);
    }
  }
  return out;
}

std::vector<FeatureVector> track_features(const AudioBuffer& buffer, const TrackParams& params) {
  if (buffer.sample_rate_hz <= 0) throw InvalidArgument("bad sample rate");
  const int sr = buffer.sample_rate_hz;
  const auto frame_len = static_cast<Eigen::Index>(std::lround(params.frame_s * sr));
  const auto hop = std::max<Eigen::Index>(1, std::lround(params.hop_s * sr));
  if (buffer.samples.size() < frame_len) throw BufferTooShort("buffer shorter than one frame");
  if (frame_len < 2 * static_cast<Eigen::Index>(sr / params.hr.lag_lo_hz))
    throw FrameTooShort("frame too short for the HR lag range");

  std::vector<FeatureVector> out;
  for (Eigen::Index start = 0; start + frame_len <= buffer.samples.size(); start += hop) {
    const auto frame = buffer.samples.segment(start, frame_len);
    FeatureVector fv;
    bool degen = false;
    fv.harmonic_ratio = harmonic_ratio(frame, sr, params.hr, &degen);
    fv.degenerate = degen;
    if (degen) {
      fv.flatness = 1.0;  // silence carries no spectral shape
      out.push_back(fv);
      continue;
    }
    AudioBuffer view{frame, sr};
    const SpectrumFrame avg = average_spectrum(view, params.welch_subframe, Window::hann);
    const double band_hi = std::min(params.band_hi_hz, 0.95 * sr / 2.0);
    fv.flatness = spectral_flatness(avg, params.band_lo_hz, band_hi,
                                    static_cast<int>(frame_len / params.welch_subframe));
    out.push_back(fv);
  }
  return out;
}

}  // namespace pstk
