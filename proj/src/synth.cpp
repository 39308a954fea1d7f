#include <pstk/synth.hpp>

#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>
#include <pstk/rng.hpp>

#include <cmath>
#include <functional>

namespace pstk {

namespace {

Eigen::ArrayXd time_axis(Eigen::Index n, int sr) {
  return Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / sr;
}

void apply_raised_cosine_fades(Eigen::ArrayXd& x, int sr, double fade_s = 0.010) {
  const Eigen::Index nf = std::min<Eigen::Index>(x.size() / 2, std::lround(fade_s * sr));
  for (Eigen::Index i = 0; i < nf; ++i) {
    const double g = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(i) / nf);
    x[i] *= g;
    x[x.size() - 1 - i] *= g;
  }
}

// Gaussian noise with an exact magnitude profile, synthesized in the
// frequency domain at the output length (no truncation, so the band edges
// stay clean). mag_at_hz gives the target amplitude response.
Eigen::ArrayXd shaped_noise(Eigen::Index n, int sr, Rng& rng,
                            const std::function<double(double)>& mag_at_hz) {
  const Eigen::Index even_n = n + (n & 1);
  const Eigen::Index half = even_n / 2 + 1;
  const double bin_hz = static_cast<double>(sr) / even_n;
  Eigen::ArrayXcd spec(half);
  for (Eigen::Index k = 0; k < half; ++k) {
    const double mag = mag_at_hz(k * bin_hz);
    if (k == 0 || k == half - 1) {
      spec[k] = std::complex<double>(rng.gaussian() * mag, 0.0);
    } else {
      spec[k] = std::complex<double>(rng.gaussian() * mag, rng.gaussian() * mag);
    }
  }
  return irfft(spec, even_n).head(n);
}

double octave_skirt(double f, double edge_lo, double edge_hi, double slope_db_per_oct) {
  // flat in [edge_lo, edge_hi], slope_db_per_oct dB per octave outside
  double atten_db = 0.0;
  if (edge_lo > 0.0 && f < edge_lo)
    atten_db = f <= 0.0 ? 400.0 : slope_db_per_oct * std::log2(edge_lo / f);
  else if (f > edge_hi)
    atten_db = slope_db_per_oct * std::log2(f / edge_hi);
  return std::pow(10.0, -std::min(atten_db, 400.0) / 20.0);
}

Eigen::ArrayXd harmonic_complex(Eigen::Index n, int sr, double f0, int k_min, int k_max,
                                double power_slope_db_per_oct) {
  const Eigen::ArrayXd t = time_axis(n, sr);
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  for (int k = k_min; k <= k_max; ++k) {
    // partial k sits log2(k) octaves up: amplitude_db = slope * log2(k) / 2
    const double amp = std::pow(10.0, power_slope_db_per_oct * std::log2(k) / 20.0);
    x += amp * (2.0 * M_PI * k * f0 * t).sin();
  }
  return x;
}

}  // namespace

Eigen::ArrayXd rms_normalized(const Eigen::ArrayXd& x, double target_rms) {
  const double r = rms(x);
  if (r <= 0.0) return x;
  return x * (target_rms / r);
}

AudioBuffer gen_reference_sound(const ReferenceSoundSpec& spec) {
  if (spec.sound_id < 1 || spec.sound_id > 11) throw InvalidSpec("sound_id must be 1..11");
  const double fc = spec.center_freq_hz;
  if (fc != 125.0 && fc != 250.0 && fc != 500.0)
    throw InvalidSpec("center frequency must be 125, 250 or 500 Hz");
  if (spec.duration_s <= 0.0 || spec.sample_rate_hz <= 0)
    throw InvalidSpec("duration and sample rate must be positive");
  const int sr = spec.sample_rate_hz;
  if (fc >= sr / 2.0) throw InvalidSpec("center frequency at or above Nyquist");
  if (spec.sound_id == 5 && 4.0 * fc >= sr / 2.0)
    throw InvalidSpec("sample rate too low for the 4*fc AM carrier");

  const auto n = static_cast<Eigen::Index>(std::lround(spec.duration_s * sr));
  const double nyquist = sr / 2.0;
  Rng rng(spec.seed * 11 + static_cast<std::uint64_t>(spec.sound_id));
  const Eigen::ArrayXd t = time_axis(n, sr);
  Eigen::ArrayXd x;

  switch (spec.sound_id) {
    case 1:
      x = (2.0 * M_PI * fc * t).sin();
      break;
    case 2:
      x = harmonic_complex(n, sr, fc, 1, 7, -3.0);
      break;
    case 3: {
      const int k_max = static_cast<int>(std::ceil(nyquist / fc)) - 1;
      x = harmonic_complex(n, sr, fc, 1, k_max, -3.0);
      break;
    }
    case 4:
      x = shaped_noise(n, sr, rng, [fc](double f) {
        return (f >= fc - 5.0 && f <= fc + 5.0) ? 1.0 : 0.0;
      });
      break;
    case 5:
      x = (1.0 + (2.0 * M_PI * fc * t).cos()) * (2.0 * M_PI * 4.0 * fc * t).sin();
      break;
    case 6:
      // partials restricted to [0.5*fc, 2*fc]: k = 1, 2
      x = harmonic_complex(n, sr, fc, 1, 2, -3.0);
      break;
    case 7:
      x = shaped_noise(n, sr, rng, [fc](double f) {
        return octave_skirt(f, 0.5 * fc, 2.0 * fc, 96.0);
      });
      break;
    case 8:
      x = shaped_noise(n, sr, rng, [fc](double f) {
        return octave_skirt(f, 0.0, fc, 192.0);
      });
      break;
    case 9: {
      // peak-to-notch depth d dB: (1+g)/(1-g) = 10^(d/20)
      const double ratio = std::pow(10.0, 40.0 / 20.0);
      const double g = (ratio - 1.0) / (ratio + 1.0);
      const auto delay = static_cast<Eigen::Index>(std::lround(sr / fc));
      const Eigen::ArrayXd noise = rng.gaussian_vector(n + delay);
      x.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) x[i] = noise[i + delay] + g * noise[i];
      break;
    }
    case 10:
      x = (1.0 + (2.0 * M_PI * fc * t).cos()) * rng.gaussian_vector(n);
      break;
    case 11:
      x = shaped_noise(n, sr, rng, [fc, nyquist](double f) {
        return octave_skirt(f, fc, nyquist + 1.0, 192.0);
      });
      break;
    default:
      throw InvalidSpec("unreachable");
  }

  x = rms_normalized(x);
  apply_raised_cosine_fades(x, sr);
  return {std::move(x), sr};
}

AudioBuffer gen_irn(const IrnSpec& spec) {
  if (spec.duration_s <= 0.0 || spec.sample_rate_hz <= 0)
    throw InvalidSpec("duration and sample rate must be positive");
  if (spec.gain < -1.0 || spec.gain > 1.0) throw InvalidSpec("gain must be in [-1, 1]");
  if (spec.iterations < 0 || spec.iterations > 64)
    throw InvalidSpec("iterations must be in [0, 64]");
  const auto delay = static_cast<Eigen::Index>(std::lround(spec.delay_s * spec.sample_rate_hz));
  if (delay < 1) throw InvalidSpec("delay must be at least one sample");

  const auto n = static_cast<Eigen::Index>(std::lround(spec.duration_s * spec.sample_rate_hz));
  Rng rng(spec.seed);
  // zero initial conditions: the first `delay` samples of each pass carry no
  // ripple, and gain = 0 reproduces the iteration-0 buffer bit-exactly
  Eigen::ArrayXd y = rng.gaussian_vector(n);
  for (int it = 0; it < spec.iterations; ++it) {
    if (delay >= n) break;
    Eigen::ArrayXd next = y;
    next.tail(n - delay) += spec.gain * y.head(n - delay);
    y = std::move(next);
  }
  return {rms_normalized(y), spec.sample_rate_hz};
}

AudioBuffer gen_mauch_tone(const MauchToneSpec& spec) {
  if (spec.duration_s <= 0.0 || spec.sample_rate_hz <= 0)
    throw InvalidSpec("duration and sample rate must be positive");
  if (spec.f0_hz <= 0.0 || spec.n_harmonics < 1) throw InvalidSpec("bad f0 or harmonic count");
  if (!(spec.s > 0.0 && spec.s < 1.0)) throw InvalidSpec("s must be in (0, 1)");
  if (spec.f0_hz * spec.n_harmonics >= spec.sample_rate_hz / 2.0)
    throw NyquistViolation("highest partial reaches Nyquist");

  const auto n = static_cast<Eigen::Index>(std::lround(spec.duration_s * spec.sample_rate_hz));
  const Eigen::ArrayXd t = time_axis(n, spec.sample_rate_hz);
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  double amp = 1.0;
  for (int k = 1; k <= spec.n_harmonics; ++k, amp *= spec.s)
    x += amp * (2.0 * M_PI * k * spec.f0_hz * t).sin();
  return {rms_normalized(x), spec.sample_rate_hz};
}

AudioBuffer apply_waveshaper(const AudioBuffer& input, const WaveshaperSpec& spec) {
  if (spec.polynomial_coeffs.size() < 2) throw InvalidSpec("polynomial degree must be >= 1");
  for (double c : spec.polynomial_coeffs)
    if (!std::isfinite(c)) throw InvalidSpec("non-finite polynomial coefficient");

  Eigen::ArrayXd y(input.samples.size());
  for (Eigen::Index i = 0; i < input.samples.size(); ++i) {
    const double x = input.samples[i];
    double acc = 0.0;
    for (auto it = spec.polynomial_coeffs.rbegin(); it != spec.polynomial_coeffs.rend(); ++it)
      acc = acc * x + *it;
    y[i] = acc;
  }
  if (spec.output_normalization == WaveshaperSpec::Normalization::peak) {
    const double in_peak = input.samples.size() ? input.samples.abs().maxCoeff() : 0.0;
    const double out_peak = y.size() ? y.abs().maxCoeff() : 0.0;
    if (out_peak > 0.0 && in_peak > 0.0) y *= in_peak / out_peak;
  }
  return {std::move(y), input.sample_rate_hz};
}

}  // namespace pstk
