#include <pstk/envelope.hpp>

#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>

#include <cmath>

namespace pstk {

namespace {

// Lifter a dB half-curve: symmetric extension, forward FFT, zero quefrencies
// above the cutoff index, inverse FFT.
Eigen::ArrayXd lifter(const Eigen::ArrayXd& half_db, int n_fft, int cutoff_index) {
  const Eigen::Index half = half_db.size();  // n_fft/2 + 1
  Eigen::ArrayXd sym(n_fft);
  sym.head(half) = half_db;
  for (Eigen::Index k = half; k < n_fft; ++k) sym[k] = half_db[n_fft - k];

  Eigen::ArrayXcd ceps = rfft(sym);
  const int keep = std::min<int>(cutoff_index, static_cast<int>(half) - 2);
  for (Eigen::Index q = keep + 1; q < ceps.size(); ++q) ceps[q] = 0.0;
  // even input: the cepstrum is real up to rounding
  ceps.imag().setZero();
  return irfft(ceps, n_fft).head(half);
}

}  // namespace

Eigen::ArrayXd smooth_db_curve(const Eigen::ArrayXd& db, int n_fft, double sample_rate_hz,
                               double cutoff_quefrency_s) {
  if (cutoff_quefrency_s <= 0.0) throw InvalidArgument("cutoff quefrency must be positive");
  const int cutoff_index =
      std::max(1, static_cast<int>(std::lround(cutoff_quefrency_s * sample_rate_hz)));
  return lifter(db, n_fft, cutoff_index);
}

EnvelopeFrame spectral_envelope(const SpectrumFrame& frame, double cutoff_quefrency_s) {
  if (frame.bin_power.size() < 64) throw InvalidArgument("need at least 64 bins");
  if (cutoff_quefrency_s <= 0.0) throw InvalidArgument("cutoff quefrency must be positive");

  const double peak = frame.bin_power.maxCoeff();
  const double floor_power = peak > 0.0 ? peak * 1e-12 : 1e-30;
  const Eigen::ArrayXd log_power =
      10.0 * frame.bin_power.max(floor_power).log10();

  EnvelopeFrame out;
  out.cutoff_quefrency_s = cutoff_quefrency_s;
  out.env_db = smooth_db_curve(log_power, frame.n_fft, frame.sample_rate_hz(),
                               cutoff_quefrency_s);
  return out;
}

}  // namespace pstk
