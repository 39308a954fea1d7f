#include <pstk/autocorr.hpp>

#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>

#include <cmath>

namespace pstk {

namespace {

// Raw autocorrelation sum_{n} x(n) x(n+m) for m = 0..max_lag via
// Wiener-Khinchin on a zero-padded FFT.
Eigen::ArrayXd raw_acf(Eigen::Ref<const Eigen::ArrayXd> x, int max_lag) {
  const Eigen::Index n = x.size();
  const Eigen::Index padded = next_pow2(n + max_lag + 1);
  Eigen::ArrayXd buf = Eigen::ArrayXd::Zero(padded);
  buf.head(n) = x;
  Eigen::ArrayXcd spec = rfft(buf);
  spec = spec.abs2().cast<std::complex<double>>();
  const Eigen::ArrayXd corr = irfft(spec, padded);
  return corr.head(max_lag + 1);
}

}  // namespace

AutocorrResult normalized_autocorrelation(Eigen::Ref<const Eigen::ArrayXd> frame, int max_lag) {
  if (max_lag < 1) throw InvalidArgument("max_lag must be >= 1");
  if (frame.size() < 2 * static_cast<Eigen::Index>(max_lag))
    throw FrameTooShort("frame must be at least 2 * max_lag samples");

  AutocorrResult out;
  out.r = Eigen::ArrayXd::Zero(max_lag);
  const Eigen::Index w = frame.size() - max_lag;

  if ((frame == 0.0).all()) {
    out.degenerate = true;
    return out;
  }

  // prefix sums of x^2 for the shifted-window energies
  Eigen::ArrayXd sq_prefix(frame.size() + 1);
  sq_prefix[0] = 0.0;
  for (Eigen::Index i = 0; i < frame.size(); ++i)
    sq_prefix[i + 1] = sq_prefix[i] + frame[i] * frame[i];
  const double e0 = sq_prefix[w];

  // cross products sum_{n=0}^{W-1} x(n) x(n+m) for all lags at once:
  // correlate the leading window against the full frame.
  const Eigen::Index padded = next_pow2(frame.size() + w);
  Eigen::ArrayXd a = Eigen::ArrayXd::Zero(padded);
  Eigen::ArrayXd b = Eigen::ArrayXd::Zero(padded);
  a.head(w) = frame.head(w);
  b.head(frame.size()) = frame;
  const Eigen::ArrayXcd fa = rfft(a);
  const Eigen::ArrayXcd fb = rfft(b);
  const Eigen::ArrayXd cross = irfft((fa.conjugate() * fb).eval(), padded);

  for (int m = 1; m <= max_lag; ++m) {
    const double em = sq_prefix[m + w] - sq_prefix[m];
    const double denom = std::sqrt(e0 * em);
    if (denom <= 0.0) continue;  // silent shifted window: leave r(m) = 0
    out.r[m - 1] = std::clamp(cross[m] / denom, -1.0, 1.0);
  }
  return out;
}

Eigen::ArrayXd acf_lag0_normalized(Eigen::Ref<const Eigen::ArrayXd> frame, int max_lag,
                                   bool* degenerate) {
  if (max_lag < 1) throw InvalidArgument("max_lag must be >= 1");
  if (frame.size() <= static_cast<Eigen::Index>(max_lag))
    throw FrameTooShort("frame must be longer than max_lag");

  Eigen::ArrayXd acf = raw_acf(frame, max_lag);
  const double energy = acf[0];
  if (degenerate) *degenerate = false;
  if (energy <= 0.0) {
    if (degenerate) *degenerate = true;
    return Eigen::ArrayXd::Zero(max_lag + 1);
  }
  acf /= energy;
  return acf.min(1.0).max(-1.0);
}

}  // namespace pstk
