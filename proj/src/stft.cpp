#include <pstk/stft.hpp>

#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>

#include <cmath>

namespace pstk {

Eigen::ArrayXd make_window(Window window, int n) {
  if (window == Window::rectangular) return Eigen::ArrayXd::Ones(n);
  // periodic Hann; exactly COLA at hop n/2 and n/4
  Eigen::ArrayXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
  return w;
}

SpectrumFrame power_spectrum(Eigen::Ref<const Eigen::ArrayXd> frame, double sample_rate_hz,
                             Window window) {
  const auto n = frame.size();
  const Eigen::ArrayXd w = make_window(window, static_cast<int>(n));
  const Eigen::ArrayXcd spec = rfft(frame * w);
  SpectrumFrame out;
  out.n_fft = static_cast<int>(n);
  out.bin_hz = sample_rate_hz / static_cast<double>(n);
  out.bin_power = spec.abs2() / static_cast<double>(n);
  return out;
}

std::vector<SpectrumFrame> stft(const AudioBuffer& buffer, const FramePlan& plan) {
  if (plan.frame_len <= 0 || plan.hop <= 0 || plan.hop > plan.frame_len)
    throw InvalidArgument("frame plan requires 0 < hop <= frame_len");
  if (buffer.samples.size() < plan.frame_len)
    throw BufferTooShort("buffer shorter than one frame");

  const Eigen::ArrayXd w = make_window(plan.window, plan.frame_len);
  const double sr = buffer.sample_rate_hz;
  std::vector<SpectrumFrame> frames;
  for (Eigen::Index start = 0; start + plan.frame_len <= buffer.samples.size();
       start += plan.hop) {
    const Eigen::ArrayXcd spec = rfft(buffer.samples.segment(start, plan.frame_len) * w);
    SpectrumFrame f;
    f.n_fft = plan.frame_len;
    f.bin_hz = sr / plan.frame_len;
    f.bin_power = spec.abs2() / static_cast<double>(plan.frame_len);
    frames.push_back(std::move(f));
  }
  return frames;
}

SpectrumFrame average_spectrum(const AudioBuffer& buffer, int frame_len, Window window,
                               int* n_avg_out) {
  if (buffer.samples.size() < frame_len) throw BufferTooShort("buffer shorter than one frame");
  const Eigen::ArrayXd w = make_window(window, frame_len);
  SpectrumFrame acc;
  acc.n_fft = frame_len;
  acc.bin_hz = static_cast<double>(buffer.sample_rate_hz) / frame_len;
  acc.bin_power = Eigen::ArrayXd::Zero(frame_len / 2 + 1);
  int count = 0;
  for (Eigen::Index start = 0; start + frame_len <= buffer.samples.size(); start += frame_len) {
    acc.bin_power += rfft(buffer.samples.segment(start, frame_len) * w).abs2();
    ++count;
  }
  acc.bin_power /= static_cast<double>(count) * frame_len;
  if (n_avg_out) *n_avg_out = count;
  return acc;
}

}  // namespace pstk
