#pragma once

#include <pstk/audio_buffer.hpp>

#include <vector>

namespace pstk {

enum class Window { hann, rectangular };

struct FramePlan {
  int frame_len = 4096;
  int hop = 1024;
  Window window = Window::hann;
};

// Single-frame power spectrum: bin_power[k] = |X_k|^2 / n_fft, k = 0..n_fft/2.
struct SpectrumFrame {
  Eigen::ArrayXd bin_power;
  double bin_hz = 0.0;
  bool weighted = false;
  int n_fft = 0;

  double sample_rate_hz() const { return bin_hz * n_fft; }
};

Eigen::ArrayXd make_window(Window window, int n);

// One frame per hop while a full frame fits. Throws BufferTooShort.
std::vector<SpectrumFrame> stft(const AudioBuffer& buffer, const FramePlan& plan);

SpectrumFrame power_spectrum(Eigen::Ref<const Eigen::ArrayXd> frame, double sample_rate_hz,
                             Window window = Window::hann);

// Welch estimate: mean of single-frame periodograms over non-overlapping
// sub-frames. n_avg_out reports how many were averaged.
SpectrumFrame average_spectrum(const AudioBuffer& buffer, int frame_len,
                               Window window = Window::hann, int* n_avg_out = nullptr);

}  // namespace pstk
