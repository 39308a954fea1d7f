#pragma once

#include <Eigen/Dense>

namespace pstk {

// Mono signal carrier. Samples are dimensionless amplitudes, nominal range
// [-1, 1]; sample_rate_hz > 0. Immutable by convention once handed out.
struct AudioBuffer {
  Eigen::ArrayXd samples;
  int sample_rate_hz = 0;

  Eigen::Index size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
  bool valid() const {
    return sample_rate_hz > 0 && (samples.size() == 0 || samples.allFinite());
  }
};

inline double rms(const Eigen::ArrayXd& x) {
  return x.size() == 0 ? 0.0 : std::sqrt(x.square().mean());
}

}  // namespace pstk
