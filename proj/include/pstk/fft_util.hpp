#pragma once

#include <Eigen/Dense>

namespace pstk {

// Real-input FFT helpers (half spectrum, n/2+1 bins). n must be even.
Eigen::ArrayXcd rfft(const Eigen::ArrayXd& x);
Eigen::ArrayXd irfft(const Eigen::ArrayXcd& spectrum, Eigen::Index n);

// Smallest power of two >= n.
Eigen::Index next_pow2(Eigen::Index n);

}  // namespace pstk
