#pragma once

#include <Eigen/Dense>

namespace pstk {

struct AutocorrResult {
  Eigen::ArrayXd r;  // r[m-1] holds lag m, m = 1..max_lag
  bool degenerate = false;
};

// Equal-window normalized autocorrelation:
//   r(m) = sum_{n=0}^{W-1} x(n) x(n+m) / sqrt(sum x(n)^2 * sum x(n+m)^2)
// with W = frame.size() - max_lag, so every lag compares windows of the same
// length. Values are clamped to [-1, 1]. An all-zero frame yields all-zero
// output with the degenerate flag set. Requires frame.size() >= 2 * max_lag.
AutocorrResult normalized_autocorrelation(Eigen::Ref<const Eigen::ArrayXd> frame, int max_lag);

// Lag-zero-normalized autocorrelation
//   rho(m) = sum_{n=0}^{N-1-m} x(n) x(n+m) / sum_{n=0}^{N-1} x(n)^2
// for m = 0..max_lag (rho[0] == 1 for non-degenerate input). This is the
// form whose first-peak height tracks rippled-noise pitch strength; the
// fixed denominator gives it a (1 - m/N) taper on periodic input.
Eigen::ArrayXd acf_lag0_normalized(Eigen::Ref<const Eigen::ArrayXd> frame, int max_lag,
                                   bool* degenerate = nullptr);

}  // namespace pstk
