#pragma once

#include <pstk/stft.hpp>

#include <Eigen/Dense>

namespace pstk {

// Equal-loudness contour SPL (dB) at `freq_hz` for loudness level `phon`,
// evaluated from the ISO 226:2003 parameter tables at the 29 standard
// frequencies and cubic-spline interpolated on log-frequency in between.
// Outside [20, 12500] Hz the nearest endpoint value is used.
double iso226_spl(double freq_hz, double phon);

// Weighting gain in dB: contour value at 1 kHz minus contour value at f,
// so the gain at 1 kHz is exactly 0 dB.
double iso226_gain_db(double freq_hz, double phon);

// Linear-power gains for an n_bins half spectrum with the given bin spacing.
Eigen::ArrayXd iso226_gains(Eigen::Index n_bins, double bin_hz, double phon);

// Returns a weighted copy. Throws AlreadyWeighted / PhonOutOfRange
// (valid phon range is [20, 80]).
SpectrumFrame iso226_weight(const SpectrumFrame& frame, double phon);

}  // namespace pstk
