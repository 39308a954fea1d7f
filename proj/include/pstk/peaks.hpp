#pragma once

#include <pstk/stft.hpp>

#include <vector>

namespace pstk {

struct SpectralPeak {
  double freq_hz = 0.0;
  double power_db = 0.0;
};

// Local maxima of the dB spectrum with parabolic frequency interpolation.
// Prominence is measured against the lower of the two flanking minima; peaks
// closer than min_separation_hz are resolved in favour of the stronger one.
// Result is sorted ascending by frequency; may be empty.
std::vector<SpectralPeak> pick_spectral_peaks(const SpectrumFrame& frame,
                                              double min_prominence_db,
                                              double min_separation_hz);

// Differences between consecutive peak frequencies. Throws TooFewPeaks.
std::vector<double> overtone_deltas(const std::vector<SpectralPeak>& peaks);

// 69 + 12*log2(f/440). Throws NonpositiveFrequency.
double freq_to_midi(double freq_hz);

}  // namespace pstk
