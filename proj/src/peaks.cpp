#include <pstk/peaks.hpp>

#include <pstk/errors.hpp>

#include <algorithm>
#include <cmath>

namespace pstk {

std::vector<SpectralPeak> pick_spectral_peaks(const SpectrumFrame& frame,
                                              double min_prominence_db,
                                              double min_separation_hz) {
  const Eigen::ArrayXd& p = frame.bin_power;
  const Eigen::Index n = p.size();
  if (n < 3) return {};

  const double peak_power = p.maxCoeff();
  const double floor_power = peak_power > 0.0 ? peak_power * 1e-12 : 1e-30;
  Eigen::ArrayXd db = 10.0 * p.max(floor_power).log10();

  struct Candidate {
    Eigen::Index bin;
    double freq;
    double level_db;
  };
  std::vector<Candidate> candidates;

  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    if (!(db[k] > db[k - 1] && db[k] >= db[k + 1])) continue;

    // walk down each side to the flanking minimum
    double left_min = db[k];
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      left_min = std::min(left_min, db[i]);
      if (db[i] > db[k]) break;
    }
    double right_min = db[k];
    for (Eigen::Index i = k + 1; i < n; ++i) {
      right_min = std::min(right_min, db[i]);
      if (db[i] > db[k]) break;
    }
    if (db[k] - std::min(left_min, right_min) < min_prominence_db) continue;

    // parabolic interpolation on the dB values
    const double l = db[k - 1];
    const double c = db[k];
    const double r = db[k + 1];
    const double denom = l - 2.0 * c + r;
    double delta = denom != 0.0 ? 0.5 * (l - r) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    candidates.push_back({k, (static_cast<double>(k) + delta) * frame.bin_hz,
                          c - 0.25 * (l - r) * delta});
  }

  // strongest-first suppression within min_separation_hz
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.level_db > b.level_db; });
  std::vector<Candidate> kept;
  for (const Candidate& c : candidates) {
    bool blocked = false;
    for (const Candidate& k : kept) {
      if (std::abs(k.freq - c.freq) < min_separation_hz) {
        blocked = true;
        break;
      }
    }
    if (!blocked) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Candidate& a, const Candidate& b) { return a.freq < b.freq; });

  std::vector<SpectralPeak> out;
  out.reserve(kept.size());
  for (const Candidate& c : kept) out.push_back({c.freq, c.level_db});
  return out;
}

std::vector<double> overtone_deltas(const std::vector<SpectralPeak>& peaks) {
  if (peaks.size() < 2) throw TooFewPeaks("need at least 2 peaks");
  std::vector<double> deltas(peaks.size() - 1);
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i)
    deltas[i] = peaks[i + 1].freq_hz - peaks[i].freq_hz;
  return deltas;
}

double freq_to_midi(double freq_hz) {
  if (!(freq_hz > 0.0)) throw NonpositiveFrequency("frequency must be positive");
  return 69.0 + 12.0 * std::log2(freq_hz / 440.0);
}

}  // namespace pstk
