#include <pstk/iso226.hpp>

#include <pstk/errors.hpp>

#include <array>
#include <cmath>
#include <mutex>
#include <vector>

namespace pstk {

namespace {

constexpr int kNumFreqs = 29;

// ISO 226:2003 parameter tables: frequency, exponent alpha_f, transfer
// magnitude L_U (dB), hearing threshold T_f (dB).
constexpr std::array<double, kNumFreqs> kFreq = {
    20.0,   25.0,   31.5,   40.0,   50.0,   63.0,   80.0,    100.0,   125.0,  160.0,
    200.0,  250.0,  315.0,  400.0,  500.0,  630.0,  800.0,   1000.0,  1250.0, 1600.0,
    2000.0, 2500.0, 3150.0, 4000.0, 5000.0, 6300.0, 8000.0,  10000.0, 12500.0};
constexpr std::array<double, kNumFreqs> kAlpha = {
    0.532, 0.506, 0.480, 0.455, 0.432, 0.409, 0.387, 0.367, 0.349, 0.330,
    0.315, 0.301, 0.288, 0.276, 0.267, 0.259, 0.253, 0.250, 0.246, 0.244,
    0.243, 0.243, 0.243, 0.242, 0.242, 0.245, 0.254, 0.271, 0.301};
constexpr std::array<double, kNumFreqs> kLu = {
    -31.6, -27.2, -23.0, -19.1, -15.9, -13.0, -10.3, -8.1, -6.2, -4.5,
    -3.1,  -2.0,  -1.1,  -0.4,  0.0,   0.3,   0.5,   0.0,  -2.7, -4.1,
    -1.0,  1.7,   2.5,   1.2,   -2.1,  -7.1,  -11.2, -10.7, -3.1};
constexpr std::array<double, kNumFreqs> kTf = {
    78.5, 68.7, 59.5, 51.1, 44.0, 37.5, 31.5, 26.5, 22.1, 17.9,
    14.4, 11.4, 8.6,  6.2,  4.4,  3.0,  2.2,  2.4,  3.5,  1.7,
    -1.3, -4.2, -6.0, -5.4, -1.5, 6.0,  12.6, 13.9, 12.3};

double contour_at_index(int i, double phon) {
  const double af = kAlpha[static_cast<std::size_t>(i)];
  const double lu = kLu[static_cast<std::size_t>(i)];
  const double tf = kTf[static_cast<std::size_t>(i)];
  const double a = 4.47e-3 * (std::pow(10.0, 0.025 * phon) - 1.15) +
                   std::pow(0.4 * std::pow(10.0, (tf + lu) / 10.0 - 9.0), af);
  return (10.0 / af) * std::log10(a) - lu + 94.0;
}

// Natural cubic spline through the 29 contour points on x = log10(f).
struct ContourSpline {
  std::array<double, kNumFreqs> x{};
  std::array<double, kNumFreqs> y{};
  std::array<double, kNumFreqs> m{};  // second derivatives

  explicit ContourSpline(double phon) {
    for (int i = 0; i < kNumFreqs; ++i) {
      x[static_cast<std::size_t>(i)] = std::log10(kFreq[static_cast<std::size_t>(i)]);
      y[static_cast<std::size_t>(i)] = contour_at_index(i, phon);
    }
    // Thomas solve of the tridiagonal system, natural end conditions.
    std::array<double, kNumFreqs> c{};
    std::array<double, kNumFreqs> d{};
    m[0] = m[kNumFreqs - 1] = 0.0;
    c[0] = 0.0;
    d[0] = 0.0;
    for (int i = 1; i < kNumFreqs - 1; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double rhs =
          6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
      const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
      c[i] = h1 / diag;
      d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (int i = kNumFreqs - 2; i >= 1; --i) m[i] = d[i] - c[i] * m[i + 1];
  }

  double eval(double freq_hz) const {
    if (freq_hz <= kFreq.front()) return y.front();
    if (freq_hz >= kFreq.back()) return y.back();
    const double xv = std::log10(freq_hz);
    int lo = 0;
    int hi = kNumFreqs - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (x[mid] <= xv ? lo : hi) = mid;
    }
    const double h = x[hi] - x[lo];
    const double a = (x[hi] - xv) / h;
    const double b = (xv - x[lo]) / h;
    return a * y[lo] + b * y[hi] +
           ((a * a * a - a) * m[lo] + (b * b * b - b) * m[hi]) * h * h / 6.0;
  }
};

const ContourSpline& spline_for(double phon) {
  // analyses touch a handful of phon values; cache the fitted splines
  static std::mutex mu;
  static std::vector<std::pair<double, ContourSpline>> cache;
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& [p, s] : cache)
    if (p == phon) return s;
  cache.emplace_back(phon, ContourSpline(phon));
  return cache.back().second;
}

void check_phon(double phon) {
  if (!(phon >= 20.0 && phon <= 80.0))
    throw PhonOutOfRange("phon must be in [20, 80]");
}

}  // namespace

double iso226_spl(double freq_hz, double phon) {
  check_phon(phon);
  if (!(freq_hz > 0.0)) throw NonpositiveFrequency("frequency must be positive");
  return spline_for(phon).eval(freq_hz);
}

double iso226_gain_db(double freq_hz, double phon) {
  check_phon(phon);
  const ContourSpline& s = spline_for(phon);
  return s.eval(1000.0) - s.eval(freq_hz);
}

Eigen::ArrayXd iso226_gains(Eigen::Index n_bins, double bin_hz, double phon) {
  check_phon(phon);
  const ContourSpline& s = spline_for(phon);
  const double ref = s.eval(1000.0);
  Eigen::ArrayXd g(n_bins);
  for (Eigen::Index k = 0; k < n_bins; ++k) {
    const double f = std::max(static_cast<double>(k) * bin_hz, 1.0);
    g[k] = std::pow(10.0, (ref - s.eval(f)) / 10.0);
  }
  return g;
}

SpectrumFrame iso226_weight(const SpectrumFrame& frame, double phon) {
  if (frame.weighted) throw AlreadyWeighted("spectrum frame already weighted");
  check_phon(phon);
  SpectrumFrame out = frame;
  out.bin_power *= iso226_gains(frame.bin_power.size(), frame.bin_hz, phon);
  out.weighted = true;
  return out;
}

}  // namespace pstk
