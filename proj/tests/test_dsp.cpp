#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pstk/autocorr.hpp>
#include <pstk/errors.hpp>

#include "test_helpers.hpp"
#include <pstk/iso226.hpp>
#include <pstk/rng.hpp>
#include <pstk/stft.hpp>

#include <cmath>

using namespace pstk;
using namespace pstk::test;

namespace {

// ISO 226:2003 contour evaluated straight from the parameter tables at the
// tabulated frequencies: the independent oracle for the weighting path.
double iso226_table_spl(int index, double phon) {
  static const double alpha[] = {0.532, 0.506, 0.480, 0.455, 0.432, 0.409, 0.387, 0.367,
                                 0.349, 0.330, 0.315, 0.301, 0.288, 0.276, 0.267, 0.259,
                                 0.253, 0.250, 0.246, 0.244, 0.243, 0.243, 0.243, 0.242,
                                 0.242, 0.245, 0.254, 0.271, 0.301};
  static const double lu[] = {-31.6, -27.2, -23.0, -19.1, -15.9, -13.0, -10.3, -8.1,
                              -6.2,  -4.5,  -3.1,  -2.0,  -1.1,  -0.4,  0.0,   0.3,
                              0.5,   0.0,   -2.7,  -4.1,  -1.0,  1.7,   2.5,   1.2,
                              -2.1,  -7.1,  -11.2, -10.7, -3.1};
  static const double tf[] = {78.5, 68.7, 59.5, 51.1, 44.0, 37.5, 31.5, 26.5, 22.1, 17.9,
                              14.4, 11.4, 8.6,  6.2,  4.4,  3.0,  2.2,  2.4,  3.5,  1.7,
                              -1.3, -4.2, -6.0, -5.4, -1.5, 6.0,  12.6, 13.9, 12.3};
  const double a = 4.47e-3 * (std::pow(10.0, 0.025 * phon) - 1.15) +
                   std::pow(0.4 * std::pow(10.0, (tf[index] + lu[index]) / 10.0 - 9.0),
                            alpha[index]);
  return (10.0 / alpha[index]) * std::log10(a) - lu[index] + 94.0;
}

}  // namespace

// ---------------------------------------------------------------- stft ----

TEST_CASE("stft localizes a sinusoid") {
  const AudioBuffer buf = sine(1000.0, 1.0, 48000);
  FramePlan plan;  // 4096 / 1024 hann
  const auto frames = stft(buf, plan);
  REQUIRE(frames.size() > 10);
  for (const SpectrumFrame& f : frames) {
    Eigen::Index argmax = 0;
    f.bin_power.maxCoeff(&argmax);
    CHECK(std::abs(static_cast<double>(argmax) - 1000.0 / f.bin_hz) <= 1.0);
  }
}

TEST_CASE("DC signal with rectangular window lands in bin 0") {
  AudioBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples = Eigen::ArrayXd::Constant(1024, 0.5);
  FramePlan plan{1024, 1024, Window::rectangular};
  const auto frames = stft(buf, plan);
  REQUIRE(frames.size() == 1);
  const Eigen::ArrayXd& p = frames[0].bin_power;
  CHECK(p[0] > 0.0);
  CHECK(p.tail(p.size() - 1).maxCoeff() < 1e-18 * p[0]);
}

TEST_CASE("Parseval: weighted bin sum equals the windowed frame mean square") {
  Rng rng(3);
  AudioBuffer buf;
  buf.sample_rate_hz = 48000;
  buf.samples = rng.gaussian_vector(8192);
  FramePlan plan{4096, 2048, Window::hann};
  const Eigen::ArrayXd w = make_window(Window::hann, plan.frame_len);
  const auto frames = stft(buf, plan);
  REQUIRE(!frames.empty());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Eigen::ArrayXd& p = frames[i].bin_power;
    // half-spectrum: double the interior bins
    double total = p[0] + p[p.size() - 1];
    total += 2.0 * p.segment(1, p.size() - 2).sum();
    const Eigen::ArrayXd frame =
        buf.samples.segment(static_cast<Eigen::Index>(i) * plan.hop, plan.frame_len) * w;
    const double mean_sq = frame.square().mean();
    CHECK(total / plan.frame_len == doctest::Approx(mean_sq).epsilon(1e-6));
  }
}

TEST_CASE("stft rejects short buffers and bad plans") {
  AudioBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples = Eigen::ArrayXd::Zero(100);
  CHECK_THROWS_AS(stft(buf, FramePlan{1024, 256, Window::hann}), BufferTooShort);
  buf.samples = Eigen::ArrayXd::Zero(4096);
  CHECK_THROWS_AS(stft(buf, FramePlan{1024, 2048, Window::hann}), InvalidArgument);
}

// ------------------------------------------------------------- iso 226 ----

TEST_CASE("weighting gain at 1 kHz is 0 dB at every phon level") {
  for (double phon : {20.0, 40.0, 60.0, 80.0}) {
    CHECK(std::abs(iso226_gain_db(1000.0, phon)) < 0.01);
  }
}

TEST_CASE("contour matches the parameter-table oracle at tabulated points") {
  // indices into the 29-frequency table: 25 Hz, 100 Hz, 500 Hz, 8 kHz
  const struct {
    int index;
    double freq;
  } probes[] = {{1, 25.0}, {7, 100.0}, {14, 500.0}, {26, 8000.0}};
  for (const auto& p : probes) {
    for (double phon : {40.0, 60.0, 80.0}) {
      CHECK(iso226_spl(p.freq, phon) ==
            doctest::Approx(iso226_table_spl(p.index, phon)).epsilon(1e-9));
    }
  }
  // spot anchor: published 60-phon contour value at 25 Hz is about 104.2 dB SPL
  CHECK(iso226_spl(25.0, 60.0) == approx(104.23, 0.05));
  // so the 60-phon weighting gain at 25 Hz is about -44.2 dB
  CHECK(iso226_gain_db(25.0, 60.0) == approx(-(104.23 - 60.01), 0.1));
}

TEST_CASE("out-of-table frequencies clamp to the endpoints") {
  CHECK(iso226_spl(5.0, 60.0) == iso226_spl(20.0, 60.0));
  CHECK(iso226_spl(20000.0, 60.0) == iso226_spl(12500.0, 60.0));
}

TEST_CASE("weighting a flat spectrum then unweighting returns it") {
  SpectrumFrame frame;
  frame.n_fft = 2048;
  frame.bin_hz = 48000.0 / 2048;
  frame.bin_power = Eigen::ArrayXd::Ones(1025);
  const SpectrumFrame weighted = iso226_weight(frame, 60.0);
  CHECK(weighted.weighted);
  const Eigen::ArrayXd gains = iso226_gains(1025, frame.bin_hz, 60.0);
  const Eigen::ArrayXd back = weighted.bin_power / gains;
  CHECK((back - 1.0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("weighting errors") {
  SpectrumFrame frame;
  frame.n_fft = 256;
  frame.bin_hz = 48000.0 / 256;
  frame.bin_power = Eigen::ArrayXd::Ones(129);
  CHECK_THROWS_AS(iso226_weight(frame, 10.0), PhonOutOfRange);
  CHECK_THROWS_AS(iso226_weight(frame, 90.0), PhonOutOfRange);
  const SpectrumFrame once = iso226_weight(frame, 60.0);
  CHECK_THROWS_AS(iso226_weight(once, 60.0), AlreadyWeighted);
}

// --------------------------------------------------------- autocorr -------

TEST_CASE("normalized autocorrelation of a sine hits +1 at the period") {
  const int sr = 48000;
  const double f = 500.0;
  const AudioBuffer buf = sine(f, 0.5, sr);
  const int period = sr / 500;  // exactly 96 samples
  const auto res = normalized_autocorrelation(buf.samples, 2 * period);
  CHECK(!res.degenerate);
  CHECK(res.r[period - 1] == doctest::Approx(1.0).epsilon(1e-6));
  // half period: antiperiodic
  CHECK(res.r[period / 2 - 1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(res.r.maxCoeff() <= 1.0);
  CHECK(res.r.minCoeff() >= -1.0);
}

TEST_CASE("white-noise autocorrelation stays below the extreme-value bound") {
  // 4096-sample comparison windows, 1000 lags: bound ~ sqrt(2 ln 1000 / 4096)
  Rng rng(42);
  const Eigen::ArrayXd noise = rng.gaussian_vector(4096 + 1000);
  const auto res = normalized_autocorrelation(noise, 1000);
  CHECK(res.r.abs().maxCoeff() < 0.1);
}

TEST_CASE("all-zero frames are flagged degenerate") {
  const Eigen::ArrayXd zeros = Eigen::ArrayXd::Zero(4000);
  const auto res = normalized_autocorrelation(zeros, 100);
  CHECK(res.degenerate);
  CHECK((res.r == 0.0).all());

  bool degen = false;
  const Eigen::ArrayXd rho = acf_lag0_normalized(zeros, 100, &degen);
  CHECK(degen);
  CHECK((rho == 0.0).all());
}

TEST_CASE("frame length preconditions") {
  const Eigen::ArrayXd x = Eigen::ArrayXd::Random(100);
  CHECK_THROWS_AS(normalized_autocorrelation(x, 60), FrameTooShort);
  CHECK_THROWS_AS(acf_lag0_normalized(x, 100), FrameTooShort);
}

TEST_CASE("autocorrelation stays in [-1, 1] for arbitrary signals") {
  Rng rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    Eigen::ArrayXd x(2000);
    switch (trial % 4) {
      case 0: x = rng.gaussian_vector(2000); break;
      case 1: x = Eigen::ArrayXd::LinSpaced(2000, -3.0, 5.0); break;
      case 2:  // sparse spikes
        x.setZero();
        for (int s = 0; s < 10; ++s)
          x[static_cast<Eigen::Index>(rng.uniform() * 2000)] = 100.0 * (rng.uniform() - 0.5);
        break;
      default: x = rng.gaussian_vector(2000) * 1e-8 + 0.5; break;
    }
    const auto res = normalized_autocorrelation(x, 900);
    CHECK(res.r.maxCoeff() <= 1.0);
    CHECK(res.r.minCoeff() >= -1.0);
    const Eigen::ArrayXd rho = acf_lag0_normalized(x, 900);
    CHECK(rho.maxCoeff() <= 1.0);
    CHECK(rho.minCoeff() >= -1.0);
  }
}

TEST_CASE("lag-zero-normalized form tapers linearly on periodic input") {
  const int sr = 48000;
  const AudioBuffer buf = sine(500.0, 0.2, sr);
  const int period = 96;
  const Eigen::ArrayXd rho = acf_lag0_normalized(buf.samples, 4 * period);
  const double n = static_cast<double>(buf.samples.size());
  CHECK(rho[0] == doctest::Approx(1.0));
  CHECK(rho[period] == approx(1.0 - period / n, 1e-3));
  CHECK(rho[2 * period] == approx(1.0 - 2 * period / n, 1e-3));
}
