#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pstk/errors.hpp>

#include "test_helpers.hpp"
#include <pstk/rng.hpp>
#include <pstk/space.hpp>

#include <cmath>

using namespace pstk;
using namespace pstk::test;

// -------------------------------------------------------- normalizations ----

TEST_CASE("inharmonicity transform maps the golden HarmonicRatio pair") {
  CHECK(normalize_inharmonicity(0.829) == approx(0.690, 0.001));
  CHECK(normalize_inharmonicity(0.964) == approx(0.497, 0.001));
  CHECK(normalize_inharmonicity(0.0) == doctest::Approx(1.0));
  CHECK(normalize_inharmonicity(1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(normalize_inharmonicity(1.5), OutOfRange);
  CHECK_THROWS_AS(normalize_inharmonicity(-0.1), OutOfRange);
}

TEST_CASE("inharmonicity transform is strictly decreasing") {
  double prev = 2.0;
  for (double hr = 0.0; hr <= 1.0; hr += 0.01) {
    const double v = normalize_inharmonicity(hr);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("noisiness normalization is an affine clamped map of log flatness") {
  CorpusStats stats;
  stats.flatness_log_min = -30.0;
  stats.flatness_log_max = -10.0;
  // endpoint: flatness = 10^(max/10)
  CHECK(normalize_noisiness(std::pow(10.0, -1.0), stats) == doctest::Approx(1.0));
  // midpoint of the log range
  CHECK(normalize_noisiness(std::pow(10.0, -2.0), stats) == doctest::Approx(0.5));
  // clamped outside
  CHECK(normalize_noisiness(1.0, stats) == 1.0);
  CHECK(normalize_noisiness(1e-9, stats) == 0.0);
  CHECK_THROWS_AS(normalize_noisiness(0.0, stats), NonpositiveFlatness);
}

TEST_CASE("noisiness normalization is strictly increasing inside the range") {
  CorpusStats stats;
  stats.flatness_log_min = -30.0;
  stats.flatness_log_max = -5.0;
  double prev = -1.0;
  for (double db = -29.0; db < -6.0; db += 0.5) {
    const double v = normalize_noisiness(std::pow(10.0, db / 10.0), stats);
    CHECK(v > prev);
    prev = v;
  }
}

// -------------------------------------------------------------------- PCA ----

TEST_CASE("PCA on a perfect line") {
  // points on y = x with variance 2 along the line
  std::vector<SpacePoint> pts;
  for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) pts.push_back({v, v});
  const PcaModel model = fit_pca(pts);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(model.components(0, 0) == doctest::Approx(s).epsilon(1e-9));
  CHECK(model.components(0, 1) == doctest::Approx(s).epsilon(1e-9));
  CHECK(model.variances[0] == doctest::Approx(5.0).epsilon(1e-9));  // var of {-2..2} is 2.5 * 2
  CHECK(model.variances[1] == approx(0.0, 1e-12));
  // sign convention: PC1 increases noisiness
  CHECK(model.components(0, 0) > 0.0);
}

TEST_CASE("isotropic cloud gives near-equal variances") {
  Rng rng(41);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 4000; ++i) pts.push_back({rng.gaussian(), rng.gaussian()});
  const PcaModel model = fit_pca(pts);
  CHECK(model.variances[0] / model.variances[1] < 1.1);
}

TEST_CASE("model reconstructs the sample covariance") {
  Rng rng(42);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 300; ++i) {
    const double a = rng.gaussian();
    const double b = rng.gaussian();
    pts.push_back({0.6 * a + 0.1 * b + 0.5, 0.3 * a - 0.2 * b + 0.2});
  }
  const PcaModel model = fit_pca(pts);

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p.vec();
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : pts) {
    Eigen::Vector2d d = p.vec() - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(pts.size() - 1);

  const Eigen::Matrix2d rebuilt =
      model.components.transpose() * model.variances.asDiagonal() * model.components;
  CHECK((rebuilt - cov).norm() < 1e-9);
  // orthonormal rows
  const Eigen::Matrix2d gram = model.components * model.components.transpose();
  CHECK((gram - Eigen::Matrix2d::Identity()).norm() < 1e-9);
  CHECK(model.variances[0] >= model.variances[1]);
}

TEST_CASE("degenerate clouds raise DegenerateCloud") {
  CHECK_THROWS_AS(fit_pca({{0.1, 0.2}, {0.1, 0.2}}), DegenerateCloud);
  CHECK_THROWS_AS(fit_pca({{0.1, 0.2}, {0.1, 0.2}, {0.1, 0.2}, {0.1, 0.2}}), DegenerateCloud);
}

// -------------------------------------------------------------- projection ----

TEST_CASE("projection basics") {
  Rng rng(43);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 100; ++i)
    pts.push_back({0.5 + 0.3 * rng.gaussian(), 0.5 + 0.1 * rng.gaussian()});
  const PcaModel model = fit_pca(pts);

  const SpacePoint at_mean{model.mean.x(), model.mean.y()};
  CHECK(project(at_mean, model).norm() < 1e-12);

  const SpacePoint off_pc1{model.mean.x() + model.components(0, 0),
                           model.mean.y() + model.components(0, 1)};
  const Eigen::Vector2d p = project(off_pc1, model);
  CHECK(p.x() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.y() == approx(0.0, 1e-9));
}

TEST_CASE("projected coordinates reproduce diag(variances)") {
  Rng rng(48);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 500; ++i) {
    const double a = rng.gaussian();
    const double b = rng.gaussian();
    pts.push_back({0.5 + 0.22 * a, 0.4 + 0.08 * a + 0.05 * b});
  }
  const PcaModel model = fit_pca(pts);
  double c11 = 0.0;
  double c22 = 0.0;
  double c12 = 0.0;
  for (const auto& p : pts) {
    const Eigen::Vector2d c = project(p, model);
    c11 += c.x() * c.x();
    c22 += c.y() * c.y();
    c12 += c.x() * c.y();
  }
  const double denom = static_cast<double>(pts.size() - 1);
  CHECK(c11 / denom == doctest::Approx(model.variances[0]).epsilon(1e-6));
  CHECK(c22 / denom == doctest::Approx(model.variances[1]).epsilon(1e-6));
  CHECK(std::abs(c12 / denom) < 1e-9);
}

TEST_CASE("projection is an isometry") {
  Rng rng(44);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(), rng.uniform()});
  const PcaModel model = fit_pca(pts);
  for (int i = 0; i < 20; ++i) {
    const SpacePoint a{rng.uniform(), rng.uniform()};
    const SpacePoint b{rng.uniform(), rng.uniform()};
    const double direct = (a.vec() - b.vec()).norm();
    const double projected = (project(a, model) - project(b, model)).norm();
    CHECK(projected == doctest::Approx(direct).epsilon(1e-9));
  }
}

// -------------------------------------------------------------- percentiles ----

TEST_CASE("percentile summary of four points on PC1") {
  // cloud along the noisiness axis projecting to {1, 2, 3, 4}
  std::vector<SpacePoint> pts = {{1.0, 0.001}, {2.0, -0.001}, {3.0, 0.0005}, {4.0, 0.0}};
  const PcaModel model = fit_pca(pts);
  const PercentileSummary s = percentile_summary(pts, model);
  // median of {1,2,3,4} projected: centered at mean 2.5 -> 0.0
  CHECK(s.pc1_p50 == approx(0.0, 1e-6));
  CHECK(s.pc1_p75 - s.pc1_p25 == approx(1.5, 1e-6));
}

TEST_CASE("percentiles are symmetric for symmetric clouds and permutation invariant") {
  Rng rng(45);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 101; ++i) {
    const double v = -1.0 + 2.0 * i / 100.0;
    pts.push_back({0.5 + 0.4 * v, 0.5 - 0.2 * v});
  }
  const PcaModel model = fit_pca(pts);
  const PercentileSummary s = percentile_summary(pts, model);
  CHECK(s.pc1_p75 - s.pc1_p50 == approx(s.pc1_p50 - s.pc1_p25, 1e-9));

  // shuffle
  std::vector<SpacePoint> shuffled = pts;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i)
    std::swap(shuffled[i], shuffled[static_cast<std::size_t>(rng.uniform() * (i + 1))]);
  const PercentileSummary s2 = percentile_summary(shuffled, model);
  CHECK(s2.pc1_p25 == doctest::Approx(s.pc1_p25).epsilon(1e-12));
  CHECK(s2.pc2_p75 == doctest::Approx(s.pc2_p75).epsilon(1e-12));
}

TEST_CASE("percentile summary wants four points") {
  std::vector<SpacePoint> pts = {{0.0, 0.0}, {0.5, 0.1}, {1.0, 0.2}};
  const PcaModel model = fit_pca(pts);
  CHECK_THROWS_AS(percentile_summary(pts, model), TooFewPoints);
}

// -------------------------------------------------------- median polynomial ----

TEST_CASE("polynomial fit: exact line through collinear points") {
  const std::vector<std::pair<double, double>> pts = {{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}};
  const Eigen::VectorXd c = fit_median_polynomial(pts, 1);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c[1] == doctest::Approx(2.0).epsilon(1e-9));
  // residual zero
  for (const auto& [x, y] : pts) CHECK(c[0] + c[1] * x == approx(y, 1e-9));
}

TEST_CASE("polynomial fit: exact parabola") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0, 3.0}) pts.push_back({x, x * x});
  const Eigen::VectorXd c = fit_median_polynomial(pts, 2);
  CHECK(c[0] == approx(0.0, 1e-9));
  CHECK(c[1] == approx(0.0, 1e-9));
  CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("underdetermined fits are rejected") {
  const std::vector<std::pair<double, double>> pts = {{0.0, 1.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(fit_median_polynomial(pts, 2), UnderDetermined);
  CHECK_THROWS_AS(fit_median_polynomial(pts, 3), UnderDetermined);
}

// ----------------------------------------------------------- serialization ----

// ---------------------------------------------------------------- isolines ----

TEST_CASE("half-height isoline of a Gaussian cloud rings the mean") {
  Rng rng(47);
  std::vector<SpacePoint> pts;
  const double cx = 0.5;
  const double cy = 0.45;
  const double sigma = 0.08;
  for (int i = 0; i < 2000; ++i)
    pts.push_back({cx + sigma * rng.gaussian(), cy + sigma * rng.gaussian()});
  const double bandwidth = 0.04;
  const auto segments = kde_half_height_isoline(pts, bandwidth, 96);
  REQUIRE(segments.size() > 20);
  // expected ring radius: half height of the h-smoothed density
  const double sigma_s = std::sqrt(sigma * sigma + bandwidth * bandwidth);
  const double expected = sigma_s * std::sqrt(2.0 * std::log(2.0));
  for (const auto& s : segments) {
    const double mx = 0.5 * (s[0] + s[2]);
    const double my = 0.5 * (s[1] + s[3]);
    const double r = std::hypot(mx - cx, my - cy);
    CHECK(r == approx(expected, 0.35 * expected));
  }
}

TEST_CASE("isoline input validation") {
  CHECK_THROWS_AS(kde_half_height_isoline({{0.5, 0.5}}), TooFewPoints);
}

TEST_CASE("model JSON round trip is exact") {
  Rng rng(46);
  std::vector<SpacePoint> pts;
  for (int i = 0; i < 64; ++i)
    pts.push_back({0.4 + 0.27 * rng.gaussian(), 0.6 + 0.13 * rng.gaussian()});
  const PcaModel model = fit_pca(pts);
  CorpusStats stats;
  stats.flatness_log_min = -27.123456789012;
  stats.flatness_log_max = -3.4567890123456;

  const std::string text = space_model_to_json(model, stats);
  PcaModel back;
  CorpusStats back_stats;
  space_model_from_json(text, back, back_stats);
  CHECK((back.mean - model.mean).norm() == 0.0);
  CHECK((back.components - model.components).norm() == 0.0);
  CHECK((back.variances - model.variances).norm() == 0.0);
  CHECK(back_stats.flatness_log_min == stats.flatness_log_min);
  CHECK(back_stats.flatness_log_max == stats.flatness_log_max);
  CHECK(back_stats.hr_exponent == stats.hr_exponent);
}
