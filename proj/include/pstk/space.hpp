#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace pstk {

// One observation in the noisiness-inharmonicity plane. Both coordinates live
// in [0, 1]; the bottom-left corner is the high-pitch-strength region.
struct SpacePoint {
  double noisiness_norm = 0.0;
  double inharmonicity_norm = 0.0;

  Eigen::Vector2d vec() const { return {noisiness_norm, inharmonicity_norm}; }
};

// 2-D principal axes of a point cloud. Rows of `components` are PC1, PC2;
// rows are orthonormal, variances descending. PC1 is oriented so that
// increasing PC1 increases noisiness_norm; PC2 completes a right-handed pair.
struct PcaModel {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d components = Eigen::Matrix2d::Identity();
  Eigen::Vector2d variances = Eigen::Vector2d::Zero();
};

// Normalization constants estimated from a corpus: the affine log-flatness
// range (dB) and the inharmonicity exponent.
struct CorpusStats {
  double flatness_log_min = -30.0;
  double flatness_log_max = 0.0;
  double hr_exponent = 0.21;
};

// (1 - hr)^0.21; strictly decreasing in hr. Throws OutOfRange.
double normalize_inharmonicity(double hr, double exponent = 0.21);

// Affine map of 10*log10(flatness) from [flatness_log_min, flatness_log_max]
// to [0, 1], clamped. Throws NonpositiveFlatness.
double normalize_noisiness(double flatness, const CorpusStats& stats);

// Eigendecomposition of the 2x2 sample covariance (n-1 denominator).
// Throws DegenerateCloud for fewer than 3 points or an all-identical cloud.
PcaModel fit_pca(const std::vector<SpacePoint>& points);

// components * (point - mean).
Eigen::Vector2d project(const SpacePoint& point, const PcaModel& model);

struct PercentileSummary {
  // percentiles of the projected coordinates along PC1 / PC2
  double pc1_p25 = 0, pc1_p50 = 0, pc1_p75 = 0;
  double pc2_p25 = 0, pc2_p50 = 0, pc2_p75 = 0;
};

// Linear-interpolated order statistics. Throws TooFewPoints for n < 4.
PercentileSummary percentile_summary(const std::vector<SpacePoint>& points,
                                     const PcaModel& directions);

// Least-squares fit of y on x, coefficients low order first (size degree+1).
// Throws UnderDetermined when points < degree + 1.
Eigen::VectorXd fit_median_polynomial(const std::vector<std::pair<double, double>>& points,
                                      int degree);

// Versioned JSON round-trip of a model plus its normalization constants.
std::string space_model_to_json(const PcaModel& model, const CorpusStats& stats);
void space_model_from_json(const std::string& text, PcaModel& model, CorpusStats& stats);
void save_space_model(const PcaModel&, const CorpusStats&, const std::filesystem::path&);
void load_space_model(const std::filesystem::path&, PcaModel&, CorpusStats&);

// Plotting utility: half-height contour of a Gaussian kernel density estimate
// over the unit square, as marching-squares line segments (x1, y1, x2, y2).
// bandwidth <= 0 picks Scott's rule.
std::vector<Eigen::Vector4d> kde_half_height_isoline(const std::vector<SpacePoint>& points,
                                                     double bandwidth = 0.0,
                                                     int grid_size = 128);

}  // namespace pstk
