#include <pstk/space.hpp>

#include <pstk/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pstk {

namespace {

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double rank = p / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

}  // namespace

double normalize_inharmonicity(double hr, double exponent) {
  if (!(hr >= 0.0 && hr <= 1.0)) throw OutOfRange("HarmonicRatio must be in [0, 1]");
  return std::pow(1.0 - hr, exponent);
}

double normalize_noisiness(double flatness, const CorpusStats& stats) {
  if (!(flatness > 0.0)) throw NonpositiveFlatness("flatness must be positive");
  if (!(stats.flatness_log_min < stats.flatness_log_max))
    throw InvalidArgument("flatness_log_min must be below flatness_log_max");
  const double db = 10.0 * std::log10(flatness);
  const double t = (db - stats.flatness_log_min) / (stats.flatness_log_max - stats.flatness_log_min);
  return std::clamp(t, 0.0, 1.0);
}

PcaModel fit_pca(const std::vector<SpacePoint>& points) {
  if (points.size() < 3) throw DegenerateCloud("need at least 3 points");

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const SpacePoint& p : points) mean += p.vec();
  mean /= static_cast<double>(points.size());

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const SpacePoint& p : points) {
    const Eigen::Vector2d d = p.vec() - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size() - 1);

  if (cov.trace() <= 1e-15) throw DegenerateCloud("all points coincide");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");

  PcaModel model;
  model.mean = mean;
  // Eigen sorts eigenvalues ascending; flip to descending
  model.variances = solver.eigenvalues().reverse().cwiseMax(0.0);
  model.components.row(0) = solver.eigenvectors().col(1).transpose();
  model.components.row(1) = solver.eigenvectors().col(0).transpose();

  // orientation: PC1 increases noisiness (fall back to inharmonicity when the
  // noisiness loading vanishes); PC2 completes a right-handed frame
  Eigen::RowVector2d pc1 = model.components.row(0);
  const double lead = std::abs(pc1.x()) > 1e-12 ? pc1.x() : pc1.y();
  if (lead < 0.0) pc1 = -pc1;
  model.components.row(0) = pc1;
  model.components.row(1) = Eigen::RowVector2d(-pc1.y(), pc1.x());
  return model;
}

Eigen::Vector2d project(const SpacePoint& point, const PcaModel& model) {
  return model.components * (point.vec() - model.mean);
}

PercentileSummary percentile_summary(const std::vector<SpacePoint>& points,
                                     const PcaModel& directions) {
  if (points.size() < 4) throw TooFewPoints("need at least 4 points");
  std::vector<double> pc1;
  std::vector<double> pc2;
  pc1.reserve(points.size());
  pc2.reserve(points.size());
  for (const SpacePoint& p : points) {
    const Eigen::Vector2d c = project(p, directions);
    pc1.push_back(c.x());
    pc2.push_back(c.y());
  }
  PercentileSummary s;
  s.pc1_p25 = percentile(pc1, 25.0);
  s.pc1_p50 = percentile(pc1, 50.0);
  s.pc1_p75 = percentile(pc1, 75.0);
  s.pc2_p25 = percentile(pc2, 25.0);
  s.pc2_p50 = percentile(pc2, 50.0);
  s.pc2_p75 = percentile(pc2, 75.0);
  return s;
}

Eigen::VectorXd fit_median_polynomial(const std::vector<std::pair<double, double>>& points,
                                      int degree) {
  if (degree < 0) throw InvalidArgument("degree must be non-negative");
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < degree + 1) throw UnderDetermined("need at least degree+1 points");

  Eigen::MatrixXd v(n, degree + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double xp = 1.0;
    for (int d = 0; d <= degree; ++d, xp *= points[static_cast<std::size_t>(i)].first)
      v(i, d) = xp;
    y[i] = points[static_cast<std::size_t>(i)].second;
  }
  return v.colPivHouseholderQr().solve(y);
}

namespace {
constexpr int kModelVersion = 1;
}

std::string space_model_to_json(const PcaModel& model, const CorpusStats& stats) {
  nlohmann::json j;
  j["version"] = kModelVersion;
  j["mean"] = {model.mean.x(), model.mean.y()};
  j["components"] = {{model.components(0, 0), model.components(0, 1)},
                     {model.components(1, 0), model.components(1, 1)}};
  j["variances"] = {model.variances.x(), model.variances.y()};
  j["flatness_log_min"] = stats.flatness_log_min;
  j["flatness_log_max"] = stats.flatness_log_max;
  j["hr_exponent"] = stats.hr_exponent;
  return j.dump(2) + "\n";
}

void space_model_from_json(const std::string& text, PcaModel& model, CorpusStats& stats) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("version") || j["version"].get<int>() != kModelVersion)
    throw CorruptFile("unknown space model version");
  const auto mean = j.at("mean");
  const auto comp = j.at("components");
  const auto var = j.at("variances");
  model.mean = {mean.at(0).get<double>(), mean.at(1).get<double>()};
  model.components << comp.at(0).at(0).get<double>(), comp.at(0).at(1).get<double>(),
      comp.at(1).at(0).get<double>(), comp.at(1).at(1).get<double>();
  model.variances = {var.at(0).get<double>(), var.at(1).get<double>()};
  stats.flatness_log_min = j.at("flatness_log_min").get<double>();
  stats.flatness_log_max = j.at("flatness_log_max").get<double>();
  stats.hr_exponent = j.at("hr_exponent").get<double>();
}

void save_space_model(const PcaModel& model, const CorpusStats& stats,
                      const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoFailure("cannot write " + path.string());
  os << space_model_to_json(model, stats);
  if (!os) throw IoFailure("write failed: " + path.string());
}

void load_space_model(const std::filesystem::path& path, PcaModel& model, CorpusStats& stats) {
  std::ifstream is(path);
  if (!is) throw IoFailure("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    space_model_from_json(text, model, stats);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile("bad space model JSON: " + std::string(e.what()));
  }
}

std::vector<Eigen::Vector4d> kde_half_height_isoline(const std::vector<SpacePoint>& points,
                                                     double bandwidth, int grid_size) {
  if (points.size() < 2) throw TooFewPoints("need at least 2 points for a density estimate");
  if (grid_size < 8) throw InvalidArgument("grid too coarse");

  double h = bandwidth;
  if (h <= 0.0) {
    // Scott's rule on the pooled per-axis deviations
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : points) mean += p.vec();
    mean /= static_cast<double>(points.size());
    double var = 0.0;
    for (const auto& p : points) var += (p.vec() - mean).squaredNorm();
    var /= 2.0 * static_cast<double>(points.size());
    h = std::sqrt(var) * std::pow(static_cast<double>(points.size()), -1.0 / 6.0);
    h = std::max(h, 1e-3);
  }

  const int n = grid_size;
  Eigen::MatrixXd density = Eigen::MatrixXd::Zero(n, n);
  const double inv2h2 = 1.0 / (2.0 * h * h);
  for (int ix = 0; ix < n; ++ix) {
    const double x = static_cast<double>(ix) / (n - 1);
    for (int iy = 0; iy < n; ++iy) {
      const double y = static_cast<double>(iy) / (n - 1);
      double d = 0.0;
      for (const auto& p : points) {
        const double dx = x - p.noisiness_norm;
        const double dy = y - p.inharmonicity_norm;
        d += std::exp(-(dx * dx + dy * dy) * inv2h2);
      }
      density(ix, iy) = d;
    }
  }

  const double level = density.maxCoeff() / 2.0;
  const double step = 1.0 / (n - 1);
  auto cross = [level](double a, double b) { return (a - level) * (b - level) < 0.0; };
  auto lerp = [level](double a, double b) { return (level - a) / (b - a); };

  // marching squares, one or two segments per cell
  std::vector<Eigen::Vector4d> segments;
  for (int ix = 0; ix + 1 < n; ++ix) {
    for (int iy = 0; iy + 1 < n; ++iy) {
      const double x0 = ix * step;
      const double y0 = iy * step;
      const double v00 = density(ix, iy);
      const double v10 = density(ix + 1, iy);
      const double v01 = density(ix, iy + 1);
      const double v11 = density(ix + 1, iy + 1);
      std::vector<Eigen::Vector2d> hits;
      if (cross(v00, v10)) hits.emplace_back(x0 + step * lerp(v00, v10), y0);
      if (cross(v10, v11)) hits.emplace_back(x0 + step, y0 + step * lerp(v10, v11));
      if (cross(v01, v11)) hits.emplace_back(x0 + step * lerp(v01, v11), y0 + step);
      if (cross(v00, v01)) hits.emplace_back(x0, y0 + step * lerp(v00, v01));
      if (hits.size() >= 2)
        segments.emplace_back(hits[0].x(), hits[0].y(), hits[1].x(), hits[1].y());
      if (hits.size() == 4)
        segments.emplace_back(hits[2].x(), hits[2].y(), hits[3].x(), hits[3].y());
    }
  }
  return segments;
}

}  // namespace pstk
