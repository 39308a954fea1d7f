#include <pstk/beat_grid.hpp>

#include <pstk/errors.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace pstk {

namespace {

void validate(const BeatGrid& grid, double duration_s) {
  if (grid.beat_times_s.empty()) throw GridOutOfRange("beat grid is empty");
  double prev = -1.0;
  for (double t : grid.beat_times_s) {
    if (!(t >= 0.0)) throw GridOutOfRange("beat times must be >= 0");
    if (!(t > prev)) throw GridOutOfRange("beat times must be strictly increasing");
    if (t >= duration_s) throw GridOutOfRange("beat time beyond track end");
    prev = t;
  }
}

}  // namespace

BeatGrid beat_grid_fixed_bpm(double bpm, double offset_s, double duration_s) {
  if (!(bpm > 0.0)) throw InvalidArgument("bpm must be positive");
  if (!(offset_s >= 0.0)) throw InvalidArgument("offset must be >= 0");
  BeatGrid grid;
  grid.source = BeatGrid::Source::fixed_bpm;
  const double step = 60.0 / bpm;
  for (double t = offset_s; t < duration_s; t += step) grid.beat_times_s.push_back(t);
  if (grid.beat_times_s.empty()) throw GridOutOfRange("no beats inside track");
  return grid;
}

BeatGrid beat_grid_from_json_text(const std::string& text, double track_duration_s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile("bad beat grid JSON: " + std::string(e.what()));
  }
  if (j.contains("beats_s") && !j["beats_s"].empty()) {
    BeatGrid grid;
    grid.source = BeatGrid::Source::annotation_file;
    for (const auto& v : j["beats_s"]) grid.beat_times_s.push_back(v.get<double>());
    validate(grid, track_duration_s);
    return grid;
  }
  if (j.contains("bpm")) {
    const double offset = j.value("offset_s", 0.0);
    BeatGrid grid = beat_grid_fixed_bpm(j["bpm"].get<double>(), offset, track_duration_s);
    grid.source = BeatGrid::Source::annotation_file;
    return grid;
  }
  throw CorruptFile("beat grid needs beats_s or bpm");
}

BeatGrid load_beat_grid(const std::filesystem::path& path, double track_duration_s) {
  std::ifstream is(path);
  if (!is) throw IoFailure("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return beat_grid_from_json_text(text, track_duration_s);
}

std::vector<Eigen::Index> beat_boundaries(const AudioBuffer& buffer, const BeatGrid& grid) {
  validate(grid, buffer.duration_s());
  std::vector<Eigen::Index> bounds;
  bounds.push_back(0);
  for (double t : grid.beat_times_s) {
    const auto idx = static_cast<Eigen::Index>(std::llround(t * buffer.sample_rate_hz));
    if (idx > bounds.back()) bounds.push_back(std::min(idx, buffer.samples.size()));
  }
  bounds.push_back(buffer.samples.size());
  if (bounds[bounds.size() - 2] == buffer.samples.size()) bounds.pop_back();
  return bounds;
}

std::vector<AudioBuffer> segment_by_beats(const AudioBuffer& buffer, const BeatGrid& grid) {
  const std::vector<Eigen::Index> bounds = beat_boundaries(buffer, grid);
  std::vector<AudioBuffer> segments;
  segments.reserve(bounds.size() - 1);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    AudioBuffer seg;
    seg.sample_rate_hz = buffer.sample_rate_hz;
    seg.samples = buffer.samples.segment(bounds[i], bounds[i + 1] - bounds[i]);
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace pstk
