#pragma once

#include <pstk/audio_buffer.hpp>

#include <filesystem>
#include <vector>

namespace pstk {

// Strictly increasing beat times segmenting a track. Grids come either from
// an annotation file or from a fixed bpm + offset.
struct BeatGrid {
  enum class Source { annotation_file, fixed_bpm };
  std::vector<double> beat_times_s;
  Source source = Source::annotation_file;
};

BeatGrid beat_grid_fixed_bpm(double bpm, double offset_s, double duration_s);

// JSON document {version, bpm?, offset_s?, beats_s?}; explicit beats_s wins
// over bpm + offset when both are present.
BeatGrid load_beat_grid(const std::filesystem::path& path, double track_duration_s);
BeatGrid beat_grid_from_json_text(const std::string& text, double track_duration_s);

// One sub-buffer per interval [t_i, t_{i+1}); the last interval runs to the
// end of the track and a leading [0, t_0) segment is emitted when the first
// beat falls after zero, so the segments always partition the track exactly.
std::vector<AudioBuffer> segment_by_beats(const AudioBuffer& buffer, const BeatGrid& grid);

// Sample index boundaries of the same partition: size = n_segments + 1,
// first 0, last buffer.size().
std::vector<Eigen::Index> beat_boundaries(const AudioBuffer& buffer, const BeatGrid& grid);

}  // namespace pstk
