#pragma once

#include <pstk/pipeline.hpp>
#include <pstk/space.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace pstk {

// Per-beat report serialization. CSV columns:
//   track_id, beat_index, t_start_s, t_end_s, harmonic_ratio, flatness,
//   inharmonicity_norm, noisiness_norm, pc1, pc2, degenerate
// JSON mirrors the CSV; the SVG is a self-contained scatter of the beats in
// the normalized plane with optional principal-axis arrows.
std::string report_to_csv(const TrackReport& report);
std::string report_to_json(const TrackReport& report);
TrackReport report_from_csv(const std::string& text);
TrackReport report_from_json(const std::string& text);

std::string report_to_svg(const TrackReport& report, const PcaModel* arrows = nullptr);

// Corpus-level scatter with optional density isoline segments and PC arrows.
std::string corpus_svg(const std::vector<SpacePoint>& points,
                       const std::vector<Eigen::Vector4d>& isoline_segments,
                       const PcaModel* arrows = nullptr);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace pstk
