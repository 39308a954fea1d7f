#pragma once

#include <pstk/audio_buffer.hpp>
#include <pstk/beat_grid.hpp>
#include <pstk/features.hpp>
#include <pstk/salience_eq.hpp>
#include <pstk/space.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pstk {

struct BeatRecord {
  int beat_index = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  FeatureVector features;
  double pc1 = 0.0;
  double pc2 = 0.0;
  bool degenerate = false;
};

struct TrackReport {
  std::string track_id;
  std::vector<BeatRecord> beats;
  FeatureVector median;  // per-track medians of the per-beat values
  double median_pc1 = 0.0;
  double median_pc2 = 0.0;
};

// Per beat: median-over-frames HR and flatness, normalized through the
// corpus stats and projected onto the space axes. Beats too short for a
// single analysis frame are flagged degenerate, not fatal.
TrackReport analyze_track(const AudioBuffer& buffer, const BeatGrid& grid,
                          const PcaModel& model, const CorpusStats& stats,
                          const TrackParams& params, const std::string& track_id);

// Stand-in corpus: mixtures of harmonic tones, rippled noise and filtered
// noise spanning an SNR x f0 grid, written as WAV files plus a manifest.
struct SyntheticCorpusSpec {
  int n_tracks = 54;
  std::uint64_t seed = 1;
  std::vector<double> snr_db = {-20.0, -10.0, 0.0, 10.0, 20.0, 40.0};
  double f0_min_hz = 110.0;
  double f0_max_hz = 880.0;
  double duration_s = 1.5;
  int sample_rate_hz = 32000;
};

struct CorpusTrack {
  std::string filename;
  std::string family;  // mauch | irn | noise
  double f0_hz = 0.0;
  double snr_db = 0.0;
};

// Returns the manifest entries; writes <dir>/<filename> and <dir>/manifest.json.
std::vector<CorpusTrack> gen_synthetic_corpus(const SyntheticCorpusSpec& spec,
                                              const std::filesystem::path& dir);

// Deterministic in-memory synthesis of one corpus track.
AudioBuffer render_corpus_track(const SyntheticCorpusSpec& spec, int index,
                                CorpusTrack* info = nullptr);

// Per-track median feature points for a directory of WAV files
// (sorted by filename, so results are reproducible).
std::vector<SpacePoint> corpus_space_points(const std::filesystem::path& dir,
                                            const TrackParams& params, CorpusStats& stats_out);

// Fits normalization stats + PCA over a corpus directory and returns both.
void fit_space_over_corpus(const std::filesystem::path& dir, const TrackParams& params,
                           PcaModel& model_out, CorpusStats& stats_out);

struct SweepRow {
  double gain = 0.0;
  SpacePoint median;
  SpacePoint p25;
  SpacePoint p75;
};

// For each gain: process every track with the salience EQ, re-extract
// features, and report the median / quartile space positions.
std::vector<SweepRow> run_eq_sweep_experiment(const std::filesystem::path& corpus_dir,
                                              const std::vector<double>& gains,
                                              const PcaModel& model, const CorpusStats& stats,
                                              const TrackParams& params,
                                              const SalienceSettings& eq_settings);

}  // namespace pstk
