#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pstk/errors.hpp>
#include <pstk/pipeline.hpp>
#include <pstk/report_io.hpp>
#include <pstk/rng.hpp>
#include <pstk/synth.hpp>
#include <pstk/wav_io.hpp>

#include "test_helpers.hpp"

#include <filesystem>

using namespace pstk;
using namespace pstk::test;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

BeatGrid grid_of(std::vector<double> beats) {
  BeatGrid g;
  g.beat_times_s = std::move(beats);
  return g;
}

// tone beats alternating with noise beats, 0.5 s each
AudioBuffer alternating_track(int n_beats, int sr = 48000) {
  Rng rng(55);
  const auto beat_len = static_cast<Eigen::Index>(sr / 2);
  AudioBuffer out;
  out.sample_rate_hz = sr;
  out.samples.resize(beat_len * n_beats);
  const AudioBuffer tone = gen_mauch_tone({330.0, 0.8, 10, 0.5, sr});
  for (int b = 0; b < n_beats; ++b) {
    if (b % 2 == 0) {
      out.samples.segment(b * beat_len, beat_len) = tone.samples;
    } else {
      out.samples.segment(b * beat_len, beat_len) = 0.1 * rng.gaussian_vector(beat_len);
    }
  }
  return out;
}

// minimal model/stats for projection tests
void toy_space(PcaModel& model, CorpusStats& stats) {
  std::vector<SpacePoint> pts = {{0.1, 0.3}, {0.4, 0.5}, {0.9, 0.8}, {0.6, 0.4}, {0.2, 0.9}};
  model = fit_pca(pts);
  stats.flatness_log_min = -35.0;
  stats.flatness_log_max = -0.5;
}

}  // namespace

// ------------------------------------------------------------ segmentation ----

TEST_CASE("four beats on a two-second track give four half-second segments") {
  AudioBuffer buf;
  buf.sample_rate_hz = 48000;
  buf.samples = Eigen::ArrayXd::Zero(96000);
  const auto segs = segment_by_beats(buf, grid_of({0.0, 0.5, 1.0, 1.5}));
  REQUIRE(segs.size() == 4);
  for (const auto& s : segs) CHECK(s.samples.size() == 24000);
}

TEST_CASE("a single beat at zero spans the whole track") {
  AudioBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples = Eigen::ArrayXd::Zero(12345);
  const auto segs = segment_by_beats(buf, grid_of({0.0}));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].samples.size() == 12345);
}

TEST_CASE("segments always partition the track exactly") {
  Rng rng(56);
  AudioBuffer buf;
  buf.sample_rate_hz = 44100;
  buf.samples = rng.gaussian_vector(44100 * 2 + 7);
  SUBCASE("grid starting at zero") {
    const auto segs = segment_by_beats(buf, grid_of({0.0, 0.31, 0.62, 1.4}));
    Eigen::Index total = 0;
    for (const auto& s : segs) total += s.samples.size();
    CHECK(total == buf.samples.size());
  }
  SUBCASE("grid starting late grows a leading segment") {
    const auto segs = segment_by_beats(buf, grid_of({0.5, 1.0}));
    REQUIRE(segs.size() == 3);
    Eigen::Index total = 0;
    for (const auto& s : segs) total += s.samples.size();
    CHECK(total == buf.samples.size());
  }
}

TEST_CASE("grids outside the track are rejected") {
  AudioBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples = Eigen::ArrayXd::Zero(8000);
  CHECK_THROWS_AS(segment_by_beats(buf, grid_of({0.0, 2.0})), GridOutOfRange);
  CHECK_THROWS_AS(segment_by_beats(buf, grid_of({0.5, 0.5})), GridOutOfRange);
  CHECK_THROWS_AS(segment_by_beats(buf, grid_of({-0.1})), GridOutOfRange);
  CHECK_THROWS_AS(segment_by_beats(buf, grid_of({})), GridOutOfRange);
}

TEST_CASE("beat grid JSON: explicit beats win over bpm") {
  const std::string text = R"({"version":1,"bpm":120,"offset_s":0.25,"beats_s":[0.0,1.0]})";
  const BeatGrid g = beat_grid_from_json_text(text, 2.0);
  REQUIRE(g.beat_times_s.size() == 2);
  CHECK(g.beat_times_s[1] == 1.0);

  const BeatGrid fixed = beat_grid_from_json_text(R"({"version":1,"bpm":120})", 2.0);
  REQUIRE(fixed.beat_times_s.size() == 4);  // 0, 0.5, 1.0, 1.5
  CHECK(fixed.beat_times_s[3] == doctest::Approx(1.5));

  CHECK_THROWS_AS(beat_grid_from_json_text(R"({"version":1})", 2.0), CorruptFile);
  CHECK_THROWS_AS(beat_grid_from_json_text("not json", 2.0), CorruptFile);
}

// ------------------------------------------------------------ analyze_track ----

TEST_CASE("tone beats sit closer to the bottom-left than noise beats") {
  PcaModel model;
  CorpusStats stats;
  toy_space(model, stats);
  const AudioBuffer track = alternating_track(8);
  const TrackReport report = analyze_track(track, grid_of({0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}),
                                           model, stats, TrackParams{}, "alt");
  REQUIRE(report.beats.size() == 8);
  double tone_sum_max = -1e9;
  double noise_sum_min = 1e9;
  for (const auto& b : report.beats) {
    REQUIRE(!b.degenerate);
    const double s = b.features.noisiness_norm + b.features.inharmonicity_norm;
    if (b.beat_index % 2 == 0)
      tone_sum_max = std::max(tone_sum_max, s);
    else
      noise_sum_min = std::min(noise_sum_min, s);
  }
  CHECK(tone_sum_max < noise_sum_min);
}

TEST_CASE("a constant track clusters tightly in the space") {
  PcaModel model;
  CorpusStats stats;
  toy_space(model, stats);
  const AudioBuffer tone = gen_mauch_tone({220.0, 0.8, 10, 3.0, 48000});
  const TrackReport report =
      analyze_track(tone, grid_of({0.0, 0.5, 1.0, 1.5, 2.0, 2.5}), model, stats, TrackParams{},
                    "const");
  double nx = 0.0;
  double ny = 0.0;
  for (const auto& b : report.beats) {
    nx += b.features.noisiness_norm;
    ny += b.features.inharmonicity_norm;
  }
  nx /= static_cast<double>(report.beats.size());
  ny /= static_cast<double>(report.beats.size());
  for (const auto& b : report.beats) {
    const double dx = b.features.noisiness_norm - nx;
    const double dy = b.features.inharmonicity_norm - ny;
    CHECK(std::sqrt(dx * dx + dy * dy) <= 0.05);
  }
}

TEST_CASE("a silent track flags every beat degenerate") {
  PcaModel model;
  CorpusStats stats;
  toy_space(model, stats);
  AudioBuffer silence;
  silence.sample_rate_hz = 48000;
  silence.samples = Eigen::ArrayXd::Zero(96000);
  const TrackReport report =
      analyze_track(silence, grid_of({0.0, 0.5, 1.0, 1.5}), model, stats, TrackParams{}, "quiet");
  for (const auto& b : report.beats) CHECK(b.degenerate);
  CHECK(report.median.degenerate);
}

TEST_CASE("track medians are invariant to amplitude scaling") {
  PcaModel model;
  CorpusStats stats;
  toy_space(model, stats);
  const AudioBuffer track = alternating_track(4);
  AudioBuffer scaled;
  scaled.sample_rate_hz = track.sample_rate_hz;
  scaled.samples = track.samples * 0.125;
  const BeatGrid grid = grid_of({0.0, 0.5, 1.0, 1.5});
  const TrackReport a = analyze_track(track, grid, model, stats, TrackParams{}, "a");
  const TrackReport b = analyze_track(scaled, grid, model, stats, TrackParams{}, "b");
  CHECK(a.median.harmonic_ratio == approx(b.median.harmonic_ratio, 1e-9));
  CHECK(a.median.flatness == approx(b.median.flatness, 1e-9));
}

// ---------------------------------------------------------------- corpus ----

TEST_CASE("synthetic corpus is deterministic and feeds the space fit") {
  const auto dir_a = temp_dir("pstk_corpus_a");
  const auto dir_b = temp_dir("pstk_corpus_b");
  SyntheticCorpusSpec spec;
  spec.n_tracks = 12;
  spec.duration_s = 1.0;
  spec.seed = 3;

  const auto manifest_a = gen_synthetic_corpus(spec, dir_a);
  const auto manifest_b = gen_synthetic_corpus(spec, dir_b);
  REQUIRE(manifest_a.size() == 12);

  // byte-identical audio and manifest
  for (std::size_t i = 0; i < manifest_a.size(); ++i) {
    CHECK(manifest_a[i].filename == manifest_b[i].filename);
    CHECK(read_text_file(dir_a / manifest_a[i].filename) ==
          read_text_file(dir_b / manifest_b[i].filename));
  }
  CHECK(read_text_file(dir_a / "manifest.json") == read_text_file(dir_b / "manifest.json"));

  PcaModel model;
  CorpusStats stats;
  fit_space_over_corpus(dir_a, TrackParams{}, model, stats);
  CHECK(stats.flatness_log_min < stats.flatness_log_max);
  CHECK(model.variances[0] > 0.0);

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("corpus rejects too few tracks") {
  SyntheticCorpusSpec spec;
  spec.n_tracks = 5;
  CHECK_THROWS_AS(render_corpus_track(spec, 0), InvalidSpec);
}

TEST_CASE("corpus spans the normalized axes") {
  const auto dir = temp_dir("pstk_corpus_span");
  SyntheticCorpusSpec spec;
  spec.n_tracks = 30;
  spec.duration_s = 1.0;
  spec.seed = 9;
  gen_synthetic_corpus(spec, dir);
  CorpusStats stats;
  const auto points = corpus_space_points(dir, TrackParams{}, stats);
  REQUIRE(points.size() >= 25);
  double n_lo = 1.0, n_hi = 0.0, i_lo = 1.0, i_hi = 0.0;
  for (const auto& p : points) {
    n_lo = std::min(n_lo, p.noisiness_norm);
    n_hi = std::max(n_hi, p.noisiness_norm);
    i_lo = std::min(i_lo, p.inharmonicity_norm);
    i_hi = std::max(i_hi, p.inharmonicity_norm);
  }
  // noisiness: percentile normalization guarantees wide coverage.
  // inharmonicity: (1 - HR)^0.21 has a hard floor near 0.24 because frame HR
  // cannot exceed ~0.999, so 0.5 of the axis is the honest expectation.
  CHECK(n_hi - n_lo >= 0.8);
  CHECK(i_hi - i_lo >= 0.5);
  std::filesystem::remove_all(dir);
}

// ----------------------------------------------------------------- export ----

TEST_CASE("report CSV and JSON round trips are lossless") {
  PcaModel model;
  CorpusStats stats;
  toy_space(model, stats);
  const AudioBuffer track = alternating_track(4);
  const TrackReport report =
      analyze_track(track, grid_of({0.0, 0.5, 1.0, 1.5}), model, stats, TrackParams{}, "rt");

  const std::string csv = report_to_csv(report);
  CHECK(csv.substr(0, 8) == "track_id");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows

  // CSV -> JSON -> CSV is byte-identical
  const TrackReport from_csv = report_from_csv(csv);
  const std::string json = report_to_json(from_csv);
  const TrackReport from_json = report_from_json(json);
  CHECK(report_to_csv(from_json) == csv);
}

TEST_CASE("SVG scatter is well-formed and has one marker per beat") {
  PcaModel model;
  CorpusStats stats;
  toy_space(model, stats);
  const AudioBuffer track = alternating_track(4);
  const TrackReport report =
      analyze_track(track, grid_of({0.0, 0.5, 1.0, 1.5}), model, stats, TrackParams{}, "svg");
  const std::string svg = report_to_svg(report, &model);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("normalized noisiness") != std::string::npos);
  CHECK(svg.find("HR-inharmonicity") != std::string::npos);
  std::size_t markers = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1))
    ++markers;
  CHECK(markers == 4);
  // tags balance
  auto count = [&svg](const std::string& needle) {
    std::size_t c = 0;
    for (std::size_t pos = svg.find(needle); pos != std::string::npos;
         pos = svg.find(needle, pos + 1))
      ++c;
    return c;
  };
  CHECK(count("<text") == count("</text>"));
  CHECK(count("<line") == count("stroke-width"));
}

TEST_CASE("sweep at gain 0 reproduces the unprocessed medians") {
  const auto dir = temp_dir("pstk_sweep_zero");
  SyntheticCorpusSpec spec;
  spec.n_tracks = 12;
  spec.duration_s = 1.0;
  spec.seed = 31;
  gen_synthetic_corpus(spec, dir);

  PcaModel model;
  CorpusStats stats;
  fit_space_over_corpus(dir, TrackParams{}, model, stats);

  // unprocessed medians, straight from the corpus
  CorpusStats rescan = stats;
  const auto raw_points = corpus_space_points(dir, TrackParams{}, rescan);
  std::vector<double> n_axis;
  std::vector<double> i_axis;
  for (const auto& p : raw_points) {
    n_axis.push_back(p.noisiness_norm);
    i_axis.push_back(p.inharmonicity_norm);
  }
  std::sort(n_axis.begin(), n_axis.end());
  std::sort(i_axis.begin(), i_axis.end());

  const auto rows =
      run_eq_sweep_experiment(dir, {0.0}, model, stats, TrackParams{}, SalienceSettings{});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].median.noisiness_norm ==
        approx(0.5 * (n_axis[5] + n_axis[6]), 0.01));
  CHECK(rows[0].median.inharmonicity_norm ==
        approx(0.5 * (i_axis[5] + i_axis[6]), 0.01));
  std::filesystem::remove_all(dir);
}

// ------------------------------------------------------------- determinism ----

TEST_CASE("identical seeded runs produce byte-identical reports") {
  const auto dir = temp_dir("pstk_determinism");
  SyntheticCorpusSpec spec;
  spec.n_tracks = 10;
  spec.duration_s = 1.0;
  spec.seed = 21;
  gen_synthetic_corpus(spec, dir);

  auto run_once = [&]() {
    PcaModel model;
    CorpusStats stats;
    fit_space_over_corpus(dir, TrackParams{}, model, stats);
    const AudioBuffer track = load_audio(dir / "track_000.wav");
    const TrackReport report = analyze_track(
        track, beat_grid_fixed_bpm(120.0, 0.0, track.duration_s()), model, stats, TrackParams{},
        "det");
    return report_to_csv(report) + space_model_to_json(model, stats);
  };
  CHECK(run_once() == run_once());
  std::filesystem::remove_all(dir);
}
