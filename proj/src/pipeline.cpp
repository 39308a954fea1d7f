#include <pstk/pipeline.hpp>

#include <pstk/errors.hpp>
#include <pstk/fft_util.hpp>
#include <pstk/rng.hpp>
#include <pstk/synth.hpp>
#include <pstk/wav_io.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pstk {

namespace {

double median_of(std::vector<double> v, double fallback = 0.0) {
  if (v.empty()) return fallback;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

SpacePoint componentwise_percentile(const std::vector<SpacePoint>& pts, double p) {
  std::vector<double> a;
  std::vector<double> b;
  a.reserve(pts.size());
  b.reserve(pts.size());
  for (const SpacePoint& s : pts) {
    a.push_back(s.noisiness_norm);
    b.push_back(s.inharmonicity_norm);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto pick = [p](const std::vector<double>& v) {
    const double rank = p / 100.0 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    return v[lo] + (v[hi] - v[lo]) * (rank - static_cast<double>(lo));
  };
  return {pick(a), pick(b)};
}

// Median HR / flatness of one audio chunk; degenerate when no frame fits or
// every frame is silent.
FeatureVector chunk_features(const AudioBuffer& chunk, const TrackParams& params) {
  FeatureVector fv;
  fv.degenerate = true;
  fv.flatness = 1.0;
  const auto frame_len =
      static_cast<Eigen::Index>(std::lround(params.frame_s * chunk.sample_rate_hz));
  if (chunk.samples.size() < frame_len) return fv;

  std::vector<double> hr;
  std::vector<double> flat;
  for (const FeatureVector& f : track_features(chunk, params)) {
    if (f.degenerate) continue;
    hr.push_back(f.harmonic_ratio);
    flat.push_back(f.flatness);
  }
  if (hr.empty()) return fv;
  fv.degenerate = false;
  fv.harmonic_ratio = median_of(hr);
  fv.flatness = median_of(flat, 1.0);
  return fv;
}

void apply_space(FeatureVector& fv, const CorpusStats& stats) {
  fv.inharmonicity_norm = normalize_inharmonicity(fv.harmonic_ratio, stats.hr_exponent);
  fv.noisiness_norm = normalize_noisiness(std::max(fv.flatness, 1e-12), stats);
}

std::vector<std::filesystem::path> corpus_wavs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".wav") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoFailure("no .wav files in " + dir.string());
  return files;
}

FeatureVector track_median_features(const AudioBuffer& buffer, const TrackParams& params) {
  return chunk_features(buffer, params);
}

}  // namespace

TrackReport analyze_track(const AudioBuffer& buffer, const BeatGrid& grid,
                          const PcaModel& model, const CorpusStats& stats,
                          const TrackParams& params, const std::string& track_id) {
  const std::vector<Eigen::Index> bounds = beat_boundaries(buffer, grid);
  TrackReport report;
  report.track_id = track_id;

  std::vector<double> hrs;
  std::vector<double> flats;
  std::vector<double> pc1s;
  std::vector<double> pc2s;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    AudioBuffer seg;
    seg.sample_rate_hz = buffer.sample_rate_hz;
    seg.samples = buffer.samples.segment(bounds[i], bounds[i + 1] - bounds[i]);

    BeatRecord rec;
    rec.beat_index = static_cast<int>(i);
    rec.t_start_s = static_cast<double>(bounds[i]) / buffer.sample_rate_hz;
    rec.t_end_s = static_cast<double>(bounds[i + 1]) / buffer.sample_rate_hz;
    rec.features = chunk_features(seg, params);
    rec.degenerate = rec.features.degenerate;
    if (!rec.degenerate) {
      apply_space(rec.features, stats);
      const Eigen::Vector2d pc = project(
          {rec.features.noisiness_norm, rec.features.inharmonicity_norm}, model);
      rec.pc1 = pc.x();
      rec.pc2 = pc.y();
      hrs.push_back(rec.features.harmonic_ratio);
      flats.push_back(rec.features.flatness);
      pc1s.push_back(rec.pc1);
      pc2s.push_back(rec.pc2);
    }
    report.beats.push_back(rec);
  }

  report.median.degenerate = hrs.empty();
  if (!hrs.empty()) {
    report.median.harmonic_ratio = median_of(hrs);
    report.median.flatness = median_of(flats, 1.0);
    apply_space(report.median, stats);
    report.median_pc1 = median_of(pc1s);
    report.median_pc2 = median_of(pc2s);
  }
  return report;
}

AudioBuffer render_corpus_track(const SyntheticCorpusSpec& spec, int index, CorpusTrack* info) {
  if (spec.n_tracks < 10) throw InvalidSpec("corpus needs at least 10 tracks");
  if (index < 0 || index >= spec.n_tracks) throw InvalidSpec("track index out of range");
  if (spec.snr_db.empty()) throw InvalidSpec("empty SNR grid");
  const int sr = spec.sample_rate_hz;
  const auto n = static_cast<Eigen::Index>(std::lround(spec.duration_s * sr));

  // deterministic grid walk: family cycles fastest, then SNR, then f0
  const int family = index % 3;
  const auto snr_idx = static_cast<std::size_t>((index / 3) % spec.snr_db.size());
  const int f0_steps = std::max(1, spec.n_tracks / (3 * static_cast<int>(spec.snr_db.size())));
  const int f0_idx = (index / (3 * static_cast<int>(spec.snr_db.size()))) % f0_steps;
  const double f0 =
      spec.f0_min_hz * std::pow(spec.f0_max_hz / spec.f0_min_hz,
                                f0_steps > 1 ? static_cast<double>(f0_idx) / (f0_steps - 1) : 0.5);
  const double snr_db = spec.snr_db[snr_idx];

  const std::uint64_t track_seed = spec.seed * 1000003ULL + static_cast<std::uint64_t>(index);
  Rng rng(track_seed);

  Eigen::ArrayXd tonal;
  std::string family_name;
  switch (family) {
    case 0: {
      family_name = "mauch";
      const int max_harm = std::min(10, static_cast<int>((sr / 2.0 - 1.0) / f0));
      MauchToneSpec tone{f0, 0.8, std::max(1, max_harm), spec.duration_s, sr};
      tonal = gen_mauch_tone(tone).samples;
      break;
    }
    case 1: {
      family_name = "irn";
      IrnSpec irn{1.0 / f0, 1.0, 2 + 2 * (index % 4), spec.duration_s, sr, track_seed};
      tonal = gen_irn(irn).samples;
      break;
    }
    default: {
      family_name = "noise";
      // alternate low-pass / band-pass / high-pass filtered noise
      const int kind = (index / 3) % 3;
      ReferenceSoundSpec shaped;
      shaped.sound_id = kind == 0 ? 8 : kind == 1 ? 7 : 11;
      shaped.center_freq_hz = 500.0;
      shaped.duration_s = spec.duration_s;
      shaped.sample_rate_hz = sr;
      shaped.seed = track_seed;
      tonal = gen_reference_sound(shaped).samples;
      break;
    }
  }

  // mix with white noise at the grid SNR
  Eigen::ArrayXd noise = rng.gaussian_vector(n);
  noise = rms_normalized(noise);
  Eigen::ArrayXd sig = rms_normalized(tonal.head(n));
  const double noise_gain = std::pow(10.0, -snr_db / 20.0);
  Eigen::ArrayXd mix = sig + noise_gain * noise;

  // formant-scale resonance so the corpus carries envelope structure the
  // salience EQ can act on; center walks a log grid across tracks
  const double formant_hz =
      500.0 * std::pow(3500.0 / 500.0, ((index * 7) % spec.n_tracks) /
                                           std::max(1.0, spec.n_tracks - 1.0));
  {
    const Eigen::Index even_n = n + (n & 1);
    Eigen::ArrayXd padded = Eigen::ArrayXd::Zero(even_n);
    padded.head(n) = mix;
    Eigen::ArrayXcd spec_c = rfft(padded);
    const double bin_hz = static_cast<double>(sr) / even_n;
    for (Eigen::Index k = 0; k < spec_c.size(); ++k) {
      const double d = (static_cast<double>(k) * bin_hz - formant_hz) / 300.0;
      spec_c[k] *= std::pow(10.0, 9.0 * std::exp(-0.5 * d * d) / 20.0);
    }
    mix = irfft(spec_c, even_n).head(n);
  }
  mix = rms_normalized(mix);

  if (info) {
    char name[64];
    std::snprintf(name, sizeof(name), "track_%03d.wav", index);
    info->filename = name;
    info->family = family_name;
    info->f0_hz = f0;
    info->snr_db = snr_db;
  }
  return {std::move(mix), sr};
}

std::vector<CorpusTrack> gen_synthetic_corpus(const SyntheticCorpusSpec& spec,
                                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<CorpusTrack> manifest;
  manifest.reserve(static_cast<std::size_t>(spec.n_tracks));
  for (int i = 0; i < spec.n_tracks; ++i) {
    CorpusTrack info;
    const AudioBuffer buf = render_corpus_track(spec, i, &info);
    save_audio(buf, dir / info.filename, WavDepth::float32);
    manifest.push_back(info);
  }

  nlohmann::json j;
  j["version"] = 1;
  j["seed"] = spec.seed;
  j["n_tracks"] = spec.n_tracks;
  j["sample_rate_hz"] = spec.sample_rate_hz;
  j["duration_s"] = spec.duration_s;
  j["snr_db"] = spec.snr_db;
  j["f0_min_hz"] = spec.f0_min_hz;
  j["f0_max_hz"] = spec.f0_max_hz;
  j["tracks"] = nlohmann::json::array();
  for (const CorpusTrack& t : manifest) {
    j["tracks"].push_back({{"filename", t.filename},
                           {"family", t.family},
                           {"f0_hz", t.f0_hz},
                           {"snr_db", t.snr_db}});
  }
  std::ofstream os(dir / "manifest.json", std::ios::trunc);
  if (!os) throw IoFailure("cannot write manifest");
  os << j.dump(2) << "\n";
  return manifest;
}

std::vector<SpacePoint> corpus_space_points(const std::filesystem::path& dir,
                                            const TrackParams& params, CorpusStats& stats_out) {
  const auto files = corpus_wavs(dir);

  std::vector<FeatureVector> medians;
  std::vector<double> all_flat_db;
  for (const auto& f : files) {
    const AudioBuffer buf = load_audio(f);
    for (const FeatureVector& fv : track_features(buf, params))
      if (!fv.degenerate && fv.flatness > 0.0)
        all_flat_db.push_back(10.0 * std::log10(fv.flatness));
    medians.push_back(track_median_features(buf, params));
  }
  if (all_flat_db.size() < 2) throw DegenerateCloud("corpus produced no usable frames");

  // 1st/99th percentile bounds keep outliers from pinning the affine map
  std::sort(all_flat_db.begin(), all_flat_db.end());
  auto pct = [&](double p) {
    const double rank = p / 100.0 * static_cast<double>(all_flat_db.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    return all_flat_db[lo] + (all_flat_db[hi] - all_flat_db[lo]) * (rank - std::floor(rank));
  };
  stats_out.flatness_log_min = pct(1.0);
  stats_out.flatness_log_max = pct(99.0);
  if (stats_out.flatness_log_max - stats_out.flatness_log_min < 1e-6)
    stats_out.flatness_log_max = stats_out.flatness_log_min + 1e-6;

  std::vector<SpacePoint> points;
  for (FeatureVector fv : medians) {
    if (fv.degenerate) continue;
    apply_space(fv, stats_out);
    points.push_back({fv.noisiness_norm, fv.inharmonicity_norm});
  }
  return points;
}

void fit_space_over_corpus(const std::filesystem::path& dir, const TrackParams& params,
                           PcaModel& model_out, CorpusStats& stats_out) {
  const std::vector<SpacePoint> points = corpus_space_points(dir, params, stats_out);
  model_out = fit_pca(points);
}

std::vector<SweepRow> run_eq_sweep_experiment(const std::filesystem::path& corpus_dir,
                                              const std::vector<double>& gains,
                                              const PcaModel& model, const CorpusStats& stats,
                                              const TrackParams& params,
                                              const SalienceSettings& eq_settings) {
  (void)model;  // positions are reported on the normalized axes
  const auto files = corpus_wavs(corpus_dir);
  std::vector<AudioBuffer> tracks;
  tracks.reserve(files.size());
  for (const auto& f : files) tracks.push_back(load_audio(f));

  std::vector<SweepRow> rows;
  for (double gain : gains) {
    SalienceSettings s = eq_settings;
    s.gain = gain;
    std::vector<SpacePoint> pts;
    for (const AudioBuffer& t : tracks) {
      const AudioBuffer processed = apply_salience_gain(t, s);
      FeatureVector fv = track_median_features(processed, params);
      if (fv.degenerate) continue;
      apply_space(fv, stats);
      pts.push_back({fv.noisiness_norm, fv.inharmonicity_norm});
    }
    if (pts.empty()) throw NumericalFailure("sweep produced no points");
    SweepRow row;
    row.gain = gain;
    row.median = componentwise_percentile(pts, 50.0);
    row.p25 = componentwise_percentile(pts, 25.0);
    row.p75 = componentwise_percentile(pts, 75.0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pstk
