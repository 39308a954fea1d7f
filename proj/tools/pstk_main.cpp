// pstk: synthesis, salience EQ and noisiness-inharmonicity analysis toolkit.

#include <pstk/beat_grid.hpp>
#include <pstk/errors.hpp>
#include <pstk/features.hpp>
#include <pstk/iso226.hpp>
#include <pstk/peaks.hpp>
#include <pstk/pipeline.hpp>
#include <pstk/report_io.hpp>
#include <pstk/salience_eq.hpp>
#include <pstk/space.hpp>
#include <pstk/synth.hpp>
#include <pstk/wav_io.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitNumerical = 4;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw pstk::InvalidArgument("bad number in list: " + item);
    }
  }
  if (out.empty()) throw pstk::InvalidArgument("expected a comma-separated list of numbers");
  return out;
}

struct GlobalOpts {
  double phon = 60.0;
  int frame = 4096;
  int hop = 1024;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pitch-strength analysis toolkit"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--phon", global.phon, "loudness level for ISO 226 weighting")
      ->capture_default_str();
  app.add_option("--frame", global.frame, "STFT frame length")->capture_default_str();
  app.add_option("--hop", global.hop, "STFT hop")->capture_default_str();

  // ---- synth ----------------------------------------------------------
  CLI::App* synth = app.add_subcommand("synth", "generate test signals");
  synth->require_subcommand(1);

  struct {
    int id = 1;
    double freq = 500.0;
    double dur = 1.0;
    int sr = 48000;
    std::uint64_t seed = 0;
    std::string out;
  } ref;
  CLI::App* synth_ref = synth->add_subcommand("reference", "psychoacoustic reference sound");
  synth_ref->add_option("--id", ref.id, "sound number 1..11")->required();
  synth_ref->add_option("--freq", ref.freq, "center frequency (125, 250 or 500)")
      ->capture_default_str();
  synth_ref->add_option("--dur", ref.dur, "duration in seconds")->capture_default_str();
  synth_ref->add_option("--sr", ref.sr, "sample rate")->capture_default_str();
  synth_ref->add_option("--seed", ref.seed, "seed for stochastic sounds")->capture_default_str();
  synth_ref->add_option("-o,--out", ref.out, "output WAV path")->required();

  struct {
    double delay_ms = 4.0;
    double gain = 1.0;
    int iterations = 8;
    double dur = 1.0;
    int sr = 48000;
    std::uint64_t seed = 0;
    std::string out;
  } irn;
  CLI::App* synth_irn = synth->add_subcommand("irn", "iterated rippled noise");
  synth_irn->add_option("--delay-ms", irn.delay_ms, "delay in milliseconds")
      ->capture_default_str();
  synth_irn->add_option("--gain", irn.gain, "network gain in [-1, 1]")->capture_default_str();
  synth_irn->add_option("--iterations", irn.iterations, "number of delay-add passes")
      ->capture_default_str();
  synth_irn->add_option("--dur", irn.dur, "duration in seconds")->capture_default_str();
  synth_irn->add_option("--sr", irn.sr, "sample rate")->capture_default_str();
  synth_irn->add_option("--seed", irn.seed, "noise seed")->capture_default_str();
  synth_irn->add_option("-o,--out", irn.out, "output WAV path")->required();

  struct {
    double f0 = 440.0;
    double s = 0.8;
    int n = 10;
    double dur = 1.0;
    int sr = 48000;
    std::string out;
  } mauch;
  CLI::App* synth_mauch = synth->add_subcommand("mauch", "harmonic tone, partial k at s^(k-1)");
  synth_mauch->add_option("--f0", mauch.f0, "fundamental (Hz)")->capture_default_str();
  synth_mauch->add_option("--s", mauch.s, "partial decay in (0, 1)")->capture_default_str();
  synth_mauch->add_option("--n", mauch.n, "number of harmonics")->capture_default_str();
  synth_mauch->add_option("--dur", mauch.dur, "duration in seconds")->capture_default_str();
  synth_mauch->add_option("--sr", mauch.sr, "sample rate")->capture_default_str();
  synth_mauch->add_option("-o,--out", mauch.out, "output WAV path")->required();

  // ---- distort --------------------------------------------------------
  struct {
    std::string in;
    std::string poly;
    std::string normalize = "none";
    std::string out;
  } distort;
  CLI::App* distort_cmd = app.add_subcommand("distort", "memoryless waveshaper");
  distort_cmd->add_option("-i,--in", distort.in, "input WAV")->required();
  distort_cmd->add_option("--poly", distort.poly, "polynomial coefficients c0,c1,...")
      ->required();
  distort_cmd->add_option("--normalize", distort.normalize, "none | peak")
      ->capture_default_str();
  distort_cmd->add_option("-o,--out", distort.out, "output WAV path")->required();

  // ---- eq -------------------------------------------------------------
  struct {
    std::string in;
    double gain = 0.0;
    double cutoff_quefrency = 1.0 / 700.0;
    std::string out;
  } eq;
  CLI::App* eq_cmd = app.add_subcommand("eq", "spectral-peak salience equalizer");
  eq_cmd->add_option("-i,--in", eq.in, "input WAV")->required();
  eq_cmd->add_option("--gain", eq.gain, "salience gain in [-1, 1]")->required();
  eq_cmd->add_option("--cutoff-quefrency", eq.cutoff_quefrency, "envelope cutoff (s)")
      ->capture_default_str();
  eq_cmd->add_option("-o,--out", eq.out, "output WAV path")->required();

  // ---- peaks ----------------------------------------------------------
  struct {
    std::string in;
    double min_prominence_db = 15.0;
    double min_separation_hz = 30.0;
    std::string out;
  } peaks_opts;
  CLI::App* peaks_cmd =
      app.add_subcommand("peaks", "weighted-spectrum peaks, overtone deltas, MIDI notes");
  peaks_cmd->add_option("-i,--in", peaks_opts.in, "input WAV")->required();
  peaks_cmd->add_option("--min-prominence-db", peaks_opts.min_prominence_db,
                        "peak prominence threshold")
      ->capture_default_str();
  peaks_cmd->add_option("--min-separation-hz", peaks_opts.min_separation_hz,
                        "minimum peak spacing")
      ->capture_default_str();
  peaks_cmd->add_option("-o,--out", peaks_opts.out, "CSV output (stdout when omitted)");

  // ---- analyze --------------------------------------------------------
  struct {
    std::string in;
    std::string beats;
    double bpm = 0.0;
    double offset = 0.0;
    std::string model;
    std::string out;
    std::string svg;
    std::string json;
  } analyze_opts;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "per-beat space positions of a track");
  analyze_cmd->add_option("-i,--in", analyze_opts.in, "input WAV")->required();
  analyze_cmd->add_option("--beats", analyze_opts.beats, "beat grid JSON");
  analyze_cmd->add_option("--bpm", analyze_opts.bpm, "fixed-bpm grid instead of --beats");
  analyze_cmd->add_option("--offset", analyze_opts.offset, "first-beat offset for --bpm");
  analyze_cmd->add_option("--model", analyze_opts.model, "space model JSON")->required();
  analyze_cmd->add_option("-o,--out", analyze_opts.out, "report path (.csv or .json)")
      ->required();
  analyze_cmd->add_option("--svg", analyze_opts.svg, "also write an SVG scatter");
  analyze_cmd->add_option("--json", analyze_opts.json, "also write the JSON mirror");

  // ---- space ----------------------------------------------------------
  CLI::App* space_cmd = app.add_subcommand("space", "corpus-level space operations");
  space_cmd->require_subcommand(1);

  struct {
    std::string corpus;
    std::string model_out;
    int n_tracks = 54;
    std::uint64_t seed = 1;
    bool generate = false;
  } fit;
  CLI::App* space_fit = space_cmd->add_subcommand("fit", "fit normalization + PCA over a corpus");
  space_fit->add_option("--corpus", fit.corpus, "corpus directory of WAV files")->required();
  space_fit->add_option("--model-out", fit.model_out, "output model JSON")->required();
  space_fit->add_flag("--generate", fit.generate, "synthesize the corpus into --corpus first");
  space_fit->add_option("--n-tracks", fit.n_tracks, "tracks to synthesize with --generate")
      ->capture_default_str();
  space_fit->add_option("--seed", fit.seed, "corpus seed with --generate")
      ->capture_default_str();
  std::string fit_svg;
  space_fit->add_option("--svg", fit_svg, "scatter + density isoline plot of the corpus");

  struct {
    std::string corpus;
    std::string model;
    std::string gains = "-1,-0.5,0,0.5,1";
    std::string out;
  } sweep;
  CLI::App* space_sweep =
      space_cmd->add_subcommand("sweep", "median space shift under a salience-gain sweep");
  space_sweep->add_option("--corpus", sweep.corpus, "corpus directory")->required();
  space_sweep->add_option("--model", sweep.model, "space model JSON")->required();
  space_sweep->add_option("--gains", sweep.gains, "comma-separated gain list")
      ->capture_default_str();
  space_sweep->add_option("-o,--out", sweep.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadArgs;
  }

  try {
    if (synth_ref->parsed()) {
      pstk::ReferenceSoundSpec spec{ref.id, ref.freq, ref.dur, ref.sr, ref.seed};
      pstk::save_audio(pstk::gen_reference_sound(spec), ref.out, pstk::WavDepth::float32);
    } else if (synth_irn->parsed()) {
      pstk::IrnSpec spec{irn.delay_ms / 1000.0, irn.gain, irn.iterations,
                         irn.dur,               irn.sr,   irn.seed};
      pstk::save_audio(pstk::gen_irn(spec), irn.out, pstk::WavDepth::float32);
    } else if (synth_mauch->parsed()) {
      pstk::MauchToneSpec spec{mauch.f0, mauch.s, mauch.n, mauch.dur, mauch.sr};
      pstk::save_audio(pstk::gen_mauch_tone(spec), mauch.out, pstk::WavDepth::float32);
    } else if (distort_cmd->parsed()) {
      pstk::WaveshaperSpec spec;
      spec.polynomial_coeffs = parse_double_list(distort.poly);
      if (distort.normalize == "peak")
        spec.output_normalization = pstk::WaveshaperSpec::Normalization::peak;
      else if (distort.normalize != "none")
        throw pstk::InvalidArgument("--normalize must be none or peak");
      const pstk::AudioBuffer in = pstk::load_audio(distort.in);
      const std::size_t clipped =
          pstk::save_audio(pstk::apply_waveshaper(in, spec), distort.out,
                           pstk::WavDepth::float32);
      if (clipped) std::cerr << "clipped " << clipped << " samples\n";
    } else if (eq_cmd->parsed()) {
      pstk::SalienceSettings settings;
      settings.gain = eq.gain;
      settings.cutoff_quefrency_s = eq.cutoff_quefrency;
      settings.frame_len = global.frame;
      settings.hop = std::min(global.hop, global.frame / 2);
      const pstk::AudioBuffer in = pstk::load_audio(eq.in);
      const std::size_t clipped = pstk::save_audio(pstk::apply_salience_gain(in, settings),
                                                   eq.out, pstk::WavDepth::float32);
      if (clipped) std::cerr << "clipped " << clipped << " samples\n";
    } else if (peaks_cmd->parsed()) {
      const pstk::AudioBuffer in = pstk::load_audio(peaks_opts.in);
      if (in.samples.size() < global.frame) throw pstk::BufferTooShort("input shorter than one frame");
      const pstk::SpectrumFrame avg =
          pstk::average_spectrum(in, global.frame, pstk::Window::hann);
      const pstk::SpectrumFrame weighted = pstk::iso226_weight(avg, global.phon);
      const auto peaks = pstk::pick_spectral_peaks(weighted, peaks_opts.min_prominence_db,
                                                   peaks_opts.min_separation_hz);
      // harmonic grid: multiples of the lowest peak
      const double grid_f0 = peaks.empty() ? 0.0 : peaks.front().freq_hz;
      std::ostringstream os;
      os << "freq_hz,power_db,midi_note,delta_to_prev_hz,harmonic_number\n";
      for (std::size_t i = 0; i < peaks.size(); ++i) {
        os << pstk::format_double(peaks[i].freq_hz) << ','
           << pstk::format_double(peaks[i].power_db) << ','
           << pstk::format_double(pstk::freq_to_midi(peaks[i].freq_hz)) << ',';
        if (i > 0) os << pstk::format_double(peaks[i].freq_hz - peaks[i - 1].freq_hz);
        os << ',';
        if (grid_f0 > 0.0) os << std::llround(peaks[i].freq_hz / grid_f0);
        os << "\n";
      }
      if (peaks_opts.out.empty())
        std::cout << os.str();
      else
        pstk::write_text_file(peaks_opts.out, os.str());
    } else if (analyze_cmd->parsed()) {
      const pstk::AudioBuffer in = pstk::load_audio(analyze_opts.in);
      pstk::BeatGrid grid;
      if (!analyze_opts.beats.empty())
        grid = pstk::load_beat_grid(analyze_opts.beats, in.duration_s());
      else if (analyze_opts.bpm > 0.0)
        grid = pstk::beat_grid_fixed_bpm(analyze_opts.bpm, analyze_opts.offset, in.duration_s());
      else
        throw pstk::InvalidArgument("need --beats or --bpm");

      pstk::PcaModel model;
      pstk::CorpusStats stats;
      pstk::load_space_model(analyze_opts.model, model, stats);

      pstk::TrackParams params;
      const pstk::TrackReport report = pstk::analyze_track(
          in, grid, model, stats, params,
          std::filesystem::path(analyze_opts.in).stem().string());

      const bool json_main = std::filesystem::path(analyze_opts.out).extension() == ".json";
      pstk::write_text_file(analyze_opts.out, json_main ? pstk::report_to_json(report)
                                                        : pstk::report_to_csv(report));
      if (!analyze_opts.json.empty())
        pstk::write_text_file(analyze_opts.json, pstk::report_to_json(report));
      if (!analyze_opts.svg.empty())
        pstk::write_text_file(analyze_opts.svg, pstk::report_to_svg(report, &model));
    } else if (space_fit->parsed()) {
      if (fit.generate) {
        pstk::SyntheticCorpusSpec spec;
        spec.n_tracks = fit.n_tracks;
        spec.seed = fit.seed;
        pstk::gen_synthetic_corpus(spec, fit.corpus);
      }
      pstk::PcaModel model;
      pstk::CorpusStats stats;
      if (fit_svg.empty()) {
        pstk::fit_space_over_corpus(fit.corpus, pstk::TrackParams{}, model, stats);
      } else {
        const auto points = pstk::corpus_space_points(fit.corpus, pstk::TrackParams{}, stats);
        model = pstk::fit_pca(points);
        const auto isoline = pstk::kde_half_height_isoline(points);
        pstk::write_text_file(fit_svg, pstk::corpus_svg(points, isoline, &model));
      }
      pstk::save_space_model(model, stats, fit.model_out);
    } else if (space_sweep->parsed()) {
      pstk::PcaModel model;
      pstk::CorpusStats stats;
      pstk::load_space_model(sweep.model, model, stats);
      pstk::SalienceSettings eq_settings;
      eq_settings.frame_len = global.frame;
      eq_settings.hop = std::min(global.hop, global.frame / 2);
      const auto rows =
          pstk::run_eq_sweep_experiment(sweep.corpus, parse_double_list(sweep.gains), model,
                                        stats, pstk::TrackParams{}, eq_settings);
      pstk::write_text_file(sweep.out, pstk::sweep_to_csv(rows));
    }
  } catch (const pstk::UnsupportedFormat& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const pstk::CorruptFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const pstk::IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const pstk::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const pstk::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
