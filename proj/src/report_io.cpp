#include <pstk/report_io.hpp>

#include <pstk/errors.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pstk {

std::string format_double(double v) {
  // nlohmann prints the shortest representation that round-trips
  return nlohmann::json(v).dump();
}

namespace {

constexpr const char* kCsvHeader =
    "track_id,beat_index,t_start_s,t_end_s,harmonic_ratio,flatness,"
    "inharmonicity_norm,noisiness_norm,pc1,pc2,degenerate";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw CorruptFile("bad number in report: " + s);
  return v;
}

nlohmann::json record_to_json(const TrackReport& report, const BeatRecord& b) {
  return {{"track_id", report.track_id},
          {"beat_index", b.beat_index},
          {"t_start_s", b.t_start_s},
          {"t_end_s", b.t_end_s},
          {"harmonic_ratio", b.features.harmonic_ratio},
          {"flatness", b.features.flatness},
          {"inharmonicity_norm", b.features.inharmonicity_norm},
          {"noisiness_norm", b.features.noisiness_norm},
          {"pc1", b.pc1},
          {"pc2", b.pc2},
          {"degenerate", b.degenerate}};
}

}  // namespace

std::string report_to_csv(const TrackReport& report) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const BeatRecord& b : report.beats) {
    os << report.track_id << ',' << b.beat_index << ',' << format_double(b.t_start_s) << ','
       << format_double(b.t_end_s) << ',' << format_double(b.features.harmonic_ratio) << ','
       << format_double(b.features.flatness) << ','
       << format_double(b.features.inharmonicity_norm) << ','
       << format_double(b.features.noisiness_norm) << ',' << format_double(b.pc1) << ','
       << format_double(b.pc2) << ',' << (b.degenerate ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string report_to_json(const TrackReport& report) {
  nlohmann::json j;
  j["version"] = 1;
  j["track_id"] = report.track_id;
  j["beats"] = nlohmann::json::array();
  for (const BeatRecord& b : report.beats) j["beats"].push_back(record_to_json(report, b));
  return j.dump(2) + "\n";
}

TrackReport report_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw CorruptFile("empty CSV");
  if (line != kCsvHeader) throw CorruptFile("unexpected CSV header");
  TrackReport report;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw CorruptFile("bad CSV row");
    report.track_id = f[0];
    BeatRecord b;
    b.beat_index = static_cast<int>(parse_double(f[1]));
    b.t_start_s = parse_double(f[2]);
    b.t_end_s = parse_double(f[3]);
    b.features.harmonic_ratio = parse_double(f[4]);
    b.features.flatness = parse_double(f[5]);
    b.features.inharmonicity_norm = parse_double(f[6]);
    b.features.noisiness_norm = parse_double(f[7]);
    b.pc1 = parse_double(f[8]);
    b.pc2 = parse_double(f[9]);
    b.degenerate = f[10] == "1";
    b.features.degenerate = b.degenerate;
    report.beats.push_back(b);
  }
  return report;
}

TrackReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile("bad report JSON: " + std::string(e.what()));
  }
  TrackReport report;
  report.track_id = j.value("track_id", "");
  for (const auto& r : j.at("beats")) {
    BeatRecord b;
    b.beat_index = r.at("beat_index").get<int>();
    b.t_start_s = r.at("t_start_s").get<double>();
    b.t_end_s = r.at("t_end_s").get<double>();
    b.features.harmonic_ratio = r.at("harmonic_ratio").get<double>();
    b.features.flatness = r.at("flatness").get<double>();
    b.features.inharmonicity_norm = r.at("inharmonicity_norm").get<double>();
    b.features.noisiness_norm = r.at("noisiness_norm").get<double>();
    b.pc1 = r.at("pc1").get<double>();
    b.pc2 = r.at("pc2").get<double>();
    b.degenerate = r.at("degenerate").get<bool>();
    b.features.degenerate = b.degenerate;
    report.beats.push_back(b);
  }
  return report;
}

std::string report_to_svg(const TrackReport& report, const PcaModel* arrows) {
  constexpr double kSize = 560.0;
  constexpr double kMargin = 60.0;
  const double plot = kSize - 2.0 * kMargin;
  auto sx = [&](double v) { return kMargin + v * plot; };
  auto sy = [&](double v) { return kSize - kMargin - v * plot; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot
     << "\" height=\"" << plot << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << kSize / 2.0 << "\" y=\"" << kSize - 18.0
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << "normalized noisiness</text>\n"
     << "<text x=\"20\" y=\"" << kSize / 2.0
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\" "
     << "transform=\"rotate(-90 20 " << kSize / 2.0 << ")\">HR-inharmonicity</text>\n";

  if (arrows) {
    const double cx = sx(arrows->mean.x());
    const double cy = sy(arrows->mean.y());
    for (int i = 0; i < 2; ++i) {
      const double len = 0.25 * (i == 0 ? 1.0 : 0.6);
      const double ex = sx(arrows->mean.x() + len * arrows->components(i, 0));
      const double ey = sy(arrows->mean.y() + len * arrows->components(i, 1));
      os << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << ex << "\" y2=\"" << ey
         << "\" stroke=\"gray\" stroke-width=\"2\"/>\n"
         << "<text x=\"" << ex + 4 << "\" y=\"" << ey - 4
         << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"gray\">PC" << (i + 1)
         << "</text>\n";
    }
  }

  for (const BeatRecord& b : report.beats) {
    const char* fill = b.degenerate ? "lightgray" : "steelblue";
    os << "<circle cx=\"" << sx(b.features.noisiness_norm) << "\" cy=\""
       << sy(b.features.inharmonicity_norm) << "\" r=\"4\" fill=\"" << fill
       << "\" fill-opacity=\"0.8\"><title>beat " << b.beat_index << "</title></circle>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string corpus_svg(const std::vector<SpacePoint>& points,
                       const std::vector<Eigen::Vector4d>& isoline_segments,
                       const PcaModel* arrows) {
  constexpr double kSize = 560.0;
  constexpr double kMargin = 60.0;
  const double plot = kSize - 2.0 * kMargin;
  auto sx = [&](double v) { return kMargin + v * plot; };
  auto sy = [&](double v) { return kSize - kMargin - v * plot; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot
     << "\" height=\"" << plot << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << kSize / 2.0 << "\" y=\"" << kSize - 18.0
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << "normalized noisiness</text>\n"
     << "<text x=\"20\" y=\"" << kSize / 2.0
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\" "
     << "transform=\"rotate(-90 20 " << kSize / 2.0 << ")\">HR-inharmonicity</text>\n";

  for (const SpacePoint& p : points)
    os << "<circle cx=\"" << sx(p.noisiness_norm) << "\" cy=\"" << sy(p.inharmonicity_norm)
       << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.65\"/>\n";

  for (const Eigen::Vector4d& s : isoline_segments)
    os << "<line x1=\"" << sx(s[0]) << "\" y1=\"" << sy(s[1]) << "\" x2=\"" << sx(s[2])
       << "\" y2=\"" << sy(s[3]) << "\" stroke=\"darkorange\" stroke-width=\"1.5\"/>\n";

  if (arrows) {
    const double cx = sx(arrows->mean.x());
    const double cy = sy(arrows->mean.y());
    for (int i = 0; i < 2; ++i) {
      const double len = 0.25 * (i == 0 ? 1.0 : 0.6);
      const double ex = sx(arrows->mean.x() + len * arrows->components(i, 0));
      const double ey = sy(arrows->mean.y() + len * arrows->components(i, 1));
      os << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << ex << "\" y2=\"" << ey
         << "\" stroke=\"gray\" stroke-width=\"2\"/>\n"
         << "<text x=\"" << ex + 4 << "\" y=\"" << ey - 4
         << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"gray\">PC" << (i + 1)
         << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "gain,median_noisiness,median_inharmonicity,p25_noisiness,p25_inharmonicity,"
     << "p75_noisiness,p75_inharmonicity\n";
  for (const SweepRow& r : rows) {
    os << format_double(r.gain) << ',' << format_double(r.median.noisiness_norm) << ','
       << format_double(r.median.inharmonicity_norm) << ',' << format_double(r.p25.noisiness_norm)
       << ',' << format_double(r.p25.inharmonicity_norm) << ','
       << format_double(r.p75.noisiness_norm) << ',' << format_double(r.p75.inharmonicity_norm)
       << "\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoFailure("cannot write " + path.string());
  os << text;
  if (!os) throw IoFailure("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoFailure("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace pstk
