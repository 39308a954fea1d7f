#include <pstk/wav_io.hpp>

#include <pstk/errors.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace pstk {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

double decode_sample(const std::uint8_t* p, std::uint16_t bits, std::uint16_t format) {
  if (format == kFormatFloat) {
    std::uint32_t raw = read_u32(p);
    float f = 0.0f;
    static_assert(sizeof(raw) == sizeof(f));
    std::memcpy(&f, &raw, sizeof(f));
    return static_cast<double>(f);
  }
  if (bits == 16) {
    auto v = static_cast<std::int16_t>(read_u16(p));
    return static_cast<double>(v) / 32768.0;
  }
  // 24-bit signed little-endian
  std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
  if (v & 0x800000) v -= 0x1000000;
  return static_cast<double>(v) / 8388608.0;
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

}  // namespace

AudioBuffer load_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw CorruptFile("not a RIFF/WAVE file: " + path.string());
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::uint32_t data_len = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    std::uint32_t chunk_len = read_u32(hdr + 4);
    const std::uint8_t* body = hdr + 8;
    if (pos + 8 + chunk_len > bytes.size()) throw CorruptFile("chunk overruns file");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw CorruptFile("fmt chunk too short");
      format = read_u16(body);
      channels = read_u16(body + 2);
      sample_rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      if (format == kFormatExtensible) {
        if (chunk_len < 40) throw CorruptFile("extensible fmt chunk too short");
        format = read_u16(body + 24);  // first two bytes of the SubFormat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
      have_data = true;
    }
    pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || !have_data) throw CorruptFile("missing fmt or data chunk");
  if (format != kFormatPcm && format != kFormatFloat)
    throw UnsupportedFormat("unsupported encoding tag " + std::to_string(format));
  if (channels < 1 || channels > 2)
    throw UnsupportedFormat("unsupported channel count " + std::to_string(channels));
  if (format == kFormatPcm && bits != 16 && bits != 24)
    throw UnsupportedFormat("unsupported PCM bit depth " + std::to_string(bits));
  if (format == kFormatFloat && bits != 32)
    throw UnsupportedFormat("unsupported float bit depth " + std::to_string(bits));
  if (sample_rate == 0) throw CorruptFile("zero sample rate");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  if (frame_size == 0 || data_len % frame_size != 0)
    throw CorruptFile("data length is not a whole number of frames");
  const std::size_t n_frames = data_len / frame_size;

  AudioBuffer buf;
  buf.sample_rate_hz = static_cast<int>(sample_rate);
  buf.samples.resize(static_cast<Eigen::Index>(n_frames));
  for (std::size_t i = 0; i < n_frames; ++i) {
    const std::uint8_t* frame = data + i * frame_size;
    double v = decode_sample(frame, bits, format);
    if (channels == 2) v = 0.5 * (v + decode_sample(frame + bytes_per_sample, bits, format));
    buf.samples[static_cast<Eigen::Index>(i)] = v;
  }
  if (!buf.valid()) throw CorruptFile("non-finite samples in " + path.string());
  return buf;
}

std::size_t save_audio(const AudioBuffer& buffer, const std::filesystem::path& path,
                       WavDepth depth) {
  if (buffer.sample_rate_hz <= 0) throw InvalidArgument("sample_rate_hz must be positive");
  if (!buffer.valid()) throw InvalidArgument("buffer contains non-finite samples");

  const std::uint16_t bits = depth == WavDepth::pcm16 ? 16 : depth == WavDepth::pcm24 ? 24 : 32;
  const std::uint16_t format = depth == WavDepth::float32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t n = static_cast<std::uint32_t>(buffer.samples.size());
  const std::uint32_t block_align = bits / 8;
  const std::uint32_t data_len = n * block_align;
  const std::uint32_t data_pad = data_len & 1;  // RIFF chunks are word-aligned

  std::size_t clipped = 0;
  std::vector<std::uint8_t> out;
  out.reserve(60 + data_len + data_pad);
  const bool is_float = depth == WavDepth::float32;
  const std::uint32_t fact_extra = is_float ? 12 : 0;  // non-PCM carries a fact chunk
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  append_u32(out, 4 + 24 + fact_extra + 8 + data_len + data_pad);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  append_u32(out, 16);
  append_u16(out, format);
  append_u16(out, 1);  // mono
  append_u32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz));
  append_u32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz) * block_align);
  append_u16(out, static_cast<std::uint16_t>(block_align));
  append_u16(out, bits);
  if (is_float) {
    out.insert(out.end(), {'f', 'a', 'c', 't'});
    append_u32(out, 4);
    append_u32(out, n);
  }
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  append_u32(out, data_len);

  for (Eigen::Index i = 0; i < buffer.samples.size(); ++i) {
    double x = buffer.samples[i];
    if (x > 1.0 || x < -1.0) {
      ++clipped;
      x = std::clamp(x, -1.0, 1.0);
    }
    switch (depth) {
      case WavDepth::pcm16: {
        auto v = static_cast<std::int32_t>(std::llround(x * 32768.0));
        v = std::clamp(v, -32768, 32767);
        append_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
        break;
      }
      case WavDepth::pcm24: {
        auto v = static_cast<std::int32_t>(std::llround(x * 8388608.0));
        v = std::clamp(v, -8388608, 8388607);
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
        out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
        break;
      }
      case WavDepth::float32: {
        auto f = static_cast<float>(x);
        std::uint32_t raw = 0;
        std::memcpy(&raw, &f, sizeof(raw));
        append_u32(out, raw);
        break;
      }
    }
  }
  if (data_pad) out.push_back(0);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoFailure("cannot open for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoFailure("write failed: " + path.string());
  return clipped;
}

}  // namespace pstk
