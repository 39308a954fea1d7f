#pragma once

#include <pstk/audio_buffer.hpp>

#include <cstddef>
#include <filesystem>

namespace pstk {

enum class WavDepth { pcm16, pcm24, float32 };

// RIFF/WAVE reader. Accepts 16/24-bit integer and 32-bit float PCM, 1 or 2
// channels, little-endian, `fmt ` + `data` chunks required, other chunks
// ignored. Stereo is downmixed by per-sample channel mean; integer samples
// are scaled by 1/2^(bits-1). Throws UnsupportedFormat or CorruptFile.
AudioBuffer load_audio(const std::filesystem::path& path);

// Writes `buffer` at the requested depth. Samples outside [-1, 1] are
// hard-clipped; the count of clipped samples is returned.
std::size_t save_audio(const AudioBuffer& buffer, const std::filesystem::path& path,
                       WavDepth depth = WavDepth::pcm16);

}  // namespace pstk
