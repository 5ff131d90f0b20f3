#pragma once

// 16-bit PCM mono RIFF/WAVE reading and writing.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace emphlab {

struct WavAudio {
  int sample_rate_hz = 16000;
  std::vector<double> samples;  // scaled by 1/32768, in [-1, 1)
};

// Throws FormatError for anything but PCM (format tag 1), 16-bit, mono.
WavAudio decode_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_wav(const WavAudio& audio);

// Throws IoError with the path on failure.
WavAudio read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const WavAudio& audio);

// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace emphlab
