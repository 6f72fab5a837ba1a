#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rpup {

// Container format, fixed 16-byte header, little-endian throughout:
//   bytes 0..3   magic "RPUP"
//   bytes 4..5   format version (currently 1), uint16
//   bytes 6..7   block size M, uint16
//   bytes 8..15  element count, uint64
// followed by count IEEE-754 float64 samples.
struct SignalFile {
  std::uint16_t block_size = 1;
  std::vector<double> samples;

  std::size_t block_count() const { return block_size ? samples.size() / block_size : 0; }
};

inline constexpr std::uint16_t kSignalFormatVersion = 1;

void write_signal_file(const std::string& path, const SignalFile& file);

// Throws IoError on missing/short/foreign files.
SignalFile read_signal_file(const std::string& path);

}  // namespace rpup
