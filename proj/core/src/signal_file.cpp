#include "rpup/signal_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "rpup/errors.hpp"

namespace rpup {
namespace {

constexpr char kMagic[4] = {'R', 'P', 'U', 'P'};

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(char(v & 0xff));
  buf.push_back(char((v >> 8) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
  return std::uint16_t(p[0] | (std::uint16_t(p[1]) << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void write_signal_file(const std::string& path, const SignalFile& file) {
  std::string buf;
  buf.reserve(16 + 8 * file.samples.size());
  buf.append(kMagic, 4);
  put_u16(buf, kSignalFormatVersion);
  put_u16(buf, file.block_size);
  put_u64(buf, file.samples.size());
  for (double d : file.samples) put_u64(buf, std::bit_cast<std::uint64_t>(d));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw IoError("write failed: " + path);
}

SignalFile read_signal_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  if (buf.size() < 16) throw IoError("not a signal file (short header): " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (std::memcmp(p, kMagic, 4) != 0)
    throw IoError("not a signal file (bad magic): " + path);
  const std::uint16_t version = get_u16(p + 4);
  if (version != kSignalFormatVersion)
    throw IoError("unsupported signal format version " + std::to_string(version) + ": " + path);
  SignalFile file;
  file.block_size = get_u16(p + 6);
  const std::uint64_t count = get_u64(p + 8);
  if (buf.size() != 16 + 8 * count)
    throw IoError("payload length disagrees with header count: " + path);
  file.samples.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    file.samples[i] = std::bit_cast<double>(get_u64(p + 16 + 8 * i));
  return file;
}

}  // namespace rpup
