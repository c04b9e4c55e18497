#pragma once

// Tag-stream file codecs.
//
// Binary layout, little-endian:
//   header (16 bytes): "ARNGTAG" (7 bytes) | u8 version | u64 clock tick in fs
//   records (9 bytes): u8 channel (0 blue, 1 red) | u64 tick
// Records run to end of file. Origin labels are not stored.
//
// Text layout: '#' comment lines, a `clock_tick_fs <n>` line, then one
// `channel tick` pair per line.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "arng/error.hpp"
#include "arng/photon_stream.hpp"

namespace arng::stream {

inline constexpr std::string_view kTagMagic = "ARNGTAG";
inline constexpr std::uint8_t kTagVersion = 1;
inline constexpr std::size_t kTagHeaderBytes = 16;
inline constexpr std::size_t kTagRecordBytes = 9;

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint64_t get_u64(std::string_view in, std::size_t pos) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]);
  return v;
}

}  // namespace detail

inline std::string encode_binary(const TagStream& s) {
  std::string out;
  out.reserve(kTagHeaderBytes + kTagRecordBytes * s.events.size());
  out.append(kTagMagic);
  out.push_back(static_cast<char>(kTagVersion));
  detail::put_u64(out, s.clock_tick_fs);
  for (const auto& e : s.events) {
    out.push_back(static_cast<char>(e.channel));
    detail::put_u64(out, e.tick);
  }
  return out;
}

inline TagStream decode_binary(std::string_view bytes) {
  if (bytes.size() < kTagHeaderBytes || bytes.substr(0, kTagMagic.size()) != kTagMagic)
    throw FormatError("not a tag-stream file (bad magic)");
  const auto version = static_cast<std::uint8_t>(bytes[kTagMagic.size()]);
  if (version != kTagVersion) throw FormatError("unsupported tag-stream version " + std::to_string(version));
  TagStream s;
  s.clock_tick_fs = detail::get_u64(bytes, 8);
  if (s.clock_tick_fs == 0) throw FormatError("tag-stream header has zero clock tick");
  const auto body = bytes.size() - kTagHeaderBytes;
  if (body % kTagRecordBytes != 0) throw FormatError("tag-stream file is truncated");
  s.events.reserve(body / kTagRecordBytes);
  for (std::size_t pos = kTagHeaderBytes; pos < bytes.size(); pos += kTagRecordBytes) {
    const auto ch = static_cast<std::uint8_t>(bytes[pos]);
    if (ch > 1) throw FormatError("invalid channel byte " + std::to_string(ch));
    const auto tick = detail::get_u64(bytes, pos + 1);
    if (!s.events.empty() && tick < s.events.back().tick) throw FormatError("tag-stream ticks are not sorted");
    s.events.push_back({static_cast<Channel>(ch), tick, Origin::unknown});
  }
  return s;
}

inline void write_binary(const std::filesystem::path& path, const TagStream& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const auto bytes = encode_binary(s);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline TagStream read_binary(const std::filesystem::path& path) { return decode_binary(read_file_bytes(path)); }

inline std::string encode_text(const TagStream& s) {
  std::ostringstream out;
  out << "# channel: 0 = blue, 1 = red; tick in clock units\n";
  out << "clock_tick_fs " << s.clock_tick_fs << '\n';
  for (const auto& e : s.events) out << static_cast<int>(e.channel) << ' ' << e.tick << '\n';
  return out.str();
}

inline TagStream decode_text(std::istream& in) {
  TagStream s;
  bool have_clock = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "clock_tick_fs") {
      if (!(ls >> s.clock_tick_fs) || s.clock_tick_fs == 0) throw FormatError("bad clock_tick_fs line");
      have_clock = true;
      continue;
    }
    int ch = -1;
    std::uint64_t tick = 0;
    std::istringstream rs(line);
    if (!(rs >> ch >> tick) || (ch != 0 && ch != 1)) throw FormatError("bad tag line: " + line);
    if (!s.events.empty() && tick < s.events.back().tick) throw FormatError("tag-stream ticks are not sorted");
    s.events.push_back({static_cast<Channel>(ch), tick, Origin::unknown});
  }
  if (!have_clock) throw FormatError("text tag stream lacks clock_tick_fs");
  return s;
}

}  // namespace arng::stream
