#pragma once

// Bit extraction from tag streams (colour or timestamp parity), imbalance
// statistics, and the two bitstream export formats.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arng/error.hpp"
#include "arng/photon_stream.hpp"

namespace arng::bits {

enum class Scheme : std::uint8_t { color = 0, time_parity = 1 };

inline const char* to_string(Scheme s) { return s == Scheme::color ? "color" : "time_parity"; }

// Keeps the atmospheric-delay floor: nothing finer than tens of nanoseconds.
inline constexpr double kDefaultDigitPeriod = 10e-9;  // s

struct BitStream {
  std::vector<std::uint8_t> bits;    // each 0 or 1
  std::vector<std::uint64_t> ticks;  // parallel to bits; empty if unknown
  Scheme scheme = Scheme::color;
  std::string source;

  std::size_t size() const noexcept { return bits.size(); }

  static BitStream from_bits(std::vector<std::uint8_t> b, Scheme scheme = Scheme::color, std::string source = {}) {
    BitStream s;
    s.bits = std::move(b);
    s.scheme = scheme;
    s.source = std::move(source);
    return s;
  }
};

// blue -> 0, red -> 1.
inline BitStream bits_from_color(const stream::TagStream& s, std::string source = {}) {
  BitStream out;
  out.scheme = Scheme::color;
  out.source = std::move(source);
  out.bits.reserve(s.events.size());
  out.ticks.reserve(s.events.size());
  for (const auto& e : s.events) {
    out.bits.push_back(e.channel == stream::Channel::red ? 1 : 0);
    out.ticks.push_back(e.tick);
  }
  return out;
}

// bit = floor(tick * clock / period) mod 2, in exact femtosecond arithmetic.
inline BitStream bits_from_time_parity(const stream::TagStream& s, double digit_period, std::string source = {}) {
  const double period_fs_d = std::round(digit_period * 1e15);
  if (!std::isfinite(period_fs_d) || period_fs_d < static_cast<double>(s.clock_tick_fs))
    throw InvalidArgument("digit period must be at least one clock tick");
  const auto period_fs = static_cast<unsigned __int128>(period_fs_d);
  BitStream out;
  out.scheme = Scheme::time_parity;
  out.source = std::move(source);
  out.bits.reserve(s.events.size());
  out.ticks.reserve(s.events.size());
  for (const auto& e : s.events) {
    const auto t_fs = static_cast<unsigned __int128>(e.tick) * s.clock_tick_fs;
    out.bits.push_back(static_cast<std::uint8_t>((t_fs / period_fs) & 1u));
    out.ticks.push_back(e.tick);
  }
  return out;
}

struct ImbalanceReport {
  std::uint64_t zeros = 0;
  std::uint64_t ones = 0;
  double ones_fraction = 0.0;
  std::size_t window = 0;
  std::vector<double> window_ones_fraction;  // complete windows only
};

inline ImbalanceReport imbalance_report(const BitStream& b, std::size_t window = 10000) {
  if (b.bits.empty()) throw InsufficientData("empty bitstream");
  if (window == 0) throw InvalidArgument("window must be positive");
  ImbalanceReport r;
  r.window = window;
  std::uint64_t in_window = 0;
  for (std::size_t i = 0; i < b.bits.size(); ++i) {
    const bool one = b.bits[i] != 0;
    r.ones += one;
    in_window += one;
    if ((i + 1) % window == 0) {
      r.window_ones_fraction.push_back(static_cast<double>(in_window) / static_cast<double>(window));
      in_window = 0;
    }
  }
  r.zeros = b.bits.size() - r.ones;
  r.ones_fraction = static_cast<double>(r.ones) / static_cast<double>(b.bits.size());
  return r;
}

// NIST STS ASCII input: '0'/'1', newline every `line_width` characters.
inline std::string to_nist_ascii(const BitStream& b, std::size_t line_width = 80) {
  std::string out;
  out.reserve(b.bits.size() + b.bits.size() / line_width + 1);
  for (std::size_t i = 0; i < b.bits.size(); ++i) {
    out.push_back(b.bits[i] ? '1' : '0');
    if ((i + 1) % line_width == 0) out.push_back('\n');
  }
  if (!b.bits.empty() && b.bits.size() % line_width != 0) out.push_back('\n');
  return out;
}

inline BitStream from_ascii(std::string_view text, Scheme scheme = Scheme::color) {
  BitStream b;
  b.scheme = scheme;
  for (char c : text) {
    if (c == '0' || c == '1')
      b.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != '\n' && c != '\r' && c != ' ' && c != '\t')
      throw FormatError(std::string("unexpected character in bit file: '") + c + "'");
  }
  return b;
}

// Packed layout, little-endian:
//   "ARNGBIT" | u8 version | u8 scheme | u32 metadata length | metadata
//   | u64 bit count | bits packed MSB-first
inline constexpr std::string_view kBitMagic = "ARNGBIT";
inline constexpr std::uint8_t kBitVersion = 1;

inline std::string encode_packed(const BitStream& b) {
  std::string out(kBitMagic);
  out.push_back(static_cast<char>(kBitVersion));
  out.push_back(static_cast<char>(b.scheme));
  const auto meta_len = static_cast<std::uint32_t>(b.source.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((meta_len >> (8 * i)) & 0xFFu));
  out.append(b.source);
  const std::uint64_t n = b.bits.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((n >> (8 * i)) & 0xFFu));
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < b.bits.size(); ++i) {
    acc = static_cast<std::uint8_t>((acc << 1) | (b.bits[i] & 1u));
    if (i % 8 == 7) {
      out.push_back(static_cast<char>(acc));
      acc = 0;
    }
  }
  if (const auto rem = b.bits.size() % 8; rem != 0) out.push_back(static_cast<char>(acc << (8 - rem)));
  return out;
}

inline BitStream decode_packed(std::string_view in) {
  const auto fail = [] { return FormatError("malformed packed bitstream"); };
  if (in.size() < kBitMagic.size() + 6 || in.substr(0, kBitMagic.size()) != kBitMagic) throw fail();
  std::size_t pos = kBitMagic.size();
  if (static_cast<std::uint8_t>(in[pos++]) != kBitVersion) throw FormatError("unsupported packed bitstream version");
  const auto scheme = static_cast<std::uint8_t>(in[pos++]);
  if (scheme > 1) throw fail();
  std::uint32_t meta_len = 0;
  for (int i = 3; i >= 0; --i) meta_len = (meta_len << 8) | static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]);
  pos += 4;
  if (in.size() < pos + meta_len + 8) throw fail();
  BitStream b;
  b.scheme = static_cast<Scheme>(scheme);
  b.source = std::string(in.substr(pos, meta_len));
  pos += meta_len;
  std::uint64_t n = 0;
  for (int i = 7; i >= 0; --i) n = (n << 8) | static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]);
  pos += 8;
  if (in.size() - pos != (n + 7) / 8) throw fail();
  b.bits.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto byte = static_cast<unsigned char>(in[pos + i / 8]);
    b.bits[i] = static_cast<std::uint8_t>((byte >> (7 - i % 8)) & 1u);
  }
  return b;
}

}  // namespace arng::bits
