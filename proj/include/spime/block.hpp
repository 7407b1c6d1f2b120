#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "spime/error.hpp"

namespace spime {

using Byte = std::uint8_t;

/// 128-bit data unit: plaintext, ciphertext, cipher key or round key.
/// Byte 0 is the most significant byte of the hex form.
struct Block128 {
  static constexpr std::size_t kBytes = 16;

  std::array<Byte, kBytes> bytes{};

  constexpr Byte& operator[](std::size_t i) { return bytes[i]; }
  constexpr Byte operator[](std::size_t i) const { return bytes[i]; }

  friend constexpr bool operator==(const Block128&, const Block128&) = default;

  friend constexpr Block128 operator^(Block128 a, const Block128& b) {
    for (std::size_t i = 0; i < kBytes; ++i) a.bytes[i] ^= b.bytes[i];
    return a;
  }

  static Block128 from_bytes(std::span<const Byte, kBytes> src) {
    Block128 b;
    for (std::size_t i = 0; i < kBytes; ++i) b.bytes[i] = src[i];
    return b;
  }

  /// Exactly 32 hex digits, either case. Throws ParseError otherwise.
  static Block128 from_hex(std::string_view hex);

  /// 32 lowercase hex digits.
  std::string to_hex() const;
};

namespace detail {

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline void append_hex(std::string& out, Byte b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  out.push_back(kDigits[b >> 4]);
  out.push_back(kDigits[b & 0x0f]);
}

}  // namespace detail

inline Block128 Block128::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kBytes) {
    throw ParseError("expected 32 hex characters, got " + std::to_string(hex.size()));
  }
  Block128 b;
  for (std::size_t i = 0; i < kBytes; ++i) {
    const int hi = detail::hex_value(hex[2 * i]);
    const int lo = detail::hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError("invalid hex digit in '" + std::string(hex) + "'");
    }
    b.bytes[i] = static_cast<Byte>((hi << 4) | lo);
  }
  return b;
}

inline std::string Block128::to_hex() const {
  std::string out;
  out.reserve(2 * kBytes);
  for (Byte v : bytes) detail::append_hex(out, v);
  return out;
}

}  // namespace spime
