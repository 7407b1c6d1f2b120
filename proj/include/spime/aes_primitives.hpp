#pragma once

// AES-128 encryption transformations as pure functions over a 4x4 byte
// state. Shared by the cycle-accurate core and by the test oracles.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "spime/block.hpp"

namespace spime {

/// 4x4 AES state, indexed s[row][column]. Block byte 4c+r maps to s[r][c].
struct StateMatrix {
  std::array<std::array<Byte, 4>, 4> s{};

  friend constexpr bool operator==(const StateMatrix&, const StateMatrix&) = default;
};

constexpr StateMatrix to_state(const Block128& b) {
  StateMatrix m;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t r = 0; r < 4; ++r) m.s[r][c] = b.bytes[4 * c + r];
  return m;
}

constexpr Block128 to_block(const StateMatrix& m) {
  Block128 b;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t r = 0; r < 4; ++r) b.bytes[4 * c + r] = m.s[r][c];
  return b;
}

/// The 11 round keys; keys[0] is the cipher key. The flat form places
/// keys[i] at bytes [16i, 16i+16), mirroring the core's 1408-bit input bus.
struct RoundKeySchedule {
  static constexpr std::size_t kRounds = 10;
  static constexpr std::size_t kKeys = kRounds + 1;
  static constexpr std::size_t kFlatBytes = kKeys * Block128::kBytes;

  std::array<Block128, kKeys> keys{};

  friend constexpr bool operator==(const RoundKeySchedule&, const RoundKeySchedule&) = default;

  std::array<Byte, kFlatBytes> flat() const {
    std::array<Byte, kFlatBytes> out{};
    for (std::size_t i = 0; i < kKeys; ++i)
      for (std::size_t j = 0; j < Block128::kBytes; ++j) out[16 * i + j] = keys[i].bytes[j];
    return out;
  }

  static RoundKeySchedule from_flat(std::span<const Byte, kFlatBytes> flat) {
    RoundKeySchedule rks;
    for (std::size_t i = 0; i < kKeys; ++i)
      rks.keys[i] = Block128::from_bytes(flat.subspan(16 * i).first<Block128::kBytes>());
    return rks;
  }

  /// 352 lowercase hex chars, keys[0] first.
  std::string to_hex() const {
    std::string out;
    out.reserve(2 * kFlatBytes);
    for (const auto& k : keys) out += k.to_hex();
    return out;
  }

  static RoundKeySchedule from_hex(std::string_view hex) {
    if (hex.size() != 2 * kFlatBytes) {
      throw ParseError("expected 352 hex characters, got " + std::to_string(hex.size()));
    }
    RoundKeySchedule rks;
    for (std::size_t i = 0; i < kKeys; ++i) rks.keys[i] = Block128::from_hex(hex.substr(32 * i, 32));
    return rks;
  }
};

namespace detail {

inline constexpr std::array<Byte, 256> kSbox = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

// Round constants for words w[4i], i = 1..10 (only the leading byte is nonzero).
inline constexpr std::array<Byte, 10> kRcon = {0x01, 0x02, 0x04, 0x08, 0x10,
                                               0x20, 0x40, 0x80, 0x1b, 0x36};

}  // namespace detail

constexpr Byte sub_byte(Byte b) { return detail::kSbox[b]; }

constexpr StateMatrix sub_bytes(StateMatrix m) {
  for (auto& row : m.s)
    for (auto& v : row) v = sub_byte(v);
  return m;
}

/// Row r rotates left by r: out[r][c] = in[r][(c + r) mod 4].
constexpr StateMatrix shift_rows(const StateMatrix& in) {
  StateMatrix out;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out.s[r][c] = in.s[r][(c + r) % 4];
  return out;
}

/// xtime: multiply by x modulo x^8 + x^4 + x^3 + x + 1.
constexpr Byte mul_by_2(Byte b) {
  const Byte shifted = static_cast<Byte>(b << 1);
  return (b & 0x80) ? static_cast<Byte>(shifted ^ 0x1b) : shifted;
}

constexpr Byte mul_by_3(Byte b) { return static_cast<Byte>(mul_by_2(b) ^ b); }

constexpr StateMatrix mix_columns(const StateMatrix& in) {
  StateMatrix out;
  for (std::size_t c = 0; c < 4; ++c) {
    const Byte s0 = in.s[0][c], s1 = in.s[1][c], s2 = in.s[2][c], s3 = in.s[3][c];
    out.s[0][c] = static_cast<Byte>(mul_by_2(s0) ^ mul_by_3(s1) ^ s2 ^ s3);
    out.s[1][c] = static_cast<Byte>(s0 ^ mul_by_2(s1) ^ mul_by_3(s2) ^ s3);
    out.s[2][c] = static_cast<Byte>(s0 ^ s1 ^ mul_by_2(s2) ^ mul_by_3(s3));
    out.s[3][c] = static_cast<Byte>(mul_by_3(s0) ^ s1 ^ s2 ^ mul_by_2(s3));
  }
  return out;
}

constexpr StateMatrix add_round_key(StateMatrix m, const Block128& rk) {
  const StateMatrix k = to_state(rk);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) m.s[r][c] ^= k.s[r][c];
  return m;
}

/// Rijndael key expansion for a 128-bit key (44 words, Nk = 4).
constexpr RoundKeySchedule expand_key(const Block128& key) {
  using Word = std::array<Byte, 4>;
  std::array<Word, 44> w{};
  for (std::size_t i = 0; i < 4; ++i)
    w[i] = {key.bytes[4 * i], key.bytes[4 * i + 1], key.bytes[4 * i + 2], key.bytes[4 * i + 3]};

  for (std::size_t i = 4; i < 44; ++i) {
    Word t = w[i - 1];
    if (i % 4 == 0) {
      t = {sub_byte(t[1]), sub_byte(t[2]), sub_byte(t[3]), sub_byte(t[0])};  // SubWord(RotWord)
      t[0] ^= detail::kRcon[i / 4 - 1];
    }
    for (std::size_t j = 0; j < 4; ++j) w[i][j] = static_cast<Byte>(w[i - 4][j] ^ t[j]);
  }

  RoundKeySchedule rks;
  for (std::size_t k = 0; k < RoundKeySchedule::kKeys; ++k)
    for (std::size_t j = 0; j < 16; ++j) rks.keys[k].bytes[j] = w[4 * k + j / 4][j % 4];
  return rks;
}

/// Straight-line AES-128 encryption composed from the primitives above.
/// Cycle-free; used as the built-in cross-check for the FSM path.
constexpr Block128 encrypt_reference(const RoundKeySchedule& rks, const Block128& plaintext) {
  StateMatrix st = add_round_key(to_state(plaintext), rks.keys[0]);
  for (std::size_t round = 1; round < RoundKeySchedule::kRounds; ++round)
    st = add_round_key(mix_columns(shift_rows(sub_bytes(st))), rks.keys[round]);
  st = add_round_key(shift_rows(sub_bytes(st)), rks.keys[RoundKeySchedule::kRounds]);
  return to_block(st);
}

constexpr Block128 encrypt_reference(const Block128& key, const Block128& plaintext) {
  return encrypt_reference(expand_key(key), plaintext);
}

/// Packet-validated synchronous SubBytes wrapper. Each clock edge with
/// input_valid set and packet_type == 2 latches input_data and raises
/// output_valid; any other input lowers output_valid and keeps the latch.
/// output_data always reflects the latch, which reset clears to zero.
class SubBytesPacket {
 public:
  static constexpr unsigned kSubBytesPacketType = 2;

  struct Output {
    bool output_valid = false;
    Block128 output_data{};
  };

  void reset() { out_ = Output{}; }

  Output clock(bool input_valid, unsigned packet_type, const Block128& input_data) {
    if (input_valid && packet_type == kSubBytesPacketType) {
      out_.output_data = input_data;
      out_.output_valid = true;
    } else {
      out_.output_valid = false;
    }
    return out_;
  }

  const Output& output() const { return out_; }

 private:
  Output out_{};
};

}  // namespace spime
