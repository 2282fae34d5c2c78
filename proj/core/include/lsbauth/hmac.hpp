#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsbauth/bitstring.hpp"

namespace lsbauth {

inline constexpr std::size_t kDigestBytes = 32;
inline constexpr std::size_t kKeyBytes = 32;

using Digest = std::array<std::uint8_t, kDigestBytes>;

/// Secret key material. Chain keys are 256 bits; arbitrary byte lengths are
/// accepted so that standard HMAC test vectors can be replayed.
class Key {
 public:
  Key() = default;
  explicit Key(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
  explicit Key(const Digest& d) : bytes_(d.begin(), d.end()) {}

  static Key from_hex(std::string_view hex);
  std::string to_hex() const;

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::size_t bit_length() const noexcept { return 8 * bytes_.size(); }
  BitString bits() const { return BitString::from_bytes(bytes_); }

  friend bool operator==(const Key&, const Key&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

/// HMAC-SHA-256 with the key schedule (inner/outer pad states) computed once,
/// so repeated messages under one key cost two short hash finalizations.
class KeyedMac {
 public:
  explicit KeyedMac(const Key& key);
  ~KeyedMac();
  KeyedMac(KeyedMac&&) noexcept;
  KeyedMac& operator=(KeyedMac&&) noexcept;
  KeyedMac(const KeyedMac&) = delete;
  KeyedMac& operator=(const KeyedMac&) = delete;

  Digest digest(std::span<const std::uint8_t> message) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// One-shot HMAC-SHA-256 over bytes.
Digest hmac_sha256(std::span<const std::uint8_t> message, const Key& key);

/// HMAC over a bit string (packed MSB-first, final byte zero-padded on the
/// right). Returns the 256-bit digest.
BitString hmac(const BitString& message, const Key& key);

}  // namespace lsbauth
