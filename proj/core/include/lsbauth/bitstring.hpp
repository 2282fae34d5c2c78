#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lsbauth {

// Ordered sequence of bits. Index 0 is the leftmost (most significant) bit,
// so the rightmost bits are the LSBs of a big-endian representation.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length, bool fill = false);

  // Parses ASCII '0'/'1'; throws std::invalid_argument on other characters.
  static BitString from_string(std::string_view text);
  // Big-endian rendering of the low `width` bits of `value` (width <= 64).
  static BitString from_uint(std::uint64_t value, std::size_t width);
  // Eight bits per byte, most significant bit first.
  static BitString from_bytes(std::span<const std::uint8_t> bytes);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value);

  // First / last `count` bits; throws std::out_of_range if count > size().
  BitString head(std::size_t count) const;
  BitString tail(std::size_t count) const;
  // `count` bits starting at 0-based offset `first`.
  BitString slice(std::size_t first, std::size_t count) const;

  BitString& operator+=(const BitString& rhs);
  friend BitString operator+(BitString lhs, const BitString& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend bool operator==(const BitString&, const BitString&) = default;

  // Interprets the string as an unsigned big-endian integer (size() <= 64).
  std::uint64_t to_uint() const;
  std::string to_string() const;
  // MSB-first packing; a partial final byte is padded with zero bits on the right.
  std::vector<std::uint8_t> to_bytes() const;

  std::size_t hamming_distance(const BitString& other) const;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace lsbauth
