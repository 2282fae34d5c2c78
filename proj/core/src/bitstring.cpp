#include "lsbauth/bitstring.hpp"

#include <stdexcept>

namespace lsbauth {

BitString::BitString(std::size_t length, bool fill) : bits_(length, fill ? 1 : 0) {}

BitString BitString::from_string(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  if (width > 64) throw std::invalid_argument("bit width exceeds 64");
  BitString out(width);
  for (std::size_t i = 0; i < width; ++i) {
    out.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
  }
  return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes) {
  BitString out(bytes.size() * 8);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    for (std::size_t b = 0; b < 8; ++b) {
      out.bits_[8 * i + b] = static_cast<std::uint8_t>((bytes[i] >> (7 - b)) & 1U);
    }
  }
  return out;
}

bool BitString::at(std::size_t i) const {
  if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
  return bits_[i] != 0;
}

void BitString::set(std::size_t i, bool value) {
  if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
  bits_[i] = value ? 1 : 0;
}

BitString BitString::head(std::size_t count) const { return slice(0, count); }

BitString BitString::tail(std::size_t count) const {
  if (count > bits_.size()) throw std::out_of_range("tail longer than bit string");
  return slice(bits_.size() - count, count);
}

BitString BitString::slice(std::size_t first, std::size_t count) const {
  if (first > bits_.size() || count > bits_.size() - first) {
    throw std::out_of_range("slice outside bit string");
  }
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(first),
                   bits_.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

BitString& BitString::operator+=(const BitString& rhs) {
  bits_.insert(bits_.end(), rhs.bits_.begin(), rhs.bits_.end());
  return *this;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw std::length_error("bit string wider than 64 bits");
  std::uint64_t v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
  return out;
}

std::size_t BitString::hamming_distance(const BitString& other) const {
  if (other.size() != size()) throw std::invalid_argument("length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) d += (bits_[i] != other.bits_[i]);
  return d;
}

}  // namespace lsbauth
