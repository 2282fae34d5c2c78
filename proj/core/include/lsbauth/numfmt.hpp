#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "lsbauth/bitstring.hpp"

namespace lsbauth {

/// Sign-magnitude fixed point: levels ±(i + d·2^-m), i < 2^q, d < 2^m.
struct FixedFormat {
  int q = 7;  // integer bits
  int m = 8;  // fraction bits
  friend bool operator==(const FixedFormat&, const FixedFormat&) = default;
};

/// Sign-exponent-mantissa floating point with levels ±2^(e-bias)·(1 + p·2^-m),
/// 0 <= e <= 2^q - 1, 0 <= p <= 2^m - 1 and bias = 2^q - 2. No zero, no
/// subnormals, no special values; this is not IEEE-754.
struct FloatFormat {
  int q = 5;   // exponent bits
  int m = 10;  // mantissa bits
  friend bool operator==(const FloatFormat&, const FloatFormat&) = default;
};

/// Either layout. Both encode as sign ∘ q bits ∘ m bits, and in both the
/// q+m magnitude bits read as an unsigned integer index the non-negative
/// levels in increasing order. QuantizedValue stores exactly that index.
class NumberFormat {
 public:
  NumberFormat(FixedFormat f);  // NOLINT(google-explicit-constructor)
  NumberFormat(FloatFormat f);  // NOLINT(google-explicit-constructor)

  /// Parses "fx:q7m8" / "fl:q5m10". Throws ConfigError.
  static NumberFormat parse(std::string_view descriptor);
  std::string descriptor() const;

  bool is_fixed() const noexcept { return std::holds_alternative<FixedFormat>(layout_); }
  bool is_float() const noexcept { return !is_fixed(); }
  int q() const noexcept;
  int m() const noexcept;
  int width() const noexcept { return 1 + q() + m(); }

  /// Float bias 2^q - 2; zero for fixed point.
  int bias() const noexcept;
  /// Smallest step: 2^-m (fixed) or 2^(-bias+1)·2^-m (float).
  double step() const noexcept;
  /// Float cycle spacing Δ = 2^m · step(). Equals 1 for fixed point.
  double cycle_spacing() const noexcept;

  std::uint64_t max_index() const noexcept;
  /// Non-negative level with the given magnitude index (exact in double).
  double level(std::uint64_t index) const;
  double max_level() const { return level(max_index()); }
  double min_level() const { return level(0); }

  friend bool operator==(const NumberFormat&, const NumberFormat&) = default;

 private:
  std::variant<FixedFormat, FloatFormat> layout_;
};

/// A member of the level set F, carried as sign + integer magnitude index.
struct QuantizedValue {
  bool negative = false;
  std::uint64_t index = 0;

  double value(const NumberFormat& fmt) const {
    const double v = fmt.level(index);
    return negative ? -v : v;
  }
  friend bool operator==(const QuantizedValue&, const QuantizedValue&) = default;
};

struct Quantization {
  QuantizedValue level;
  double value = 0.0;
  bool overflow = false;  // |x| exceeded max_level() and was saturated
};

/// Nearest level of F; ties round away from zero; out-of-range input
/// saturates with the overflow flag set. Throws std::domain_error on NaN/inf.
Quantization quantize(double x, const NumberFormat& fmt);

/// x - Q(x).
double quantization_error(double x, const NumberFormat& fmt);

/// Exact membership: the level equal to `v`, or std::domain_error("unrepresentable").
QuantizedValue represent(double v, const NumberFormat& fmt);

/// sign ∘ q bits ∘ m bits, each field big-endian.
BitString encode(const QuantizedValue& v, const NumberFormat& fmt);
/// Inverse of encode. Throws std::invalid_argument on a length mismatch.
QuantizedValue decode(const BitString& bits, const NumberFormat& fmt);

inline double decode_value(const BitString& bits, const NumberFormat& fmt) {
  return decode(bits, fmt).value(fmt);
}

}  // namespace lsbauth
