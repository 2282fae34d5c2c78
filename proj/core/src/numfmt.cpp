#include "lsbauth/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "lsbauth/errors.hpp"

namespace lsbauth {

namespace {

void validate(const FixedFormat& f) {
  // index * 2^-m must stay exact in a double.
  if (f.q < 1 || f.m < 1 || f.q + f.m > 52) {
    throw ConfigError("fixed-point format needs q >= 1, m >= 1, q + m <= 52");
  }
}

void validate(const FloatFormat& f) {
  if (f.q < 1 || f.q > 10 || f.m < 1 || f.m > 52) {
    throw ConfigError("floating-point format needs 1 <= q <= 10, 1 <= m <= 52");
  }
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad integer in format descriptor: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

NumberFormat::NumberFormat(FixedFormat f) : layout_(f) { validate(f); }
NumberFormat::NumberFormat(FloatFormat f) : layout_(f) { validate(f); }

NumberFormat NumberFormat::parse(std::string_view d) {
  const auto bad = [&] {
    return ConfigError("format descriptor must look like fx:q7m8 or fl:q5m10, got '" +
                       std::string(d) + "'");
  };
  if (d.size() < 7 || d[2] != ':' || d[3] != 'q') throw bad();
  const auto kind = d.substr(0, 2);
  const auto mpos = d.find('m', 4);
  if (mpos == std::string_view::npos) throw bad();
  const int q = parse_int(d.substr(4, mpos - 4));
  const int m = parse_int(d.substr(mpos + 1));
  if (kind == "fx") return NumberFormat(FixedFormat{q, m});
  if (kind == "fl") return NumberFormat(FloatFormat{q, m});
  throw bad();
}

std::string NumberFormat::descriptor() const {
  return std::string(is_fixed() ? "fx" : "fl") + ":q" + std::to_string(q()) + "m" +
         std::to_string(m());
}

int NumberFormat::q() const noexcept {
  return std::visit([](const auto& f) { return f.q; }, layout_);
}

int NumberFormat::m() const noexcept {
  return std::visit([](const auto& f) { return f.m; }, layout_);
}

int NumberFormat::bias() const noexcept { return is_fixed() ? 0 : (1 << q()) - 2; }

double NumberFormat::step() const noexcept {
  return is_fixed() ? std::ldexp(1.0, -m()) : std::ldexp(1.0, -bias() + 1 - m());
}

double NumberFormat::cycle_spacing() const noexcept {
  return is_fixed() ? 1.0 : std::ldexp(step(), m());
}

std::uint64_t NumberFormat::max_index() const noexcept {
  return (std::uint64_t{1} << (q() + m())) - 1;
}

double NumberFormat::level(std::uint64_t index) const {
  if (index > max_index()) throw std::out_of_range("level index outside format");
  if (is_fixed()) return std::ldexp(static_cast<double>(index), -m());
  const auto e = static_cast<int>(index >> m());
  const std::uint64_t p = index & ((std::uint64_t{1} << m()) - 1);
  const auto significand = static_cast<double>((std::uint64_t{1} << m()) + p);
  return std::ldexp(significand, e - bias() - m());
}

Quantization quantize(double x, const NumberFormat& fmt) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite input");
  const double mag = std::fabs(x);
  Quantization out;
  out.level.negative = std::signbit(x) && x != 0.0;

  if (mag >= fmt.max_level()) {
    out.level.index = fmt.max_index();
    out.overflow = mag > fmt.max_level();
  } else if (fmt.is_fixed()) {
    // |x|·2^m is exact; std::round breaks ties away from zero.
    out.level.index = static_cast<std::uint64_t>(std::round(std::ldexp(mag, fmt.m())));
  } else if (mag <= fmt.min_level()) {
    // F_FL has no zero: everything below the smallest level maps onto it.
    out.level.index = 0;
  } else {
    int exp2 = 0;
    const double frac = std::frexp(mag, &exp2);  // mag = frac·2^exp2, frac in [0.5, 1)
    const int e = exp2 - 1 + fmt.bias();
    const double scaled = std::ldexp(frac, fmt.m() + 1);  // in [2^m, 2^(m+1))
    const auto significand = static_cast<std::uint64_t>(std::round(scaled));
    // A carry out of the mantissa lands on the next binade's first level.
    out.level.index = (static_cast<std::uint64_t>(e) << fmt.m()) + significand -
                      (std::uint64_t{1} << fmt.m());
  }

  if (fmt.is_fixed() && out.level.index == 0) out.level.negative = false;
  out.value = out.level.value(fmt);
  return out;
}

double quantization_error(double x, const NumberFormat& fmt) {
  return x - quantize(x, fmt).value;
}

QuantizedValue represent(double v, const NumberFormat& fmt) {
  if (!std::isfinite(v)) throw std::domain_error("unrepresentable");
  const auto q = quantize(v, fmt);
  if (q.overflow || q.value != v) throw std::domain_error("unrepresentable");
  return q.level;
}

BitString encode(const QuantizedValue& v, const NumberFormat& fmt) {
  if (v.index > fmt.max_index()) throw std::domain_error("unrepresentable");
  return BitString::from_uint(v.negative ? 1 : 0, 1) +
         BitString::from_uint(v.index, static_cast<std::size_t>(fmt.q() + fmt.m()));
}

QuantizedValue decode(const BitString& bits, const NumberFormat& fmt) {
  if (bits.size() != static_cast<std::size_t>(fmt.width())) {
    throw std::invalid_argument("bit string length " + std::to_string(bits.size()) +
                                " does not match format width " +
                                std::to_string(fmt.width()));
  }
  return QuantizedValue{bits[0], bits.tail(bits.size() - 1).to_uint()};
}

}  // namespace lsbauth
