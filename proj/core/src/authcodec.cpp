#include "lsbauth/authcodec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsbauth/errors.hpp"

namespace lsbauth {

namespace {

std::array<std::uint8_t, 8> u64be(std::uint64_t v) {
  std::array<std::uint8_t, 8> out{};
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
  return out;
}

void check_L(int L, const NumberFormat& fmt, std::size_t width) {
  if (L < 0) throw ConfigError("negative coded-bit count");
  if (L > fmt.m()) throw ConfigError("coding into non-fractional bits");
  if (width != static_cast<std::size_t>(fmt.width())) {
    throw std::invalid_argument("measurement width does not match format");
  }
}

}  // namespace

Key kdf(const Key& root, std::uint64_t counter) { return Key(hmac_sha256(u64be(counter), root)); }

Key kdf(const KeyedMac& root_mac, std::uint64_t counter) {
  return Key(root_mac.digest(u64be(counter)));
}

Key derive_channel_key(const Key& master, std::uint64_t channel) {
  return Key(hmac_sha256(u64be(channel), master));
}

BitString truncated_digest(const BitString& message, const KeyedMac& mac, int L) {
  if (L <= 0) return {};
  const auto d = mac.digest(message.to_bytes());
  return BitString::from_bytes(d).head(static_cast<std::size_t>(L));
}

CodedMeasurement encode_measurement(const BitString& y_bits, const KeyedMac& mac, int L,
                                    const NumberFormat& fmt) {
  check_L(L, fmt, y_bits.size());
  if (L == 0) return {y_bits, 0};
  BitString msg = y_bits.head(y_bits.size() - static_cast<std::size_t>(L));
  BitString out = msg + truncated_digest(msg, mac, L);
  return {std::move(out), L};
}

CodedMeasurement encode_measurement(const BitString& y_bits, const Key& key, int L,
                                    const NumberFormat& fmt) {
  return encode_measurement(y_bits, KeyedMac(key), L, fmt);
}

bool verify(const CodedMeasurement& coded, const KeyedMac& mac) {
  if (coded.L == 0) return true;
  return truncated_digest(coded.message(), mac, coded.L) == coded.digest();
}

bool verify(const CodedMeasurement& coded, const Key& key) { return verify(coded, KeyedMac(key)); }

KeyChain::KeyChain(Key root, std::uint64_t counter)
    : root_(std::move(root)), root_mac_(root_), counter_(counter) {}

const KeyedMac& KeyChain::mac(std::uint64_t offset) {
  while (cache_.size() <= offset) {
    cache_.emplace_back(kdf(root_mac_, counter_ + cache_.size()));
  }
  return cache_[offset];
}

void KeyChain::advance(std::uint64_t steps) {
  counter_ += steps;
  const auto drop = static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(steps, cache_.size()));
  cache_.erase(cache_.begin(), cache_.begin() + drop);
}

double attack_success_probability(int L, int r, std::uint64_t T) {
  if (L < 0 || r < 0) throw std::invalid_argument("L and r must be non-negative");
  if (T == 0) return 1.0;
  const double per_key = std::ldexp(1.0, -L);
  const double per_step = 1.0 - std::pow(1.0 - per_key, r);
  return std::pow(per_step, static_cast<double>(T));
}

bool verify_window(const CodedMeasurement& coded, KeyChain& chain, int r) {
  for (int tau = 0; tau < r; ++tau) {
    if (verify(coded, chain.mac(static_cast<std::uint64_t>(tau)))) return true;
  }
  return false;
}

double ForgeryEstimate::sigma(double p) const {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

ForgeryEstimate estimate_forgery(int L, int r, std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t T, const NumberFormat& fmt) {
  if (L < 0 || L > fmt.m()) throw ConfigError("coding into non-fractional bits");
  std::seed_seq seq{seed, std::uint64_t{0x666f726765}};
  std::mt19937_64 rng(seq);
  std::bernoulli_distribution coin(0.5);
  ForgeryEstimate est;
  const auto width = static_cast<std::size_t>(fmt.width());
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::vector<std::uint8_t> root(kKeyBytes);
    for (auto& b : root) b = static_cast<std::uint8_t>(rng() & 0xFF);
    KeyChain chain(Key(std::move(root)), rng() >> 16);
    bool ok = true;
    for (std::uint64_t step = 0; step < T && ok; ++step) {
      BitString bits(width);
      for (std::size_t i = 0; i < width; ++i) bits.set(i, coin(rng));
      ok = verify_window(CodedMeasurement{bits, L}, chain, r);
      chain.advance();
    }
    ++est.trials;
    if (ok) ++est.successes;
  }
  return est;
}

}  // namespace lsbauth
