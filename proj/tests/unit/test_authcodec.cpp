#include <doctest.h>

#include <cmath>
#include <random>

#include "lsbauth/authcodec.hpp"
#include "lsbauth/errors.hpp"

using namespace lsbauth;

namespace {

Key random_key(std::mt19937_64& rng) {
  std::vector<std::uint8_t> k(32);
  for (auto& b : k) b = static_cast<std::uint8_t>(rng());
  return Key(k);
}

BitString random_bits(std::mt19937_64& rng, std::size_t n) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, rng() & 1U);
  return b;
}

const NumberFormat kFx = FixedFormat{7, 8};

}  // namespace

TEST_CASE("kdf is HMAC of the big-endian counter") {
  const Key root = Key::from_hex("0f0e0d0c0b0a09080706050403020100");
  CHECK(kdf(root, 5) == kdf(root, 5));
  CHECK(kdf(root, 0) != kdf(root, 1));
  CHECK(kdf(root, 258) == Key(hmac_sha256(std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 1, 2}, root)));
  CHECK(kdf(root, 7).bit_length() == 256);
  CHECK(kdf(KeyedMac(root), 9) == kdf(root, 9));
}

TEST_CASE("channel keys are distinct") {
  const Key master = Key::from_hex("00112233445566778899aabbccddeeff");
  const Key k0 = derive_channel_key(master, 0);
  const Key k1 = derive_channel_key(master, 1);
  const Key k2 = derive_channel_key(master, 2);
  CHECK(k0 != k1);
  CHECK(k1 != k2);
  CHECK(k0 != k2);
  CHECK(derive_channel_key(master, 1) == k1);
}

TEST_CASE("sensor and detector chains agree") {
  const Key root = Key::from_hex("a1b2c3d4");
  KeyChain a(root), b(root);
  for (int l = 0; l <= 1000; ++l) {
    const BitString msg = BitString::from_uint(static_cast<std::uint64_t>(l), 16);
    REQUIRE(a.mac().digest(msg.to_bytes()) == KeyedMac(kdf(root, static_cast<std::uint64_t>(l))).digest(msg.to_bytes()));
    REQUIRE(a.mac(2).digest(msg.to_bytes()) == b.mac(2).digest(msg.to_bytes()));
    a.advance();
    b.advance();
  }
  CHECK(a.counter() == 1001);
}

TEST_CASE("encode_measurement structure") {
  std::mt19937_64 rng(2);
  const Key k = random_key(rng);
  const BitString y = random_bits(rng, 16);
  CHECK(encode_measurement(y, k, 0, kFx).bits == y);
  for (int L = 1; L <= 8; ++L) {
    const auto c = encode_measurement(y, k, L, kFx);
    CHECK(c.bits.size() == 16);
    CHECK(c.message() == y.head(16 - static_cast<std::size_t>(L)));
    CHECK(c.digest() == hmac(c.message(), k).head(static_cast<std::size_t>(L)));
  }
  CHECK_THROWS_WITH_AS(encode_measurement(y, k, 9, kFx), "coding into non-fractional bits", ConfigError);
  CHECK_THROWS_AS(encode_measurement(y.head(15), k, 2, kFx), std::invalid_argument);
}

TEST_CASE("verify accepts every honest packet") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10000; ++t) {
    const Key k = random_key(rng);
    const int L = static_cast<int>(rng() % 9);
    const auto c = encode_measurement(random_bits(rng, 16), k, L, kFx);
    REQUIRE(verify(c, k));
  }
}

TEST_CASE("tampering passes with probability 2^-L") {
  std::mt19937_64 rng(4);
  const int L = 8;
  const int trials = 100000;
  int flipped_pass = 0, wrong_key_pass = 0;
  for (int t = 0; t < trials; ++t) {
    const Key k = random_key(rng);
    auto c = encode_measurement(random_bits(rng, 16), k, L, kFx);
    const Key other = random_key(rng);
    wrong_key_pass += verify(c, other);
    const auto i = static_cast<std::size_t>(rng() % (16 - L));
    c.bits.set(i, !c.bits[i]);
    flipped_pass += verify(c, k);
  }
  const double p = std::ldexp(1.0, -L);
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(flipped_pass / double(trials) - p) <= 3 * sigma);
  CHECK(std::abs(wrong_key_pass / double(trials) - p) <= 3 * sigma);
}

TEST_CASE("digest bits are uniform (chi-square, 256 cells)") {
  std::mt19937_64 rng(6);
  const int samples = 10000;
  std::vector<int> counts(256, 0);
  for (int t = 0; t < samples; ++t) {
    const auto c = encode_measurement(random_bits(rng, 16), random_key(rng), 8, kFx);
    ++counts[c.digest().to_uint()];
  }
  const double expected = samples / 256.0;
  double chi2 = 0.0;
  for (int n : counts) chi2 += (n - expected) * (n - expected) / expected;
  // Upper 1% point of chi-square with 255 degrees of freedom.
  CHECK(chi2 < 310.457);
}

TEST_CASE("attack success probability") {
  CHECK(attack_success_probability(4, 1, 1) == 0.0625);
  CHECK(attack_success_probability(4, 2, 1) == doctest::Approx(31.0 / 256.0).epsilon(1e-15));
  CHECK(attack_success_probability(0, 3, 7) == 1.0);
  CHECK(attack_success_probability(8, 2, 0) == 1.0);
  CHECK(attack_success_probability(4, 2, 3) == doctest::Approx(std::pow(31.0 / 256.0, 3)));
}

TEST_CASE("forging Monte Carlo matches the closed form") {
  const auto est = estimate_forgery(4, 2, 200000, 17);
  const double p = attack_success_probability(4, 2, 1);
  CHECK(std::abs(est.rate() - p) <= 3 * est.sigma(p));

  const auto est2 = estimate_forgery(2, 1, 50000, 18, 2);
  const double p2 = attack_success_probability(2, 1, 2);
  CHECK(std::abs(est2.rate() - p2) <= 3 * est2.sigma(p2));
}
