#include <doctest.h>

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <random>
#include <string>

#include "lsbauth/hmac.hpp"

using namespace lsbauth;

namespace {

std::vector<std::uint8_t> ascii(const std::string& s) { return {s.begin(), s.end()}; }

std::string hmac_hex(const Key& k, const std::vector<std::uint8_t>& msg) {
  const auto d = hmac_sha256(msg, k);
  return to_hex(d);
}

// OpenSSL's own one-shot HMAC, independent of the midstate caching.
Digest reference_hmac(const std::vector<std::uint8_t>& key, const std::vector<std::uint8_t>& msg) {
  Digest out{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len);
  return out;
}

}  // namespace

TEST_CASE("RFC 4231 test cases") {
  CHECK(hmac_hex(Key(std::vector<std::uint8_t>(20, 0x0b)), ascii("Hi There")) ==
        "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
  CHECK(hmac_hex(Key(ascii("Jefe")), ascii("what do ya want for nothing?")) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  CHECK(hmac_hex(Key(std::vector<std::uint8_t>(20, 0xaa)), std::vector<std::uint8_t>(50, 0xdd)) ==
        "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe");
  std::vector<std::uint8_t> k4(25);
  for (int i = 0; i < 25; ++i) k4[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i + 1);
  CHECK(hmac_hex(Key(k4), std::vector<std::uint8_t>(50, 0xcd)) ==
        "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b");
  CHECK(hmac_hex(Key(std::vector<std::uint8_t>(20, 0x0c)), ascii("Test With Truncation")).substr(0, 32) ==
        "a3b6167473100ee06e0c796c2955552b");
  const Key big(std::vector<std::uint8_t>(131, 0xaa));
  CHECK(hmac_hex(big, ascii("Test Using Larger Than Block-Size Key - Hash Key First")) ==
        "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
  CHECK(hmac_hex(big, ascii("This is a test using a larger than block-size key and a larger than "
                            "block-size data. The key needs to be hashed before being used by the "
                            "HMAC algorithm.")) ==
        "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2");
}

TEST_CASE("prepared MAC agrees with OpenSSL one-shot HMAC") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint8_t> key(rng() % 150), msg(rng() % 300);
    for (auto& b : key) b = static_cast<std::uint8_t>(rng());
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    const KeyedMac mac{Key(key)};
    REQUIRE(mac.digest(msg) == reference_hmac(key, msg));
    REQUIRE(mac.digest(msg) == mac.digest(msg));
  }
}

TEST_CASE("bit-string HMAC packs MSB first with zero padding") {
  const Key k = Key::from_hex("000102030405060708090a0b0c0d0e0f");
  const BitString bits = BitString::from_string("101");
  const std::vector<std::uint8_t> packed{0xa0};
  CHECK(hmac(bits, k) == BitString::from_bytes(hmac_sha256(packed, k)));
  CHECK(hmac(bits, k).size() == 256);
}

TEST_CASE("hex helpers") {
  CHECK(Key::from_hex("00ff10").to_hex() == "00ff10");
  CHECK(Key::from_hex("ABcd").to_hex() == "abcd");
  CHECK_THROWS_AS(Key::from_hex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Key::from_hex("zz"), std::invalid_argument);
}

TEST_CASE("avalanche: one flipped message bit changes about half the digest") {
  std::mt19937_64 rng(5);
  const int trials = 10000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::uint8_t> key(32), msg(16);
    for (auto& b : key) b = static_cast<std::uint8_t>(rng());
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    const Key k(key);
    const BitString m = BitString::from_bytes(msg);
    BitString flipped = m;
    const auto i = static_cast<std::size_t>(rng() % m.size());
    flipped.set(i, !m[i]);
    sum += static_cast<double>(hmac(m, k).hamming_distance(hmac(flipped, k)));
  }
  const double mean = sum / trials;
  // Binomial(256, 1/2): σ = 8 per trial, so the mean has σ = 8 / sqrt(trials).
  CHECK(std::abs(mean - 128.0) <= 3.0 * 8.0 / std::sqrt(static_cast<double>(trials)));
}
