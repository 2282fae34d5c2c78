#include <doctest.h>

#include <random>

#include "lsbauth/authcodec.hpp"

using namespace lsbauth;

namespace {

const NumberFormat kFmt = FloatFormat{5, 10};

// Honest two-channel sender producing a fresh coded vector per step.
struct Sender {
  std::vector<KeyChain> chains;
  std::mt19937_64 rng{99};
  int L;

  Sender(const std::vector<Key>& roots, int L_) : L(L_) {
    for (const auto& k : roots) chains.emplace_back(k);
  }
  std::vector<BitString> next() {
    std::vector<BitString> out;
    for (auto& c : chains) {
      BitString y(16);
      for (std::size_t i = 0; i < 16; ++i) y.set(i, rng() & 1U);
      out.push_back(encode_measurement(y, c.mac(), L, kFmt).bits);
      c.advance();
    }
    return out;
  }
};

std::vector<Key> roots() {
  const Key master = Key::from_hex("5eed");
  return {derive_channel_key(master, 0), derive_channel_key(master, 1)};
}

}  // namespace

TEST_CASE("honest sender without dropouts never alarms") {
  Sender s(roots(), 4);
  Detector d(roots(), 4, 2);
  for (int t = 0; t < 500; ++t) {
    REQUIRE_FALSE(d.step(s.next()));
    REQUIRE(d.counter(0) == s.chains[0].counter());
    REQUIRE(d.counter(1) == s.chains[1].counter());
  }
}

TEST_CASE("one held packet is tolerated with r >= 1") {
  Sender s(roots(), 4);
  Detector d(roots(), 4, 1);
  auto first = s.next();
  CHECK_FALSE(d.step(first));
  s.next();                      // lost
  CHECK_FALSE(d.step(first));    // held repeat
  CHECK_FALSE(d.step(s.next())); // verifies at τ = 1
  CHECK(d.counter(0) == s.chains[0].counter());
}

TEST_CASE("r held packets pass, the (r+1)-th raises the alarm") {
  for (int r = 1; r <= 3; ++r) {
    Sender s(roots(), 6);
    Detector d(roots(), 6, r);
    auto last = s.next();
    CHECK_FALSE(d.step(last));
    for (int k = 1; k <= r; ++k) {
      s.next();
      CHECK_FALSE(d.step(last));
    }
    s.next();
    CHECK(d.step(last));  // window exhausted
  }
}

TEST_CASE("resync after up to r drops keeps counters aligned") {
  const int r = 2;
  Sender s(roots(), 4);
  Detector d(roots(), 4, r);
  std::mt19937_64 rng(1);
  std::vector<BitString> last = s.next();
  d.step(last);
  int run = 0;
  for (int t = 1; t < 5000; ++t) {
    auto fresh = s.next();
    const bool drop = run < r && (rng() % 3 == 0);
    if (drop) {
      ++run;
    } else {
      run = 0;
      last = fresh;
    }
    REQUIRE_FALSE(d.step(last));
    if (!drop) REQUIRE(d.counter(0) == s.chains[0].counter());
  }
}

TEST_CASE("replayed packets alarm; the honest stream verifies again afterwards") {
  Sender s(roots(), 8);
  Detector d(roots(), 8, 2);
  std::vector<std::vector<BitString>> log;
  for (int t = 0; t < 20; ++t) {
    log.push_back(s.next());
    REQUIRE_FALSE(d.step(log.back()));
  }
  int alarms = 0;
  for (int t = 20; t < 40; ++t) {
    log.push_back(s.next());
    alarms += d.step(log[static_cast<std::size_t>(t - 10)]);
  }
  CHECK(alarms >= 19);  // a replayed vector passes only with probability ~2^-16
  for (int t = 40; t < 60; ++t) REQUIRE_FALSE(d.step(s.next()));
}

TEST_CASE("random digests are rejected at rate 1 - 2^-L per channel") {
  Sender s(roots(), 4);
  Detector d(roots(), 4, 2);
  std::mt19937_64 rng(8);
  int passes = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    auto v = s.next();
    for (auto& b : v) {
      for (std::size_t i = 12; i < 16; ++i) b.set(i, rng() & 1U);
    }
    passes += !d.step(v);
  }
  // Both channels must pass at τ = 0: probability about (1/16)² plus honest collisions.
  const double p = std::pow(1.0 / 16.0, 2);
  CHECK(std::abs(passes / double(trials) - p) <= 4 * std::sqrt(p * (1 - p) / trials) + 1e-3);
}

TEST_CASE("L = 0 detector is inert") {
  Detector d(roots(), 0, 2);
  std::vector<BitString> v{BitString(16), BitString(16)};
  for (int t = 0; t < 10; ++t) CHECK_FALSE(d.step(v));
}
