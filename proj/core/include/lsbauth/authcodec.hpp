#pragma once

#include <cstdint>
#include <vector>
#include <random>
#include <vector>

#include "lsbauth/bitstring.hpp"
#include "lsbauth/hmac.hpp"
#include "lsbauth/numfmt.hpp"

namespace lsbauth {

/// Chain key at iteration `counter`: HMAC(u64be(counter), root).
Key kdf(const Key& root, std::uint64_t counter);
Key kdf(const KeyedMac& root_mac, std::uint64_t counter);

/// Per-channel root key: HMAC(u64be(channel), master).
Key derive_channel_key(const Key& master, std::uint64_t channel);

/// N-bit packet: (N - L) message bits followed by L digest bits.
struct CodedMeasurement {
  BitString bits;
  int L = 0;

  BitString message() const { return bits.head(bits.size() - static_cast<std::size_t>(L)); }
  BitString digest() const { return bits.tail(static_cast<std::size_t>(L)); }
  friend bool operator==(const CodedMeasurement&, const CodedMeasurement&) = default;
};

/// First `L` bits of HMAC(message, key), for a prepared MAC.
BitString truncated_digest(const BitString& message, const KeyedMac& mac, int L);

/// Replaces the last L bits of `y_bits` with the truncated digest of the
/// remaining prefix. Throws ConfigError("coding into non-fractional bits")
/// when L exceeds the format's fraction/mantissa width.
CodedMeasurement encode_measurement(const BitString& y_bits, const Key& key, int L,
                                    const NumberFormat& fmt);
CodedMeasurement encode_measurement(const BitString& y_bits, const KeyedMac& mac, int L,
                                    const NumberFormat& fmt);

bool verify(const CodedMeasurement& coded, const Key& key);
bool verify(const CodedMeasurement& coded, const KeyedMac& mac);

/// Root key plus a lazily filled window of prepared MACs for k(ℓ), k(ℓ+1), ...
class KeyChain {
 public:
  explicit KeyChain(Key root, std::uint64_t counter = 0);

  std::uint64_t counter() const noexcept { return counter_; }
  const Key& root() const noexcept { return root_; }

  /// MAC for key index counter() + offset.
  const KeyedMac& mac(std::uint64_t offset = 0);
  void advance(std::uint64_t steps = 1);

 private:
  Key root_;
  KeyedMac root_mac_;
  std::uint64_t counter_;
  std::vector<KeyedMac> cache_;  // cache_[j] is key index counter_ + j
};

/// (1 - (1 - 2^-L)^r)^T. T = 0 gives 1 (empty conjunction).
double attack_success_probability(int L, int r, std::uint64_t T);

/// True iff `coded` verifies under any of the keys counter..counter+r-1.
bool verify_window(const CodedMeasurement& coded, KeyChain& chain, int r);

struct ForgeryEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
  /// Binomial standard deviation of rate() under success probability p.
  double sigma(double p) const;
};

/// Forging experiment. Each trial draws a fresh root key and counter, then
/// for T consecutive steps sends an N-bit packet with uniformly random bits
/// and checks it against r consecutive chain keys; the trial succeeds when
/// every step verifies.
ForgeryEstimate estimate_forgery(int L, int r, std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t T = 1, const NumberFormat& fmt = FixedFormat{7, 8});

/// Per-channel detector with a look-ahead window.
///
/// Every step receives the delivered packet vector. A vector identical to the
/// previously delivered one is a held packet: it is not verified, but
/// extends the run of missing fresh packets and raises the alarm once that
/// run exceeds r. A fresh packet is checked against key indices ℓ + τ for
/// τ = min(r, u) down to 0, where u counts held steps not yet accounted for;
/// a match commits ℓ ← ℓ + τ + 1. A failed packet raises the alarm and is consumed
/// (ℓ ← ℓ + 1) so an honest sender that was not interrupted stays aligned.
class Detector {
 public:
  Detector(std::vector<Key> roots, int L, int r);

  /// Returns g(t): true if any channel failed.
  bool step(const std::vector<BitString>& delivered);

  int window() const noexcept { return r_; }
  std::size_t channels() const noexcept { return chains_.size(); }
  std::uint64_t counter(std::size_t channel) const { return chains_.at(channel).counter(); }
  std::uint64_t pending_gap(std::size_t channel) const { return gap_.at(channel); }
  bool last_alarm() const noexcept { return last_alarm_; }

 private:
  int L_;
  int r_;
  std::vector<KeyChain> chains_;
  std::vector<std::uint64_t> gap_;
  std::vector<BitString> last_;
  std::uint64_t held_run_ = 0;
  bool have_last_ = false;
  bool last_alarm_ = false;
};

}  // namespace lsbauth
