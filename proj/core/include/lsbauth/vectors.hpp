#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lsbauth/bitstring.hpp"
#include "lsbauth/hmac.hpp"

namespace lsbauth {

/// One conformance record: coded = message ∘ first L bits of HMAC(message, key).
/// Text form: `key_hex, message_bits, L, coded_bits`.
struct TestVector {
  Key key;
  BitString message;
  int L = 0;
  BitString coded;
};

std::string format_vector(const TestVector& v);
/// Throws std::invalid_argument on malformed lines.
TestVector parse_vector(std::string_view line);

/// Builds a vector by computing `coded` from (key, message, L).
TestVector make_vector(Key key, BitString message, int L);

/// True iff `coded` equals the recomputed value.
bool check_vector(const TestVector& v);

/// HMAC-SHA-256 reference cases 1-7 from RFC 4231 (case 5 truncated to 128 bits).
std::vector<TestVector> rfc4231_vectors();

/// Full conformance set: RFC cases, key-derivation vectors and codec vectors
/// for both bundled formats. Deterministic.
std::vector<TestVector> conformance_vectors();

/// Reads vector lines; blank lines and '#' comments are skipped.
std::vector<TestVector> read_vectors(std::istream& in);
void write_vectors(std::ostream& out, const std::vector<TestVector>& vs);

}  // namespace lsbauth
