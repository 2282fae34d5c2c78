#include <doctest.h>

#include <sstream>

#include "lsbauth/hmac.hpp"
#include "lsbauth/vectors.hpp"

using namespace lsbauth;

TEST_CASE("line format round trip") {
  const TestVector v = make_vector(Key::from_hex("0102"), BitString::from_string("1011"), 5);
  const std::string line = format_vector(v);
  CHECK(line.rfind("0102, 1011, 5, 1011", 0) == 0);
  const TestVector w = parse_vector(line);
  CHECK(w.key == v.key);
  CHECK(w.message == v.message);
  CHECK(w.L == 5);
  CHECK(w.coded == v.coded);
  CHECK(check_vector(w));
}

TEST_CASE("malformed lines are rejected") {
  CHECK_THROWS_AS(parse_vector("00, 0101, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_vector("0g, 0101, 2, 010111"), std::invalid_argument);
  CHECK_THROWS_AS(parse_vector("00, 0121, 2, 010111"), std::invalid_argument);
  CHECK_THROWS_AS(parse_vector("00, 0101, x, 010111"), std::invalid_argument);
}

TEST_CASE("RFC cases carry the published digests") {
  const auto vs = rfc4231_vectors();
  REQUIRE(vs.size() == 7);
  const char* expected[] = {
      "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7",
      "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843",
      "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe",
      "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b",
      "a3b6167473100ee06e0c796c2955552b",
      "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54",
      "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2",
  };
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto digest = vs[i].coded.tail(static_cast<std::size_t>(vs[i].L)).to_bytes();
    CHECK(to_hex(digest) == expected[i]);
  }
}

TEST_CASE("conformance set verifies, is deterministic and detects tampering") {
  const auto vs = conformance_vectors();
  CHECK(vs.size() > 7);
  for (const auto& v : vs) REQUIRE(check_vector(v));

  std::ostringstream a, b;
  write_vectors(a, vs);
  write_vectors(b, conformance_vectors());
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const auto back = read_vectors(in);
  REQUIRE(back.size() == vs.size());
  for (const auto& v : back) REQUIRE(check_vector(v));

  TestVector bad = vs.back();
  bad.coded.set(0, !bad.coded[0]);
  CHECK_FALSE(check_vector(bad));
}
