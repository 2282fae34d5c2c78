#include "lsbauth/vectors.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lsbauth/authcodec.hpp"
#include "lsbauth/numfmt.hpp"

namespace lsbauth {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

BitString ascii_bits(std::string_view text) {
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  return BitString::from_bytes(bytes);
}

Key repeated(std::uint8_t byte, std::size_t count) {
  return Key(std::vector<std::uint8_t>(count, byte));
}

BitString repeated_bits(std::uint8_t byte, std::size_t count) {
  return BitString::from_bytes(std::vector<std::uint8_t>(count, byte));
}

}  // namespace

std::string format_vector(const TestVector& v) {
  std::ostringstream os;
  os << v.key.to_hex() << ", " << v.message.to_string() << ", " << v.L << ", "
     << v.coded.to_string();
  return os.str();
}

TestVector parse_vector(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (fields.size() != 4) throw std::invalid_argument("vector line needs 4 fields");
  TestVector v;
  v.key = Key::from_hex(fields[0]);
  v.message = BitString::from_string(fields[1]);
  try {
    v.L = std::stoi(std::string(fields[2]));
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid L field");
  }
  if (v.L < 0 || v.L > 256) throw std::invalid_argument("L out of range");
  v.coded = BitString::from_string(fields[3]);
  return v;
}

TestVector make_vector(Key key, BitString message, int L) {
  const BitString digest = hmac(message, key).head(static_cast<std::size_t>(L));
  BitString coded = message + digest;
  return {std::move(key), std::move(message), L, std::move(coded)};
}

bool check_vector(const TestVector& v) {
  if (v.L < 0 || v.L > 256) return false;
  return make_vector(v.key, v.message, v.L).coded == v.coded;
}

std::vector<TestVector> rfc4231_vectors() {
  std::vector<std::uint8_t> k4(25);
  for (std::size_t i = 0; i < k4.size(); ++i) k4[i] = static_cast<std::uint8_t>(i + 1);
  const BitString tc6 = ascii_bits("Test Using Larger Than Block-Size Key - Hash Key First");
  const BitString tc7 = ascii_bits(
      "This is a test using a larger than block-size key and a larger than block-size data. "
      "The key needs to be hashed before being used by the HMAC algorithm.");
  return {
      make_vector(repeated(0x0b, 20), ascii_bits("Hi There"), 256),
      make_vector(Key(std::vector<std::uint8_t>{'J', 'e', 'f', 'e'}),
                  ascii_bits("what do ya want for nothing?"), 256),
      make_vector(repeated(0xaa, 20), repeated_bits(0xdd, 50), 256),
      make_vector(Key(k4), repeated_bits(0xcd, 50), 256),
      make_vector(repeated(0x0c, 20), ascii_bits("Test With Truncation"), 128),
      make_vector(repeated(0xaa, 131), tc6, 256),
      make_vector(repeated(0xaa, 131), tc7, 256),
  };
}

std::vector<TestVector> conformance_vectors() {
  auto out = rfc4231_vectors();

  std::vector<std::uint8_t> m(kKeyBytes);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i);
  const Key master(m);

  // Channel roots and chain keys: message is the 64-bit big-endian index.
  for (std::uint64_t ch = 0; ch < 3; ++ch) {
    out.push_back(make_vector(master, BitString::from_uint(ch, 64), 256));
  }
  const Key root = derive_channel_key(master, 0);
  for (std::uint64_t l : {0ULL, 1ULL, 2ULL, 1000ULL}) {
    out.push_back(make_vector(root, BitString::from_uint(l, 64), 256));
  }

  // Coded measurements under chain keys.
  const NumberFormat formats[] = {FixedFormat{7, 8}, FloatFormat{5, 10}};
  const double values[] = {0.0, 0.5, -1.5, 0.123456, 3.0};
  for (const auto& fmt : formats) {
    for (int L : {0, 4, 8}) {
      std::uint64_t l = 0;
      for (double x : values) {
        const Key k = kdf(root, l++);
        const BitString y = encode(quantize(x, fmt).level, fmt);
        const auto coded = encode_measurement(y, k, L, fmt);
        out.push_back({k, coded.message(), L, coded.bits});
      }
    }
  }
  return out;
}

std::vector<TestVector> read_vectors(std::istream& in) {
  std::vector<TestVector> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(parse_vector(t));
  }
  return out;
}

void write_vectors(std::ostream& out, const std::vector<TestVector>& vs) {
  out << "# key_hex, message_bits, L, coded_bits\n";
  for (const auto& v : vs) out << format_vector(v) << '\n';
}

}  // namespace lsbauth
