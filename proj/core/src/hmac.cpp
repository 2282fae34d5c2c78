#include "lsbauth/hmac.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace lsbauth {

namespace {

constexpr std::size_t kBlockBytes = 64;

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

MdCtx new_ctx() {
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  return ctx;
}

// Explicit fetch once; the implicit fetch inside EVP_DigestInit_ex is costly.
const EVP_MD* sha256() {
  static EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
  if (md == nullptr) throw std::runtime_error("SHA-256 unavailable");
  return md;
}

void check(int rc, const char* what) {
  if (rc != 1) throw std::runtime_error(std::string("OpenSSL: ") + what + " failed");
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * bytes.size());
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string of odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_nibble(hex[2 * i]);
    const int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Key Key::from_hex(std::string_view hex) { return Key(lsbauth::from_hex(hex)); }
std::string Key::to_hex() const { return lsbauth::to_hex(bytes_); }

// RFC 2104 construction on top of OpenSSL's SHA-256 digest contexts.
struct KeyedMac::State {
  MdCtx inner = new_ctx();  // after absorbing key ^ ipad
  MdCtx outer = new_ctx();  // after absorbing key ^ opad
  MdCtx scratch = new_ctx();
};

KeyedMac::KeyedMac(const Key& key) : state_(std::make_unique<State>()) {
  const EVP_MD* md = sha256();
  std::array<std::uint8_t, kBlockBytes> block{};
  auto k = key.bytes();
  if (k.size() > kBlockBytes) {
    unsigned int len = 0;
    check(EVP_Digest(k.data(), k.size(), block.data(), &len, md, nullptr), "EVP_Digest");
  } else {
    std::copy(k.begin(), k.end(), block.begin());
  }

  std::array<std::uint8_t, kBlockBytes> pad{};
  for (std::size_t i = 0; i < kBlockBytes; ++i) pad[i] = block[i] ^ 0x36;
  check(EVP_DigestInit_ex(state_->inner.get(), md, nullptr), "DigestInit");
  check(EVP_DigestUpdate(state_->inner.get(), pad.data(), pad.size()), "DigestUpdate");
  for (std::size_t i = 0; i < kBlockBytes; ++i) pad[i] = block[i] ^ 0x5c;
  check(EVP_DigestInit_ex(state_->outer.get(), md, nullptr), "DigestInit");
  check(EVP_DigestUpdate(state_->outer.get(), pad.data(), pad.size()), "DigestUpdate");
}

KeyedMac::~KeyedMac() = default;
KeyedMac::KeyedMac(KeyedMac&&) noexcept = default;
KeyedMac& KeyedMac::operator=(KeyedMac&&) noexcept = default;

Digest KeyedMac::digest(std::span<const std::uint8_t> message) const {
  Digest inner_hash{};
  Digest out{};
  unsigned int len = 0;
  EVP_MD_CTX* s = state_->scratch.get();
  check(EVP_MD_CTX_copy_ex(s, state_->inner.get()), "MD_CTX_copy");
  check(EVP_DigestUpdate(s, message.data(), message.size()), "DigestUpdate");
  check(EVP_DigestFinal_ex(s, inner_hash.data(), &len), "DigestFinal");
  check(EVP_MD_CTX_copy_ex(s, state_->outer.get()), "MD_CTX_copy");
  check(EVP_DigestUpdate(s, inner_hash.data(), inner_hash.size()), "DigestUpdate");
  check(EVP_DigestFinal_ex(s, out.data(), &len), "DigestFinal");
  return out;
}

Digest hmac_sha256(std::span<const std::uint8_t> message, const Key& key) {
  return KeyedMac(key).digest(message);
}

BitString hmac(const BitString& message, const Key& key) {
  const auto bytes = message.to_bytes();
  const auto d = hmac_sha256(bytes, key);
  return BitString::from_bytes(d);
}

}  // namespace lsbauth
