#include "toolgym/canonical.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "toolgym/errors.hpp"

namespace toolgym {

std::string CacheKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xF];
  }
  return out;
}

std::size_t CacheKeyHash::operator()(const CacheKey& k) const noexcept {
  std::size_t h;
  std::memcpy(&h, k.bytes.data(), sizeof(h));
  return h;
}

std::string canonical_call_string(const ToolCall& call) {
  std::string out = call.function;
  out += '\0';
  out += canonical_string(call.args);
  return out;
}

CacheKey canonical_key(const ToolCall& call) {
  const std::string text = canonical_call_string(call);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  CacheKey key;
  std::memcpy(key.bytes.data(), digest, key.bytes.size());
  return key;
}

}  // namespace toolgym
