#include "modx/core/crypto.h"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

#include "modx/core/errors.h"

namespace modx::core {

void crypto_init() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

Bytes sha256(const void* data, std::size_t size) {
  crypto_init();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), static_cast<const unsigned char*>(data), size);
  return out;
}

Bytes sha256(const Bytes& data) { return sha256(data.data(), data.size()); }

Bytes sha256(const std::string& data) { return sha256(data.data(), data.size()); }

KeyPair keypair_from_seed(const Bytes& seed32) {
  crypto_init();
  if (seed32.size() != crypto_sign_SEEDBYTES) {
    throw std::invalid_argument("key seed must be 32 bytes");
  }
  KeyPair kp;
  kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  kp.private_key.resize(crypto_sign_SECRETKEYBYTES);
  crypto_sign_seed_keypair(kp.public_key.data(), kp.private_key.data(), seed32.data());
  return kp;
}

Bytes ed25519_sign(const std::string& message, const Bytes& private_key) {
  crypto_init();
  Bytes sig(crypto_sign_BYTES);
  unsigned long long len = 0;
  crypto_sign_detached(sig.data(), &len, reinterpret_cast<const unsigned char*>(message.data()),
                       message.size(), private_key.data());
  sig.resize(len);
  return sig;
}

bool ed25519_verify(const std::string& message, const Bytes& signature,
                    const Bytes& public_key) {
  crypto_init();
  if (signature.size() != crypto_sign_BYTES || public_key.size() != crypto_sign_PUBLICKEYBYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(),
                                     reinterpret_cast<const unsigned char*>(message.data()),
                                     message.size(), public_key.data()) == 0;
}

std::string to_hex(const Bytes& data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::ParseError, "hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::ParseError, "invalid hex digit in \"" + hex + "\"");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string base64url_encode(const std::string& data) {
  crypto_init();
  std::string out(sodium_base64_encoded_len(data.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING),
                  '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(data.data()),
                    data.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING);
  out.resize(out.find('\0') == std::string::npos ? out.size() : out.find('\0'));
  return out;
}

std::string base64url_decode(const std::string& data) {
  crypto_init();
  std::string out(data.size(), '\0');
  std::size_t len = 0;
  if (sodium_base642bin(reinterpret_cast<unsigned char*>(out.data()), out.size(), data.data(),
                        data.size(), nullptr, &len, nullptr,
                        sodium_base64_VARIANT_URLSAFE_NO_PADDING) != 0) {
    throw Error(ErrorCode::ParseError, "invalid base64url input");
  }
  out.resize(len);
  return out;
}

}  // namespace modx::core
