#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace modx::core {

using Bytes = std::vector<std::uint8_t>;

/// Idempotent libsodium initialization; every entry point that touches
/// keys or hashes calls this first.
void crypto_init();

Bytes sha256(const void* data, std::size_t size);
Bytes sha256(const Bytes& data);
Bytes sha256(const std::string& data);

struct KeyPair {
  Bytes public_key;   // 32 bytes
  Bytes private_key;  // 64 bytes (libsodium secret key layout)
};

/// Deterministic Ed25519 keypair from a 32-byte seed.
KeyPair keypair_from_seed(const Bytes& seed32);

Bytes ed25519_sign(const std::string& message, const Bytes& private_key);
bool ed25519_verify(const std::string& message, const Bytes& signature,
                    const Bytes& public_key);

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

std::string base64url_encode(const std::string& data);
std::string base64url_decode(const std::string& data);

}  // namespace modx::core
