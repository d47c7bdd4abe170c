#pragma once

#include <optional>
#include <string>

#include "modx/core/crypto.h"
#include "modx/core/doc_value.h"

namespace modx::trust {

/// Compact JWS-style security token with an EdDSA header:
/// base64url({"alg":"EdDSA"}).base64url(canonical payload).base64url(signature).
/// The header segment always starts "eyJhbGciOiJFZER...".
std::string make_security_token(const core::DocValue& payload, const core::Bytes& private_key);

/// Returns the payload when the signature verifies, nullopt otherwise.
std::optional<core::DocValue> verify_security_token(const std::string& token,
                                                    const core::Bytes& public_key);

}  // namespace modx::trust
