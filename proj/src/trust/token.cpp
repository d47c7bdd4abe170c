#include "modx/trust/token.h"

#include "modx/core/canonical.h"
#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::trust {

using core::base64url_decode;
using core::base64url_encode;

std::string make_security_token(const core::DocValue& payload, const core::Bytes& private_key) {
  std::string header = base64url_encode("{\"alg\":\"EdDSA\"}");
  std::string body = base64url_encode(core::canonicalize(payload));
  std::string signing_input = header + "." + body;
  core::Bytes sig = core::ed25519_sign(signing_input, private_key);
  std::string sig_str(sig.begin(), sig.end());
  return signing_input + "." + base64url_encode(sig_str);
}

std::optional<core::DocValue> verify_security_token(const std::string& token,
                                                    const core::Bytes& public_key) {
  std::size_t dot1 = token.find('.');
  std::size_t dot2 = token.rfind('.');
  if (dot1 == std::string::npos || dot2 == dot1) return std::nullopt;
  std::string signing_input = token.substr(0, dot2);
  try {
    std::string sig_str = base64url_decode(token.substr(dot2 + 1));
    core::Bytes sig(sig_str.begin(), sig_str.end());
    if (!core::ed25519_verify(signing_input, sig, public_key)) return std::nullopt;
    std::string header = base64url_decode(token.substr(0, dot1));
    if (header != "{\"alg\":\"EdDSA\"}") return std::nullopt;
    return core::parse_doc(base64url_decode(token.substr(dot1 + 1, dot2 - dot1 - 1)));
  } catch (const core::Error&) {
    return std::nullopt;
  }
}

}  // namespace modx::trust
