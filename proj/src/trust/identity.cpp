#include "modx/trust/identity.h"

#include "modx/core/canonical.h"
#include "modx/core/errors.h"

namespace modx::trust {

using core::canonicalize;
using core::DocMap;
using core::DocValue;
using core::Error;
using core::ErrorCode;

DocValue AgentIdentity::proof_doc() const {
  return DocValue(DocMap{{"agentId", DocValue(agent_id.value)},
                         {"publicKey", DocValue(core::to_hex(public_key))}});
}

bool AgentIdentity::proof_verifies() const {
  return core::ed25519_verify(canonicalize(proof_doc()), key_proof, public_key);
}

AgentIdentity IdentityRegistry::generate(const AgentId& agent, const Bytes& seed32, Millis now,
                                         bool rotation) {
  auto it = history_.find(agent);
  if (it != history_.end() && !rotation) {
    throw Error(ErrorCode::DuplicateAgent,
                "agent \"" + agent.value + "\" already has an identity (rotation not requested)");
  }
  if (it == history_.end() && rotation) {
    throw Error(ErrorCode::UnknownAgent, "cannot rotate unknown agent \"" + agent.value + "\"");
  }
  KeyPair keys = core::keypair_from_seed(seed32);
  AgentIdentity identity;
  identity.agent_id = agent;
  identity.public_key = keys.public_key;
  identity.registered_at = now;
  identity.key_proof = core::ed25519_sign(canonicalize(identity.proof_doc()), keys.private_key);
  history_[agent].push_back({std::move(keys), now});
  if (sink_) sink_(identity, rotation);
  return identity;
}

std::optional<Bytes> IdentityRegistry::public_key(const AgentId& agent, Millis at) const {
  auto it = history_.find(agent);
  if (it == history_.end()) return std::nullopt;
  const Bytes* found = nullptr;
  for (const KeyEpoch& epoch : it->second) {
    if (epoch.from <= at) found = &epoch.keys.public_key;
  }
  // Timestamps before the first epoch fall back to the first key.
  if (!found) found = &it->second.front().keys.public_key;
  return *found;
}

const KeyPair* IdentityRegistry::keys(const AgentId& agent) const {
  auto it = history_.find(agent);
  return it == history_.end() ? nullptr : &it->second.back().keys;
}

bool IdentityRegistry::known(const AgentId& agent) const { return history_.count(agent) > 0; }

std::vector<AgentId> IdentityRegistry::agents() const {
  std::vector<AgentId> out;
  for (const auto& [id, _] : history_) out.push_back(id);
  return out;
}

Bytes derive_key_seed(std::uint64_t run_seed, const AgentId& agent) {
  std::string material = "modx-key/" + std::to_string(run_seed) + "/" + agent.value;
  return core::sha256(material);
}

}  // namespace modx::trust
