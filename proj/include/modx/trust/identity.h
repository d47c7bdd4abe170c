#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modx/core/crypto.h"
#include "modx/core/doc_value.h"
#include "modx/core/ids.h"
#include "modx/core/time.h"

namespace modx::trust {

using core::AgentId;
using core::Bytes;
using core::KeyPair;
using core::Millis;

/// Verifiable agent identity: Ed25519 public key plus a self-signature over
/// (agentId, publicKey).
struct AgentIdentity {
  AgentId agent_id;
  Bytes public_key;
  Millis registered_at = 0;
  Bytes key_proof;

  core::DocValue proof_doc() const;
  bool proof_verifies() const;
};

/// Directory of public keys consulted by the broker and registry when
/// verifying envelope and record signatures.
class KeyDirectory {
 public:
  virtual ~KeyDirectory() = default;
  /// Key active at `at` (key rotation keeps history); nullopt for unknown agents.
  virtual std::optional<Bytes> public_key(const AgentId& agent, Millis at) const = 0;
};

/// In-memory identity registry with key rotation. Each generate/rotate call
/// reports the new identity through the registration sink so the ledger can
/// record it as a high-value operation.
class IdentityRegistry : public KeyDirectory {
 public:
  using RegistrationSink = std::function<void(const AgentIdentity&, bool rotation)>;

  explicit IdentityRegistry(RegistrationSink sink = {}) : sink_(std::move(sink)) {}

  /// Fresh deterministic keypair derived from (seed, agentId). Throws
  /// DuplicateAgent when the id exists and rotation was not requested.
  AgentIdentity generate(const AgentId& agent, const Bytes& seed32, Millis now,
                         bool rotation = false);

  std::optional<Bytes> public_key(const AgentId& agent, Millis at) const override;
  const KeyPair* keys(const AgentId& agent) const;
  bool known(const AgentId& agent) const;
  std::vector<AgentId> agents() const;

 private:
  struct KeyEpoch {
    KeyPair keys;
    Millis from;
  };
  std::map<AgentId, std::vector<KeyEpoch>> history_;
  RegistrationSink sink_;
};

/// Deterministic per-agent key seed: SHA-256 over a fixed tag, the run seed
/// and the agent id.
Bytes derive_key_seed(std::uint64_t run_seed, const AgentId& agent);

}  // namespace modx::trust
