#pragma once

#include <cstdint>
#include <map>

#include "modx/trust/ledger.h"

namespace modx::trust {

enum class Outcome { Success, Failure };

/// Laplace-smoothed success ratio: (successes + 1) / (successes + failures + 2).
/// Always in (0, 1); strictly rises on success and falls on failure.
struct ReputationScore {
  AgentId agent_id;
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;

  double score() const {
    return (static_cast<double>(successes) + 1.0) /
           (static_cast<double>(successes) + static_cast<double>(failures) + 2.0);
  }
};

/// Evidence pointing at a ledger record or an anchored/pending envelope digest.
struct Evidence {
  std::optional<RecordRef> record;
  std::optional<Bytes> envelope_digest;
};

/// Per-agent trust counters; every update is ledgered as a high-value
/// ReputationUpdate record. The reporter (the orchestrator in this stack)
/// signs those records through the ledger's signer.
class ReputationBook {
 public:
  ReputationBook(Ledger* ledger, const IdentityRegistry* identities, AgentId reporter,
                 Ledger::Signer signer)
      : ledger_(ledger),
        identities_(identities),
        reporter_(std::move(reporter)),
        signer_(std::move(signer)) {}

  /// Throws UnknownAgent for unregistered agents and DanglingEvidence when
  /// the evidence matches neither a ledger record nor an observed digest.
  ReputationScore update(const AgentId& agent, Outcome outcome, const Evidence& evidence,
                         Millis now);

  ReputationScore get(const AgentId& agent) const;
  const std::map<AgentId, ReputationScore>& all() const { return scores_; }

 private:
  Ledger* ledger_;
  const IdentityRegistry* identities_;
  AgentId reporter_;
  Ledger::Signer signer_;
  std::map<AgentId, ReputationScore> scores_;
};

}  // namespace modx::trust
