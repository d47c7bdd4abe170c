#include "modx/trust/reputation.h"

#include "modx/core/canonical.h"
#include "modx/core/errors.h"

namespace modx::trust {

using core::DocMap;
using core::DocValue;
using core::Error;
using core::ErrorCode;

ReputationScore ReputationBook::update(const AgentId& agent, Outcome outcome,
                                       const Evidence& evidence, Millis now) {
  if (identities_ && !identities_->known(agent)) {
    throw Error(ErrorCode::UnknownAgent, "no identity for \"" + agent.value + "\"");
  }
  bool evidenced = false;
  if (evidence.record && ledger_ && ledger_->has_record(*evidence.record)) evidenced = true;
  if (evidence.envelope_digest && ledger_ && ledger_->digest_known(*evidence.envelope_digest)) {
    evidenced = true;
  }
  if (!evidenced) {
    throw Error(ErrorCode::DanglingEvidence,
                "reputation evidence references nothing in the ledger");
  }

  ReputationScore& score = scores_[agent];
  score.agent_id = agent;
  if (outcome == Outcome::Success) {
    ++score.successes;
  } else {
    ++score.failures;
  }

  if (ledger_) {
    LedgerRecord rec;
    rec.type = RecordType::ReputationUpdate;
    DocMap body;
    body["agentId"] = DocValue(agent.value);
    body["outcome"] = DocValue(outcome == Outcome::Success ? "Success" : "Failure");
    body["successes"] = DocValue(static_cast<double>(score.successes));
    body["failures"] = DocValue(static_cast<double>(score.failures));
    body["score"] = DocValue(score.score());
    if (evidence.record) {
      body["evidenceRecord"] =
          DocValue(DocMap{{"height", DocValue(static_cast<double>(evidence.record->height))},
                          {"index", DocValue(static_cast<double>(evidence.record->index))}});
    }
    if (evidence.envelope_digest) {
      body["evidenceDigest"] = DocValue(core::to_hex(*evidence.envelope_digest));
    }
    rec.body = DocValue(std::move(body));
    rec.submitter = reporter_;
    rec.timestamp = now;
    if (signer_) rec.signature = signer_(reporter_, core::canonicalize(rec.unsigned_doc()));
    ledger_->append(std::move(rec));
  }
  return score;
}

ReputationScore ReputationBook::get(const AgentId& agent) const {
  auto it = scores_.find(agent);
  if (it != scores_.end()) return it->second;
  ReputationScore fresh;
  fresh.agent_id = agent;
  return fresh;
}

}  // namespace modx::trust
