#pragma once

#include <stdexcept>
#include <string>

namespace modx::core {

enum class ErrorCode {
  // document / canonical form
  NonFiniteNumber,
  ParseError,
  // identities, topics, envelopes
  InvalidAgentId,
  InvalidTopic,
  InvalidPattern,
  InvalidSignature,
  UnknownSender,
  UnknownAgent,
  // broker
  QueueOverflow,
  UnknownSubscription,
  NoSubscriber,
  Timeout,
  InvalidCursor,
  // registry
  DimensionMismatch,
  StaleVersion,
  EmbeddingFailure,
  MalformedQuery,
  // translation
  ZeroVector,
  RankDeficient,
  EmptyText,
  MissingLookupKey,
  PathConflict,
  // shared context
  ConsentMissing,
  ContextClosed,
  NotParticipant,
  TypeNotShareable,
  KeyAbsent,
  NotRevocable,
  // workflows
  CycleDetected,
  DanglingPlaceholder,
  OrphanEdge,
  NoCapableAgent,
  BudgetExceeded,
  CompensationFailed,
  // trust
  DuplicateAgent,
  MalformedRecord,
  EmptyBatch,
  DanglingEvidence,
};

const char* error_name(ErrorCode code);

/// Domain error carrying a stable machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace modx::core
