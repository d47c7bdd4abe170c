#include "modx/core/errors.h"

namespace modx::core {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteNumber: return "NonFiniteNumber";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidAgentId: return "InvalidAgentId";
    case ErrorCode::InvalidTopic: return "InvalidTopic";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::UnknownSender: return "UnknownSender";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::QueueOverflow: return "QueueOverflow";
    case ErrorCode::UnknownSubscription: return "UnknownSubscription";
    case ErrorCode::NoSubscriber: return "NoSubscriber";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::InvalidCursor: return "InvalidCursor";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StaleVersion: return "StaleVersion";
    case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
    case ErrorCode::MalformedQuery: return "MalformedQuery";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::MissingLookupKey: return "MissingLookupKey";
    case ErrorCode::PathConflict: return "PathConflict";
    case ErrorCode::ConsentMissing: return "ConsentMissing";
    case ErrorCode::ContextClosed: return "ContextClosed";
    case ErrorCode::NotParticipant: return "NotParticipant";
    case ErrorCode::TypeNotShareable: return "TypeNotShareable";
    case ErrorCode::KeyAbsent: return "KeyAbsent";
    case ErrorCode::NotRevocable: return "NotRevocable";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DanglingPlaceholder: return "DanglingPlaceholder";
    case ErrorCode::OrphanEdge: return "OrphanEdge";
    case ErrorCode::NoCapableAgent: return "NoCapableAgent";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::CompensationFailed: return "CompensationFailed";
    case ErrorCode::DuplicateAgent: return "DuplicateAgent";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::DanglingEvidence: return "DanglingEvidence";
  }
  return "UnknownError";
}

}  // namespace modx::core
