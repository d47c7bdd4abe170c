#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"
#include "modx/core/envelope.h"
#include "modx/core/time.h"
#include "modx/trust/identity.h"
#include "modx/trust/merkle.h"

namespace modx::trust {

enum class RecordType {
  AgentRegistration,
  Transaction,
  ReputationUpdate,
  SecurityPolicy,
  BatchAnchor,
};

const char* to_string(RecordType type);
RecordType record_type_from_string(const std::string& text);

/// One entry of the append-only log, signed by its submitter.
struct LedgerRecord {
  RecordType type = RecordType::Transaction;
  core::DocValue body;
  AgentId submitter;
  Millis timestamp = 0;
  Bytes signature;

  core::DocValue unsigned_doc() const;
  core::DocValue to_doc() const;
  static LedgerRecord from_doc(const core::DocValue& doc);

  /// SHA-256 over the canonical full record (signature included); these
  /// digests are what block hashes commit to.
  Bytes digest() const;
};

void sign_record(LedgerRecord& rec, const Bytes& private_key);

struct SealedBlock {
  std::uint64_t height = 0;
  Bytes prev_hash;
  Bytes block_hash;
  std::vector<LedgerRecord> records;
  std::vector<Bytes> digests;
};

/// blockHash = SHA-256(canonicalize({height, prevHash, recordDigests})).
Bytes block_hash(std::uint64_t height, const Bytes& prev_hash, const std::vector<Bytes>& digests);

struct RecordRef {
  std::uint64_t height = 0;
  std::size_t index = 0;
};

struct ChainReport {
  bool ok = true;
  std::uint64_t bad_height = 0;
  std::string message;
};

struct BatchAnchor {
  Bytes merkle_root;
  std::size_t count = 0;
  Millis window_from = 0;
  Millis window_to = 0;
  RecordRef record;
};

struct LedgerConfig {
  std::size_t seal_count = 16;
  Millis seal_interval_ms = 10000;
};

/// Hash-chained local ledger standing in for a blockchain: high-value
/// records append individually, routine envelope digests accumulate until a
/// batch anchor commits their Merkle root. The anchor export hook hands out
/// (height, blockHash) pairs for external anchoring.
class Ledger {
 public:
  using Signer = std::function<Bytes(const AgentId&, const std::string&)>;

  Ledger(LedgerConfig config, const KeyDirectory* keys, const core::Clock* clock,
         AgentId anchor_submitter = AgentId{"umb-core-001"}, Signer signer = {});

  /// Appends after verifying the submitter signature; seals the open block
  /// when it reaches the configured count. Returns where the record landed
  /// (height of the block it will seal into, index within it).
  RecordRef append(LedgerRecord rec);

  /// Transaction append with the §-record body schema gate: body must carry
  /// transactionType, agentId, requestorId, timestamp and actionParameters.
  RecordRef record_transaction(LedgerRecord rec);

  /// Routine-traffic intake: remember an envelope digest until the next
  /// batch anchor commits it.
  void observe_envelope(const Bytes& digest, Millis at);

  /// Merkle-anchors `digests` (or, with nullopt, the pending observed
  /// digests) as a BatchAnchor record. Throws EmptyBatch.
  BatchAnchor anchor_batch(const std::vector<Bytes>& digests, Millis from, Millis to);
  std::optional<BatchAnchor> anchor_pending();

  /// Seals the open block if the seal interval elapsed; harness calls this
  /// as simulated time advances.
  void maybe_seal();
  /// Unconditionally seals a non-empty open block.
  void seal_open_block();

  ChainReport verify_chain() const;

  /// Inclusion proof for a sealed record: the block's digest list plus
  /// coordinates; verification recomputes the block hash.
  struct BlockInclusion {
    std::uint64_t height = 0;
    std::size_t index = 0;
    Bytes prev_hash;
    std::vector<Bytes> digests;
  };
  BlockInclusion prove_inclusion(RecordRef ref) const;
  static bool verify_inclusion(const LedgerRecord& rec, const BlockInclusion& proof,
                               const Bytes& expected_block_hash);

  bool has_record(RecordRef ref) const;
  bool digest_known(const Bytes& digest) const;  // pending or anchored

  const std::vector<SealedBlock>& blocks() const { return blocks_; }
  const std::vector<LedgerRecord>& open_records() const { return open_; }
  std::size_t record_count() const;
  std::size_t pending_digest_count() const { return pending_.size(); }

  /// Anchor export hook: (height, blockHash) pairs of every sealed block.
  std::vector<std::pair<std::uint64_t, Bytes>> export_anchors() const;

  void save(const std::string& path) const;

  /// Structural verification of a persisted ledger file; parse failures are
  /// reported at the height of the block the offending line belongs to.
  static ChainReport verify_file(const std::string& path);

 private:
  void seal_locked();

  LedgerConfig config_;
  const KeyDirectory* keys_;
  const core::Clock* clock_;
  AgentId anchor_submitter_;
  Signer signer_;
  std::vector<SealedBlock> blocks_;
  std::vector<LedgerRecord> open_;
  Millis open_since_ = 0;
  std::deque<std::pair<Bytes, Millis>> pending_;
  std::set<Bytes> known_digests_;
  mutable std::mutex mu_;
};

}  // namespace modx::trust
