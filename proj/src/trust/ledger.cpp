#include "modx/trust/ledger.h"

#include <fstream>

#include "modx/core/canonical.h"
#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::trust {

using core::canonicalize;
using core::DocArray;
using core::DocMap;
using core::DocValue;
using core::Error;
using core::ErrorCode;

const char* to_string(RecordType type) {
  switch (type) {
    case RecordType::AgentRegistration: return "AgentRegistration";
    case RecordType::Transaction: return "Transaction";
    case RecordType::ReputationUpdate: return "ReputationUpdate";
    case RecordType::SecurityPolicy: return "SecurityPolicy";
    case RecordType::BatchAnchor: return "BatchAnchor";
  }
  return "Transaction";
}

RecordType record_type_from_string(const std::string& text) {
  if (text == "AgentRegistration") return RecordType::AgentRegistration;
  if (text == "Transaction") return RecordType::Transaction;
  if (text == "ReputationUpdate") return RecordType::ReputationUpdate;
  if (text == "SecurityPolicy") return RecordType::SecurityPolicy;
  if (text == "BatchAnchor") return RecordType::BatchAnchor;
  throw Error(ErrorCode::ParseError, "unknown recordType \"" + text + "\"");
}

DocValue LedgerRecord::unsigned_doc() const {
  DocMap m;
  m["recordType"] = to_string(type);
  m["body"] = body;
  m["submitter"] = submitter.value;
  m["timestamp"] = core::to_iso8601(timestamp);
  return DocValue(std::move(m));
}

DocValue LedgerRecord::to_doc() const {
  DocValue doc = unsigned_doc();
  doc.as_map()["signature"] = core::to_hex(signature);
  return doc;
}

LedgerRecord LedgerRecord::from_doc(const DocValue& doc) {
  if (!doc.is_map()) throw Error(ErrorCode::ParseError, "ledger record must be an object");
  LedgerRecord rec;
  rec.type = record_type_from_string(doc.string_or("recordType", ""));
  if (const DocValue* b = doc.find("body")) rec.body = *b;
  rec.submitter = AgentId::parse(doc.string_or("submitter", ""));
  rec.timestamp = core::parse_iso8601(doc.string_or("timestamp", ""));
  if (const DocValue* s = doc.find("signature"); s && s->is_string()) {
    rec.signature = core::from_hex(s->as_string());
  }
  return rec;
}

Bytes LedgerRecord::digest() const { return core::sha256(canonicalize(to_doc())); }

void sign_record(LedgerRecord& rec, const Bytes& private_key) {
  rec.signature = core::ed25519_sign(canonicalize(rec.unsigned_doc()), private_key);
}

Bytes block_hash(std::uint64_t height, const Bytes& prev_hash,
                 const std::vector<Bytes>& digests) {
  DocArray digest_list;
  digest_list.reserve(digests.size());
  for (const Bytes& d : digests) digest_list.push_back(DocValue(core::to_hex(d)));
  DocValue doc(DocMap{{"height", DocValue(static_cast<double>(height))},
                      {"prevHash", DocValue(core::to_hex(prev_hash))},
                      {"recordDigests", DocValue(std::move(digest_list))}});
  return core::sha256(canonicalize(doc));
}

Ledger::Ledger(LedgerConfig config, const KeyDirectory* keys, const core::Clock* clock,
               AgentId anchor_submitter, Signer signer)
    : config_(config),
      keys_(keys),
      clock_(clock),
      anchor_submitter_(std::move(anchor_submitter)),
      signer_(std::move(signer)) {}

RecordRef Ledger::append(LedgerRecord rec) {
  if (keys_) {
    auto key = keys_->public_key(rec.submitter, rec.timestamp);
    if (!key) {
      throw Error(ErrorCode::UnknownAgent, "ledger submitter \"" + rec.submitter.value +
                                               "\" has no registered identity");
    }
    if (!core::ed25519_verify(canonicalize(rec.unsigned_doc()), rec.signature, *key)) {
      throw Error(ErrorCode::InvalidSignature,
                  "record signature does not verify for \"" + rec.submitter.value + "\"");
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (open_.empty()) open_since_ = clock_ ? clock_->now() : rec.timestamp;
  open_.push_back(std::move(rec));
  RecordRef ref{blocks_.size(), open_.size() - 1};
  if (open_.size() >= config_.seal_count) seal_locked();
  return ref;
}

RecordRef Ledger::record_transaction(LedgerRecord rec) {
  if (rec.type != RecordType::Transaction) {
    throw Error(ErrorCode::MalformedRecord, "record_transaction requires recordType Transaction");
  }
  for (const char* field :
       {"transactionType", "agentId", "requestorId", "timestamp", "actionParameters"}) {
    if (!rec.body.find(field)) {
      throw Error(ErrorCode::MalformedRecord,
                  std::string("transaction body missing field ") + field);
    }
  }
  return append(std::move(rec));
}

void Ledger::observe_envelope(const Bytes& digest, Millis at) {
  std::lock_guard<std::mutex> lock(mu_);
  pending_.emplace_back(digest, at);
  known_digests_.insert(digest);
}

BatchAnchor Ledger::anchor_batch(const std::vector<Bytes>& digests, Millis from, Millis to) {
  if (digests.empty()) throw Error(ErrorCode::EmptyBatch, "no digests to anchor");
  BatchAnchor anchor;
  anchor.merkle_root = merkle_root(digests);
  anchor.count = digests.size();
  anchor.window_from = from;
  anchor.window_to = to;

  LedgerRecord rec;
  rec.type = RecordType::BatchAnchor;
  rec.body = DocValue(DocMap{{"merkleRoot", DocValue(core::to_hex(anchor.merkle_root))},
                             {"count", DocValue(static_cast<double>(anchor.count))},
                             {"windowFrom", DocValue(core::to_iso8601(from))},
                             {"windowTo", DocValue(core::to_iso8601(to))}});
  rec.submitter = anchor_submitter_;
  rec.timestamp = clock_ ? clock_->now() : to;
  if (signer_) rec.signature = signer_(rec.submitter, canonicalize(rec.unsigned_doc()));
  anchor.record = append(std::move(rec));
  return anchor;
}

std::optional<BatchAnchor> Ledger::anchor_pending() {
  std::vector<Bytes> digests;
  Millis from = 0, to = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (pending_.empty()) return std::nullopt;
    from = pending_.front().second;
    to = pending_.back().second;
    for (auto& [d, _] : pending_) digests.push_back(d);
    pending_.clear();
  }
  return anchor_batch(digests, from, to);
}

void Ledger::maybe_seal() {
  std::lock_guard<std::mutex> lock(mu_);
  if (open_.empty() || !clock_) return;
  if (clock_->now() - open_since_ >= config_.seal_interval_ms) seal_locked();
}

void Ledger::seal_open_block() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!open_.empty()) seal_locked();
}

void Ledger::seal_locked() {
  SealedBlock block;
  block.height = blocks_.size();
  block.prev_hash = blocks_.empty() ? Bytes(32, 0) : blocks_.back().block_hash;
  block.records = std::move(open_);
  open_.clear();
  for (const LedgerRecord& rec : block.records) block.digests.push_back(rec.digest());
  block.block_hash = block_hash(block.height, block.prev_hash, block.digests);
  blocks_.push_back(std::move(block));
}

ChainReport Ledger::verify_chain() const {
  std::lock_guard<std::mutex> lock(mu_);
  Bytes prev(32, 0);
  for (const SealedBlock& block : blocks_) {
    if (block.prev_hash != prev) {
      return {false, block.height, "prevHash link broken"};
    }
    std::vector<Bytes> digests;
    for (const LedgerRecord& rec : block.records) digests.push_back(rec.digest());
    if (block_hash(block.height, block.prev_hash, digests) != block.block_hash) {
      return {false, block.height, "blockHash mismatch"};
    }
    prev = block.block_hash;
  }
  return {true, 0, "ok"};
}

Ledger::BlockInclusion Ledger::prove_inclusion(RecordRef ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (ref.height >= blocks_.size() || ref.index >= blocks_[ref.height].records.size()) {
    throw Error(ErrorCode::DanglingEvidence, "no sealed record at the given reference");
  }
  const SealedBlock& block = blocks_[ref.height];
  return {ref.height, ref.index, block.prev_hash, block.digests};
}

bool Ledger::verify_inclusion(const LedgerRecord& rec, const BlockInclusion& proof,
                              const Bytes& expected_block_hash) {
  if (proof.index >= proof.digests.size()) return false;
  if (proof.digests[proof.index] != rec.digest()) return false;
  return block_hash(proof.height, proof.prev_hash, proof.digests) == expected_block_hash;
}

bool Ledger::has_record(RecordRef ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (ref.height < blocks_.size()) return ref.index < blocks_[ref.height].records.size();
  if (ref.height == blocks_.size()) return ref.index < open_.size();
  return false;
}

bool Ledger::digest_known(const Bytes& digest) const {
  std::lock_guard<std::mutex> lock(mu_);
  return known_digests_.count(digest) > 0;
}

std::size_t Ledger::record_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t n = open_.size();
  for (const SealedBlock& b : blocks_) n += b.records.size();
  return n;
}

std::vector<std::pair<std::uint64_t, Bytes>> Ledger::export_anchors() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::pair<std::uint64_t, Bytes>> out;
  for (const SealedBlock& b : blocks_) out.emplace_back(b.height, b.block_hash);
  return out;
}

void Ledger::save(const std::string& path) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  for (const SealedBlock& block : blocks_) {
    for (const LedgerRecord& rec : block.records) {
      DocValue line(DocMap{{"kind", DocValue("record")}, {"record", rec.to_doc()}});
      out << canonicalize(line) << "\n";
    }
    DocValue seal(DocMap{{"kind", DocValue("seal")},
                         {"height", DocValue(static_cast<double>(block.height))},
                         {"prevHash", DocValue(core::to_hex(block.prev_hash))},
                         {"blockHash", DocValue(core::to_hex(block.block_hash))},
                         {"count", DocValue(static_cast<double>(block.records.size()))}});
    out << canonicalize(seal) << "\n";
  }
  for (const LedgerRecord& rec : open_) {
    DocValue line(DocMap{{"kind", DocValue("record")}, {"record", rec.to_doc()}});
    out << canonicalize(line) << "\n";
  }
}

ChainReport Ledger::verify_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {false, 0, "cannot open " + path};
  std::uint64_t height = 0;
  Bytes prev(32, 0);
  std::vector<Bytes> digests;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DocValue doc;
    try {
      doc = core::parse_doc(line);
    } catch (const Error&) {
      return {false, height, "unparseable ledger line"};
    }
    std::string kind = doc.string_or("kind", "");
    if (kind == "record") {
      const DocValue* rec_doc = doc.find("record");
      if (!rec_doc) return {false, height, "record line missing record"};
      try {
        LedgerRecord rec = LedgerRecord::from_doc(*rec_doc);
        digests.push_back(rec.digest());
      } catch (const Error&) {
        return {false, height, "malformed record"};
      }
    } else if (kind == "seal") {
      try {
        auto expected_height = static_cast<std::uint64_t>(doc.number_or("height", -1));
        if (expected_height != height) return {false, height, "block height out of sequence"};
        if (static_cast<std::size_t>(doc.number_or("count", -1)) != digests.size()) {
          return {false, height, "record count mismatch"};
        }
        Bytes stored_prev = core::from_hex(doc.string_or("prevHash", ""));
        if (stored_prev != prev) return {false, height, "prevHash link broken"};
        Bytes stored_hash = core::from_hex(doc.string_or("blockHash", ""));
        if (block_hash(height, prev, digests) != stored_hash) {
          return {false, height, "blockHash mismatch"};
        }
        prev = stored_hash;
        digests.clear();
        ++height;
      } catch (const Error&) {
        return {false, height, "malformed seal"};
      }
    } else {
      return {false, height, "unknown line kind"};
    }
  }
  return {true, 0, "ok"};
}

}  // namespace modx::trust
