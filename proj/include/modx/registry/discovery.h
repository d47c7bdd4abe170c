#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "modx/core/envelope.h"
#include "modx/registry/capability.h"
#include "modx/registry/ontology.h"
#include "modx/translation/alignment.h"
#include "modx/translation/constraint_rewrite.h"
#include "modx/translation/embedder.h"
#include "modx/trust/identity.h"

namespace modx::registry {

using core::Bytes;
using core::DocValue;
using core::MessageEnvelope;

/// Convex combination fusing the ontological path, the vector path and
/// constraint satisfaction into one relevance score.
struct SynthesisWeights {
  double onto = 0.4;
  double vec = 0.4;
  double constraint = 0.2;

  void validate() const;
};

/// A discovery query: desired functionality text, optional ontology term,
/// constraint names. Accepts both the bare shape and the {"required": ...}
/// wrapper used on the wire.
struct CapabilityNeed {
  std::string functionality;
  std::optional<std::string> ontology_iri;
  std::vector<std::string> constraints;

  static CapabilityNeed from_doc(const DocValue& doc);
  DocValue to_doc() const;
};

enum class ConstraintPlan { ExplicitParameter, SemanticTranslation, PostFilter, Unsatisfied };
const char* to_string(ConstraintPlan plan);

struct MatchBreakdown {
  double onto_score = 0.0;
  double vec_score = 0.0;
  double constraint_score = 0.0;
  std::string onto_flag;
  std::vector<std::pair<std::string, ConstraintPlan>> constraint_plans;
};

struct MatchResult {
  AgentId agent_id;
  std::string capability;
  double score = 0.0;
  MatchBreakdown breakdown;

  DocValue to_doc(bool with_breakdown = true) const;
};

/// max(0, cosine); symmetric and invariant under positive scaling of either
/// argument. Throws DimensionMismatch / ZeroVector.
double vec_score(const std::vector<double>& need_embedding,
                 const std::vector<double>& offered_embedding);

/// Maps a constraint onto how it matches parameter names: camel/hyphen/
/// underscore tokens plus an explicit synonym table (constraint -> interface
/// parameter names).
using ParamSynonyms = std::map<std::string, std::vector<std::string>>;
ParamSynonyms param_synonyms_from_doc(const DocValue& doc);

struct ConstraintCheck {
  ConstraintPlan plan = ConstraintPlan::Unsatisfied;
  double sub_score = 0.0;
};

/// Resolution order: explicit interface parameter (1.0), semantic
/// translation through an injection rewrite (1.0), post-filter against a
/// declared output field (0.8), unsatisfied (0.0).
ConstraintCheck constraint_check(const std::string& constraint, const CapabilityRecord& record,
                                 const translation::ConstraintRewriteTable& rewrites,
                                 const ParamSynonyms& synonyms);

struct RegistryConfig {
  std::size_t dimension = 64;
  double onto_decay = 0.9;
  double score_floor = 0.5;
  SynthesisWeights weights;
  bool reputation_weighting = false;  // optional post-multiplier, off by default
};

/// Stores capability registrations and answers discovery queries over the
/// dual symbolic/sub-symbolic pipeline. Registration is a serialized write
/// against a copy-on-write snapshot; discover runs against the snapshot and
/// scores records with an OpenMP sweep (serial reference kept for tests).
class CapabilityRegistry {
 public:
  using RegistrationSink = std::function<void(const CapabilityRecord&)>;
  using ReputationFn = std::function<double(const AgentId&)>;

  CapabilityRegistry(RegistryConfig config, const translation::Embedder* embedder,
                     OntologyGraph ontology, translation::ConstraintRewriteTable rewrites,
                     ParamSynonyms synonyms, const trust::KeyDirectory* keys,
                     const core::Clock* clock);

  void set_registration_sink(RegistrationSink sink) { sink_ = std::move(sink); }
  void set_reputation_fn(ReputationFn fn) { reputation_ = std::move(fn); }
  void add_alignment(translation::AlignmentMap map);

  /// Registers one capability record; the signature covers the canonical
  /// bytes of the record's AIDL document. Foreign-model embeddings pass
  /// through their alignment map first. Re-registration needs a strictly
  /// higher version.
  void register_capability(CapabilityRecord record, const Bytes& signature);

  /// Registers every capability in an AIDL document.
  void register_aidl(const DocValue& aidl_doc, const Bytes& signature);

  std::vector<MatchResult> discover(const CapabilityNeed& need) const;
  std::vector<MatchResult> discover(const CapabilityNeed& need,
                                    const SynthesisWeights& weights) const;
  /// Serial reference path; must produce results identical to discover().
  std::vector<MatchResult> discover_reference(const CapabilityNeed& need,
                                              const SynthesisWeights& weights) const;

  /// Exact capability-name lookup (the wire form where a query lists plain
  /// names); matching records are still scored and ranked like discover.
  std::vector<MatchResult> discover_by_name(const std::string& capability_name) const;

  /// CapabilityQuery envelope in, CapabilityResponse (or Error) envelope
  /// out; the response payload maps each requested capability to its ranked
  /// matches and echoes the correlation id.
  MessageEnvelope handle_capability_query(const MessageEnvelope& query,
                                          core::AgentSession& responder) const;

  std::size_t size() const;
  std::vector<CapabilityRecord> snapshot() const;
  const RegistryConfig& config() const { return config_; }
  const OntologyGraph& ontology() const { return ontology_; }
  const translation::ConstraintRewriteTable& rewrites() const { return rewrites_; }

 private:
  std::vector<MatchResult> run_discovery(const CapabilityNeed& need,
                                         const SynthesisWeights& weights, bool parallel,
                                         const std::string* name_filter = nullptr) const;

  RegistryConfig config_;
  const translation::Embedder* embedder_;
  OntologyGraph ontology_;
  translation::ConstraintRewriteTable rewrites_;
  ParamSynonyms synonyms_;
  const trust::KeyDirectory* keys_;
  const core::Clock* clock_;
  RegistrationSink sink_;
  ReputationFn reputation_;
  std::map<std::string, translation::AlignmentMap> alignments_;

  mutable std::mutex write_mu_;
  std::shared_ptr<const std::vector<CapabilityRecord>> records_;
};

}  // namespace modx::registry
