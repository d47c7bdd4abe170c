#include "modx/registry/discovery.h"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "modx/core/canonical.h"
#include "modx/core/errors.h"

namespace modx::registry {

using core::DocArray;
using core::DocMap;
using core::Error;
using core::ErrorCode;

void SynthesisWeights::validate() const {
  if (onto < 0 || vec < 0 || constraint < 0) {
    throw Error(ErrorCode::ParseError, "synthesis weights must be non-negative");
  }
  if (std::abs(onto + vec + constraint - 1.0) > 1e-9) {
    throw Error(ErrorCode::ParseError, "synthesis weights must sum to 1");
  }
}

CapabilityNeed CapabilityNeed::from_doc(const DocValue& doc) {
  const DocValue* body = doc.find("required");
  if (!body) body = &doc;
  CapabilityNeed need;
  need.functionality = body->string_or("functionality", "");
  if (need.functionality.empty()) {
    throw Error(ErrorCode::MalformedQuery, "capability need without functionality text");
  }
  std::string iri = body->string_or("ontology", "");
  if (!iri.empty()) need.ontology_iri = iri;
  if (const DocValue* cons = body->find("constraints"); cons && cons->is_array()) {
    for (const DocValue& c : cons->as_array()) {
      if (c.is_string()) need.constraints.push_back(c.as_string());
    }
  }
  return need;
}

DocValue CapabilityNeed::to_doc() const {
  DocMap body{{"functionality", DocValue(functionality)}};
  if (ontology_iri) body["ontology"] = DocValue(*ontology_iri);
  DocArray cons;
  for (const std::string& c : constraints) cons.push_back(DocValue(c));
  body["constraints"] = DocValue(std::move(cons));
  return DocValue(DocMap{{"required", DocValue(std::move(body))}});
}

const char* to_string(ConstraintPlan plan) {
  switch (plan) {
    case ConstraintPlan::ExplicitParameter: return "ExplicitParameter";
    case ConstraintPlan::SemanticTranslation: return "SemanticTranslation";
    case ConstraintPlan::PostFilter: return "PostFilter";
    case ConstraintPlan::Unsatisfied: return "Unsatisfied";
  }
  return "Unsatisfied";
}

DocValue MatchResult::to_doc(bool with_breakdown) const {
  DocMap m{{"agentId", DocValue(agent_id.value)},
           {"capability", DocValue(capability)},
           {"score", DocValue(score)}};
  if (with_breakdown) {
    DocMap plans;
    for (const auto& [name, plan] : breakdown.constraint_plans) {
      plans[name] = DocValue(to_string(plan));
    }
    DocMap b{{"ontoScore", DocValue(breakdown.onto_score)},
             {"vecScore", DocValue(breakdown.vec_score)},
             {"constraintScore", DocValue(breakdown.constraint_score)},
             {"constraintPlan", DocValue(std::move(plans))}};
    if (!breakdown.onto_flag.empty()) b["ontoFlag"] = DocValue(breakdown.onto_flag);
    m["breakdown"] = DocValue(std::move(b));
  }
  return DocValue(std::move(m));
}

double vec_score(const std::vector<double>& need_embedding,
                 const std::vector<double>& offered_embedding) {
  return std::max(0.0, translation::cosine(need_embedding, offered_embedding));
}

ParamSynonyms param_synonyms_from_doc(const DocValue& doc) {
  ParamSynonyms synonyms;
  if (!doc.is_map()) return synonyms;
  for (const auto& [constraint, params] : doc.as_map()) {
    if (!params.is_array()) continue;
    for (const DocValue& p : params.as_array()) {
      if (p.is_string()) synonyms[constraint].push_back(p.as_string());
    }
  }
  return synonyms;
}

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// camelCase / hyphen / underscore split, lowercased
std::vector<std::string> constraint_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(lowercase(current));
      current.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '-' || c == '_' || c == ' ') {
      flush();
      continue;
    }
    if (c >= 'A' && c <= 'Z' && !current.empty()) flush();
    current.push_back(c);
  }
  flush();
  return tokens;
}

}  // namespace

ConstraintCheck constraint_check(const std::string& constraint, const CapabilityRecord& record,
                                 const translation::ConstraintRewriteTable& rewrites,
                                 const ParamSynonyms& synonyms) {
  const std::string c_lower = lowercase(constraint);
  const std::vector<std::string> tokens = constraint_tokens(constraint);

  auto has_param = [&](const std::string& wanted_lower) {
    for (const auto& [op, sig] : record.interface_ops) {
      for (const auto& [param, type] : sig.inputs) {
        (void)type;
        if (lowercase(param) == wanted_lower) return true;
      }
    }
    return false;
  };

  // 1. explicit interface parameter
  bool explicit_hit = has_param(c_lower);
  if (!explicit_hit) {
    for (const std::string& tok : tokens) {
      if (has_param(tok)) {
        explicit_hit = true;
        break;
      }
    }
  }
  if (!explicit_hit) {
    auto syn = synonyms.find(constraint);
    if (syn != synonyms.end()) {
      for (const std::string& param : syn->second) {
        if (has_param(lowercase(param))) {
          explicit_hit = true;
          break;
        }
      }
    }
  }
  if (explicit_hit) return {ConstraintPlan::ExplicitParameter, 1.0};

  // 2. semantic translation: injection rewrite declared for this constraint
  if (rewrites.injection_for(constraint)) {
    return {ConstraintPlan::SemanticTranslation, 1.0};
  }

  // 3. post-filter: filter rewrite plus a declared output field to filter on
  if (const translation::ConstraintRewrite* rw = rewrites.filter_for(constraint)) {
    const std::string& field = rw->filter->field.front().key;
    for (const auto& [op, sig] : record.interface_ops) {
      (void)op;
      for (const std::string& declared : sig.output_fields) {
        if (declared == field) return {ConstraintPlan::PostFilter, 0.8};
      }
    }
  }

  return {ConstraintPlan::Unsatisfied, 0.0};
}

CapabilityRegistry::CapabilityRegistry(RegistryConfig config,
                                       const translation::Embedder* embedder,
                                       OntologyGraph ontology,
                                       translation::ConstraintRewriteTable rewrites,
                                       ParamSynonyms synonyms, const trust::KeyDirectory* keys,
                                       const core::Clock* clock)
    : config_(config),
      embedder_(embedder),
      ontology_(std::move(ontology)),
      rewrites_(std::move(rewrites)),
      synonyms_(std::move(synonyms)),
      keys_(keys),
      clock_(clock),
      records_(std::make_shared<std::vector<CapabilityRecord>>()) {
  config_.weights.validate();
}

void CapabilityRegistry::add_alignment(translation::AlignmentMap map) {
  std::lock_guard<std::mutex> lock(write_mu_);
  alignments_[map.source_model_id] = std::move(map);
}

void CapabilityRegistry::register_capability(CapabilityRecord record, const Bytes& signature) {
  if (keys_) {
    auto key = keys_->public_key(record.agent_id, clock_ ? clock_->now() : 0);
    if (!key) {
      throw Error(ErrorCode::UnknownAgent,
                  "no identity registered for \"" + record.agent_id.value + "\"");
    }
    if (!core::ed25519_verify(core::canonicalize(record.to_aidl_doc()), signature, *key)) {
      throw Error(ErrorCode::InvalidSignature,
                  "registration signature does not verify for \"" + record.agent_id.value + "\"");
    }
  }
  record.validate();

  std::lock_guard<std::mutex> lock(write_mu_);
  if (!record.embedding_model.empty()) {
    auto it = alignments_.find(record.embedding_model);
    if (it != alignments_.end()) {
      record.embedding = translation::align(record.embedding, it->second);
      record.embedding_model.clear();
    }
  }
  if (record.embedding.size() != config_.dimension) {
    throw Error(ErrorCode::DimensionMismatch,
                "embedding has dimension " + std::to_string(record.embedding.size()) +
                    ", registry expects " + std::to_string(config_.dimension));
  }

  auto next = std::make_shared<std::vector<CapabilityRecord>>(*records_);
  for (auto it = next->begin(); it != next->end(); ++it) {
    if (it->agent_id == record.agent_id && it->name == record.name) {
      if (compare_versions(record.version, it->version) <= 0) {
        throw Error(ErrorCode::StaleVersion, "version " + record.version +
                                                 " does not supersede registered " + it->version +
                                                 " for \"" + record.name + "\"");
      }
      *it = record;
      records_ = std::move(next);
      if (sink_) sink_(record);
      return;
    }
  }
  next->push_back(record);
  records_ = std::move(next);
  if (sink_) sink_(record);
}

void CapabilityRegistry::register_aidl(const DocValue& aidl_doc, const Bytes& signature) {
  for (CapabilityRecord& rec : CapabilityRecord::from_aidl(aidl_doc)) {
    register_capability(std::move(rec), signature);
  }
}

std::size_t CapabilityRegistry::size() const {
  std::lock_guard<std::mutex> lock(write_mu_);
  return records_->size();
}

std::vector<CapabilityRecord> CapabilityRegistry::snapshot() const {
  std::lock_guard<std::mutex> lock(write_mu_);
  return *records_;
}

std::vector<MatchResult> CapabilityRegistry::discover(const CapabilityNeed& need) const {
  return run_discovery(need, config_.weights, /*parallel=*/true);
}

std::vector<MatchResult> CapabilityRegistry::discover(const CapabilityNeed& need,
                                                      const SynthesisWeights& weights) const {
  return run_discovery(need, weights, /*parallel=*/true);
}

std::vector<MatchResult> CapabilityRegistry::discover_reference(
    const CapabilityNeed& need, const SynthesisWeights& weights) const {
  return run_discovery(need, weights, /*parallel=*/false);
}

std::vector<MatchResult> CapabilityRegistry::discover_by_name(
    const std::string& capability_name) const {
  CapabilityNeed need;
  need.functionality = capability_name;
  return run_discovery(need, config_.weights, /*parallel=*/true, &capability_name);
}

std::vector<MatchResult> CapabilityRegistry::run_discovery(const CapabilityNeed& need,
                                                           const SynthesisWeights& weights,
                                                           bool parallel,
                                                           const std::string* name_filter) const {
  weights.validate();
  std::shared_ptr<const std::vector<CapabilityRecord>> all_records;
  {
    std::lock_guard<std::mutex> lock(write_mu_);
    all_records = records_;
  }
  std::shared_ptr<const std::vector<CapabilityRecord>> records = all_records;
  if (name_filter) {
    auto filtered = std::make_shared<std::vector<CapabilityRecord>>();
    for (const CapabilityRecord& rec : *all_records) {
      if (rec.name == *name_filter) filtered->push_back(rec);
    }
    records = std::move(filtered);
  }
  if (records->empty()) return {};

  std::vector<double> need_embedding;
  try {
    need_embedding = embedder_->embed(need.functionality);
  } catch (const Error& e) {
    throw Error(ErrorCode::EmbeddingFailure,
                std::string("cannot embed need functionality: ") + e.what());
  }

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(records->size());
  std::vector<MatchResult> scored(records->size());

  // The per-record scoring sweep is the data-parallel kernel; each entry is
  // written independently so the result is bitwise identical to the serial
  // reference.
#pragma omp parallel for schedule(static) if (parallel && n > 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const CapabilityRecord& rec = (*records)[i];
    MatchResult& result = scored[i];
    result.agent_id = rec.agent_id;
    result.capability = rec.name;

    OntoScore onto = onto_score(ontology_, need.ontology_iri, rec.ontology_iri,
                                config_.onto_decay);
    result.breakdown.onto_score = onto.score;
    result.breakdown.onto_flag = onto.flag;
    result.breakdown.vec_score = vec_score(need_embedding, rec.embedding);

    double constraint_sum = 0.0;
    for (const std::string& constraint : need.constraints) {
      ConstraintCheck check = constraint_check(constraint, rec, rewrites_, synonyms_);
      result.breakdown.constraint_plans.emplace_back(constraint, check.plan);
      constraint_sum += check.sub_score;
    }
    result.breakdown.constraint_score =
        need.constraints.empty() ? 1.0
                                 : constraint_sum / static_cast<double>(need.constraints.size());

    result.score = weights.onto * result.breakdown.onto_score +
                   weights.vec * result.breakdown.vec_score +
                   weights.constraint * result.breakdown.constraint_score;
    if (config_.reputation_weighting && reputation_) {
      result.score *= reputation_(rec.agent_id);
    }
  }

  std::vector<MatchResult> kept;
  for (MatchResult& r : scored) {
    if (r.score >= config_.score_floor) kept.push_back(std::move(r));
  }
  std::sort(kept.begin(), kept.end(), [](const MatchResult& a, const MatchResult& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.breakdown.onto_score != b.breakdown.onto_score) {
      return a.breakdown.onto_score > b.breakdown.onto_score;
    }
    return a.agent_id < b.agent_id;
  });
  return kept;
}

MessageEnvelope CapabilityRegistry::handle_capability_query(
    const MessageEnvelope& query, core::AgentSession& responder) const {
  if (!query.correlation_id) {
    throw Error(ErrorCode::MalformedQuery, "capability query without a correlationId");
  }
  core::Topic reply_topic = core::Topic::parse("reply." + query.sender.value);
  const DocValue* caps = query.payload.find("capabilities");
  if (!caps || !caps->is_array() || caps->as_array().empty()) {
    DocValue err(DocMap{{"error", DocValue("MalformedQuery")},
                        {"message", DocValue("payload needs a capabilities array")}});
    return responder.make(core::MessageType::Error, reply_topic, std::move(err),
                          query.correlation_id, clock_ ? clock_->now() : query.timestamp);
  }

  DocMap matches;
  for (std::size_t i = 0; i < caps->as_array().size(); ++i) {
    const DocValue& entry = caps->as_array()[i];
    CapabilityNeed need;
    std::string label;
    bool by_name = false;
    try {
      if (entry.is_string()) {
        label = entry.as_string();
        need.functionality = label;
        by_name = true;
        if (label.empty()) {
          throw Error(ErrorCode::MalformedQuery, "empty capability name");
        }
      } else if (entry.is_map()) {
        need = CapabilityNeed::from_doc(entry);
        label = need.functionality;
      } else {
        throw Error(ErrorCode::MalformedQuery, "capability entries are names or need objects");
      }
    } catch (const Error&) {
      DocValue err(DocMap{
          {"error", DocValue("MalformedQuery")},
          {"message", DocValue("malformed capability entry #" + std::to_string(i))},
          {"entry", entry}});
      return responder.make(core::MessageType::Error, reply_topic, std::move(err),
                            query.correlation_id, clock_ ? clock_->now() : query.timestamp);
    }
    // plain names are exact capability lookups; need objects run the full
    // semantic pipeline
    std::vector<MatchResult> found = by_name ? discover_by_name(label) : discover(need);
    DocArray ranked;
    for (const MatchResult& m : found) ranked.push_back(m.to_doc(false));
    matches[label] = DocValue(std::move(ranked));
  }

  return responder.make(core::MessageType::CapabilityResponse, reply_topic,
                        DocValue(DocMap{{"matches", DocValue(std::move(matches))}}),
                        query.correlation_id, clock_ ? clock_->now() : query.timestamp);
}

}  // namespace modx::registry
