#include "modx/registry/capability.h"

#include <cmath>

#include "modx/core/errors.h"

namespace modx::registry {

using core::DocArray;
using core::DocMap;
using core::Error;
using core::ErrorCode;

std::vector<CapabilityRecord> CapabilityRecord::from_aidl(const DocValue& doc) {
  if (!doc.is_map()) throw Error(ErrorCode::ParseError, "AIDL document must be an object");
  AgentId agent = AgentId::parse(doc.string_or("agentId", ""));
  const DocValue* caps = doc.find("capabilities");
  if (!caps || !caps->is_array() || caps->as_array().empty()) {
    throw Error(ErrorCode::ParseError, "AIDL document needs a non-empty capabilities array");
  }
  std::vector<CapabilityRecord> records;
  for (const DocValue& cap : caps->as_array()) {
    CapabilityRecord rec;
    rec.agent_id = agent;
    rec.name = cap.string_or("name", "");
    rec.version = cap.string_or("version", "0.0.0");
    if (rec.name.empty()) throw Error(ErrorCode::ParseError, "capability without a name");
    if (const DocValue* sem = cap.find("semantics")) {
      rec.ontology_iri = sem->string_or("ontology", "");
      rec.embedding_model = sem->string_or("embeddingModel", "");
      if (const DocValue* emb = sem->find("embedding"); emb && emb->is_array()) {
        for (const DocValue& x : emb->as_array()) {
          if (!x.is_number()) throw Error(ErrorCode::ParseError, "non-numeric embedding entry");
          rec.embedding.push_back(x.as_number());
        }
      }
      if (const DocValue* ops = sem->find("operations"); ops && ops->is_array()) {
        for (const DocValue& op : ops->as_array()) {
          if (op.is_string()) rec.operations.push_back(op.as_string());
        }
      }
    }
    if (const DocValue* iface = cap.find("interface")) {
      if (const DocValue* inputs = iface->find("inputs"); inputs && inputs->is_map()) {
        for (const auto& [op, params] : inputs->as_map()) {
          OperationSig& sig = rec.interface_ops[op];
          if (params.is_map()) {
            for (const auto& [param, type] : params.as_map()) {
              sig.inputs[param] = type.is_string() ? type.as_string() : "";
            }
          }
        }
      }
      if (const DocValue* outputs = iface->find("outputs"); outputs && outputs->is_map()) {
        for (const auto& [op, out] : outputs->as_map()) {
          OperationSig& sig = rec.interface_ops[op];
          if (out.is_string()) {
            sig.output_type = out.as_string();
          } else if (out.is_map()) {
            sig.output_type = out.string_or("type", "object");
            if (const DocValue* fields = out.find("fields"); fields && fields->is_array()) {
              for (const DocValue& f : fields->as_array()) {
                if (f.is_string()) sig.output_fields.push_back(f.as_string());
              }
            }
          }
        }
      }
    }
    rec.validate();
    records.push_back(std::move(rec));
  }
  return records;
}

DocValue CapabilityRecord::to_aidl_doc() const {
  DocArray embedding_doc;
  for (double x : embedding) embedding_doc.push_back(DocValue(x));
  DocArray ops_doc;
  for (const std::string& op : operations) ops_doc.push_back(DocValue(op));

  DocMap semantics{{"ontology", DocValue(ontology_iri)},
                   {"embedding", DocValue(std::move(embedding_doc))},
                   {"operations", DocValue(std::move(ops_doc))}};
  if (!embedding_model.empty()) semantics["embeddingModel"] = DocValue(embedding_model);

  DocMap inputs, outputs;
  for (const auto& [op, sig] : interface_ops) {
    if (!sig.inputs.empty()) {
      DocMap params;
      for (const auto& [param, type] : sig.inputs) params[param] = DocValue(type);
      inputs[op] = DocValue(std::move(params));
    }
    if (!sig.output_type.empty()) {
      if (sig.output_fields.empty()) {
        outputs[op] = DocValue(sig.output_type);
      } else {
        DocArray fields;
        for (const std::string& f : sig.output_fields) fields.push_back(DocValue(f));
        outputs[op] = DocValue(DocMap{{"type", DocValue(sig.output_type)},
                                      {"fields", DocValue(std::move(fields))}});
      }
    }
  }

  DocMap capability{{"name", DocValue(name)},
                    {"version", DocValue(version)},
                    {"semantics", DocValue(std::move(semantics))},
                    {"interface", DocValue(DocMap{{"inputs", DocValue(std::move(inputs))},
                                                  {"outputs", DocValue(std::move(outputs))}})}};
  return DocValue(DocMap{{"agentId", DocValue(agent_id.value)},
                         {"capabilities", DocValue(DocArray{DocValue(std::move(capability))})}});
}

void CapabilityRecord::validate() const {
  for (double x : embedding) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::ParseError, "capability \"" + name + "\" has a non-finite embedding");
    }
  }
  if (operations.empty()) {
    throw Error(ErrorCode::ParseError, "capability \"" + name + "\" declares no operations");
  }
  for (const auto& [op, sig] : interface_ops) {
    bool listed = false;
    for (const std::string& known : operations) {
      if (known == op) {
        listed = true;
        break;
      }
    }
    if (!listed) {
      throw Error(ErrorCode::ParseError, "interface operation \"" + op +
                                             "\" missing from the operations list of \"" + name +
                                             "\"");
    }
  }
}

int compare_versions(const std::string& a, const std::string& b) {
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    long va = 0, vb = 0;
    while (ia < a.size() && a[ia] >= '0' && a[ia] <= '9') va = va * 10 + (a[ia++] - '0');
    while (ib < b.size() && b[ib] >= '0' && b[ib] <= '9') vb = vb * 10 + (b[ib++] - '0');
    if (va != vb) return va < vb ? -1 : 1;
    // skip one separator on each side
    if (ia < a.size() && a[ia] == '.') ++ia;
    else ia = a.size();
    if (ib < b.size() && b[ib] == '.') ++ib;
    else ib = b.size();
  }
  return 0;
}

}  // namespace modx::registry
