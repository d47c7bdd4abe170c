#include "modx/translation/concept_map.h"

#include <set>

#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::translation {

using core::DocValue;
using core::Error;
using core::ErrorCode;

namespace {

Transform transform_from_string(const std::string& text) {
  if (text == "copy") return Transform::Copy;
  if (text == "rename") return Transform::Rename;
  if (text == "lookup") return Transform::Lookup;
  if (text == "inject") return Transform::Inject;
  if (text == "scale") return Transform::Scale;
  if (text == "dateformat") return Transform::DateFormat;
  throw Error(ErrorCode::ParseError, "unknown transform \"" + text + "\"");
}

// "DD/MM/YYYY" <-> "MM/DD/YYYY"; the two forms the table declares.
std::string reformat_date(const std::string& value, const std::string& from,
                          const std::string& to) {
  if (from == to) return value;
  if (value.size() != 10 || value[2] != '/' || value[5] != '/') {
    throw Error(ErrorCode::MissingLookupKey, "date \"" + value + "\" does not match " + from);
  }
  std::string first = value.substr(0, 2);
  std::string second = value.substr(3, 2);
  std::string year = value.substr(6, 4);
  bool swap = (from == "DD/MM/YYYY" && to == "MM/DD/YYYY") ||
              (from == "MM/DD/YYYY" && to == "DD/MM/YYYY");
  if (!swap) {
    throw Error(ErrorCode::ParseError, "unsupported date formats " + from + " -> " + to);
  }
  return second + "/" + first + "/" + year;
}

DocValue apply_value_transforms(const ConceptMapEntry& entry, const ConceptMapTable& table,
                                DocValue value) {
  if (!entry.value_map.empty()) {
    if (value.is_string()) {
      auto it = entry.value_map.find(value.as_string());
      if (it != entry.value_map.end()) {
        value = it->second;
      } else if (!entry.value_map_passthrough) {
        throw Error(ErrorCode::MissingLookupKey,
                    "value \"" + value.as_string() + "\" not in valueMap for " +
                        path_to_string(entry.target_path));
      }
    }
  }
  if (entry.transform == Transform::Lookup) {
    auto dict_it = table.lookups.find(entry.lookup_name);
    if (dict_it == table.lookups.end()) {
      throw Error(ErrorCode::MissingLookupKey, "no dictionary named \"" + entry.lookup_name + "\"");
    }
    const LookupDictionary& dict = dict_it->second;
    std::string key = value.is_string() ? value.as_string() : core::pretty_print(value);
    auto it = dict.values.find(key);
    if (it != dict.values.end()) {
      value = it->second;
    } else if (!dict.passthrough) {
      throw Error(ErrorCode::MissingLookupKey, "value \"" + key + "\" not in dictionary \"" +
                                                   entry.lookup_name + "\" (at " +
                                                   path_to_string(entry.target_path) + ")");
    }
  } else if (entry.transform == Transform::Scale) {
    if (!value.is_number()) {
      throw Error(ErrorCode::MissingLookupKey,
                  "scale transform needs a number at " + path_to_string(entry.target_path));
    }
    value = DocValue(value.as_number() * entry.scale_factor);
  } else if (entry.transform == Transform::DateFormat) {
    if (!value.is_string()) {
      throw Error(ErrorCode::MissingLookupKey,
                  "dateformat transform needs a string at " + path_to_string(entry.target_path));
    }
    value = DocValue(reformat_date(value.as_string(), entry.date_from, entry.date_to));
  }
  return value;
}

}  // namespace

ConceptMapTable ConceptMapTable::from_doc(const DocValue& doc) {
  ConceptMapTable table;
  if (const DocValue* lookups = doc.find("lookups"); lookups && lookups->is_map()) {
    for (const auto& [name, spec] : lookups->as_map()) {
      LookupDictionary dict;
      if (const DocValue* values = spec.find("values"); values && values->is_map()) {
        for (const auto& [k, v] : values->as_map()) dict.values[k] = v;
      } else if (spec.is_map()) {
        for (const auto& [k, v] : spec.as_map()) dict.values[k] = v;
      }
      dict.passthrough = spec.bool_or("passthrough", false);
      table.lookups[name] = std::move(dict);
    }
  }
  std::set<std::string> seen_targets;
  if (const DocValue* entries = doc.find("entries"); entries && entries->is_array()) {
    for (const DocValue& e : entries->as_array()) {
      ConceptMapEntry entry;
      entry.transform = transform_from_string(e.string_or("transform", "rename"));
      if (const DocValue* sp = e.find("sourcePath"); sp && sp->is_string()) {
        entry.source_path = parse_path(sp->as_string());
      } else if (entry.transform != Transform::Inject) {
        throw Error(ErrorCode::ParseError, "entry without sourcePath must be an inject");
      }
      entry.target_path = parse_path(e.string_or("targetPath", ""));
      std::string target_str = path_to_string(entry.target_path);
      if (!seen_targets.insert(target_str).second) {
        throw Error(ErrorCode::PathConflict, "two entries write targetPath " + target_str);
      }
      if (const DocValue* vm = e.find("valueMap"); vm && vm->is_map()) {
        for (const auto& [k, v] : vm->as_map()) entry.value_map[k] = v;
      }
      entry.value_map_passthrough = e.bool_or("passthrough", false);
      entry.lookup_name = e.string_or("lookup", "");
      if (const DocValue* v = e.find("value")) entry.inject_value = *v;
      entry.scale_factor = e.number_or("factor", 1.0);
      entry.date_from = e.string_or("dateFrom", "");
      entry.date_to = e.string_or("dateTo", "");
      table.entries.push_back(std::move(entry));
    }
  }
  return table;
}

ConceptMapTable ConceptMapTable::load(const std::string& path) {
  return from_doc(core::load_doc(path));
}

DocValue translate(const DocValue& doc, const ConceptMapTable& table) {
  DocValue out = doc;
  for (const ConceptMapEntry& entry : table.entries) {
    if (entry.transform == Transform::Inject) {
      // bind wildcards in the target against existing arrays
      DocPath parent_path(entry.target_path.begin(), entry.target_path.end() - 1);
      if (parent_path.empty()) {
        set_path(out, entry.target_path, {}, entry.inject_value);
        continue;
      }
      for (const PathMatch& match : resolve_path(out, parent_path)) {
        set_path(out, entry.target_path, match.stars, entry.inject_value);
      }
      continue;
    }
    std::vector<PathMatch> matches = resolve_path(out, *entry.source_path);
    // collect values first; removals would invalidate the match pointers
    std::vector<std::pair<std::vector<std::size_t>, DocValue>> staged;
    staged.reserve(matches.size());
    for (const PathMatch& match : matches) {
      staged.emplace_back(match.stars, apply_value_transforms(entry, table, *match.value));
    }
    for (auto& [stars, value] : staged) {
      if (entry.transform != Transform::Copy) {
        remove_path(out, *entry.source_path, stars);
      }
      set_path(out, entry.target_path, stars, std::move(value));
    }
  }
  return out;
}

}  // namespace modx::translation
