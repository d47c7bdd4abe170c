#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"
#include "modx/translation/doc_path.h"

namespace modx::translation {

/// Named value dictionary ("airport-city", "currency-usd-rates", ...);
/// passthrough keeps unknown values instead of failing.
struct LookupDictionary {
  std::map<std::string, core::DocValue> values;
  bool passthrough = false;
};

enum class Transform { Copy, Rename, Lookup, Inject, Scale, DateFormat };

/// One mapping rule. Rename/copy move or duplicate a field, lookup routes
/// the value through a named dictionary, inject writes a constant, scale
/// multiplies numbers (unit and currency conversions), dateformat rewrites
/// date strings between day-first and month-first forms. An inline valueMap
/// can additionally remap values on any moving transform.
struct ConceptMapEntry {
  std::optional<DocPath> source_path;
  DocPath target_path;
  Transform transform = Transform::Rename;
  std::map<std::string, core::DocValue> value_map;
  bool value_map_passthrough = false;
  std::string lookup_name;
  core::DocValue inject_value;
  double scale_factor = 1.0;
  std::string date_from;  // e.g. "DD/MM/YYYY"
  std::string date_to;    // e.g. "MM/DD/YYYY"
};

/// Static per-ontology-pair mapping table; entries apply in order, unmapped
/// fields pass through unchanged.
struct ConceptMapTable {
  std::vector<ConceptMapEntry> entries;
  std::map<std::string, LookupDictionary> lookups;

  static ConceptMapTable from_doc(const core::DocValue& doc);
  static ConceptMapTable load(const std::string& path);
};

/// Applies all entries to a copy of `doc`. Deterministic; throws
/// MissingLookupKey when a value misses a dictionary with no passthrough and
/// PathConflict when a write lands on an occupied target.
core::DocValue translate(const core::DocValue& doc, const ConceptMapTable& table);

}  // namespace modx::translation
