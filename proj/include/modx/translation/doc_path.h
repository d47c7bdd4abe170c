#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"

namespace modx::translation {

/// One step of a document path: a map key, optionally subscripted with a
/// concrete index ("flightOptions[0]") or the for-each wildcard
/// ("travelSegments[*]").
struct PathSegment {
  enum class Kind { Plain, Star, Index };
  std::string key;
  Kind kind = Kind::Plain;
  std::size_t index = 0;
};

using DocPath = std::vector<PathSegment>;

DocPath parse_path(const std::string& text);
std::string path_to_string(const DocPath& path);

/// One concrete location a wildcard path resolved to: the element indices
/// chosen for each [*] plus the value found there.
struct PathMatch {
  std::vector<std::size_t> stars;
  const core::DocValue* value = nullptr;
};

std::vector<PathMatch> resolve_path(const core::DocValue& doc, const DocPath& path);

/// Concrete lookup (wildcards bound by `stars`); nullptr when absent.
const core::DocValue* get_path(const core::DocValue& doc, const DocPath& path,
                               const std::vector<std::size_t>& stars = {});

/// Writes `value` at the path (wildcards bound by `stars`), creating
/// intermediate maps for plain segments. An existing equal value is a no-op;
/// an existing different value throws PathConflict.
void set_path(core::DocValue& doc, const DocPath& path, const std::vector<std::size_t>& stars,
              core::DocValue value);

/// Removes the field at the path, pruning containers this removal emptied.
/// Returns false when the path was absent.
bool remove_path(core::DocValue& doc, const DocPath& path, const std::vector<std::size_t>& stars);

}  // namespace modx::translation
