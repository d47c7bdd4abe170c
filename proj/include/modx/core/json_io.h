#pragma once

#include <string>

#include "modx/core/doc_value.h"

namespace modx::core {

/// Parse UTF-8 JSON text into a document tree. Throws ParseError.
DocValue parse_doc(const std::string& json_text);

/// Load a JSON file into a document tree. Throws ParseError (includes the
/// path in the message).
DocValue load_doc(const std::string& path);

/// Human-oriented rendering (2-space indent, sorted keys). Canonical bytes
/// for hashing/signing come from canonicalize(), not from this.
std::string pretty_print(const DocValue& doc);

void save_doc(const std::string& path, const DocValue& doc, bool pretty = true);

}  // namespace modx::core
