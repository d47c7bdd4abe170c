#pragma once

#include <string>

#include "modx/core/doc_value.h"

namespace modx::core {

/// Deterministic byte form used for hashing and signing: UTF-8 JSON with
/// map keys in code-point order, no insignificant whitespace, and numbers
/// in shortest round-trip decimal form. Equal documents produce equal
/// bytes. Throws NonFiniteNumber for NaN or infinity.
std::string canonicalize(const DocValue& doc);

/// Shortest round-trip rendering of one finite number (negative zero
/// normalizes to "0"). Exposed because envelope and ledger code renders
/// standalone numbers with the same rule.
std::string canonical_number(double value);

/// JSON string escaping used by the canonical form: the two-character
/// escapes for the named control characters, \u00xx for other controls,
/// everything else passed through as UTF-8.
void append_canonical_string(std::string& out, const std::string& s);

}  // namespace modx::core
