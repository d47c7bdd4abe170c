#include "modx/core/canonical.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "modx/core/errors.h"

namespace modx::core {

std::string canonical_number(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteNumber, "cannot canonicalize non-finite number");
  }
  if (value == 0.0) return "0";  // folds -0.0 into 0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void append_canonical_string(std::string& out, const std::string& s) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

namespace {

void write_value(std::string& out, const DocValue& doc) {
  if (doc.is_null()) {
    out += "null";
  } else if (doc.is_bool()) {
    out += doc.as_bool() ? "true" : "false";
  } else if (doc.is_number()) {
    out += canonical_number(doc.as_number());
  } else if (doc.is_string()) {
    append_canonical_string(out, doc.as_string());
  } else if (doc.is_array()) {
    out.push_back('[');
    bool first = true;
    for (const DocValue& item : doc.as_array()) {
      if (!first) out.push_back(',');
      first = false;
      write_value(out, item);
    }
    out.push_back(']');
  } else {
    // DocMap iterates in key order already (std::map over byte-wise less),
    // which is code-point order for UTF-8 keys.
    out.push_back('{');
    bool first = true;
    for (const auto& [key, value] : doc.as_map()) {
      if (!first) out.push_back(',');
      first = false;
      append_canonical_string(out, key);
      out.push_back(':');
      write_value(out, value);
    }
    out.push_back('}');
  }
}

}  // namespace

std::string canonicalize(const DocValue& doc) {
  std::string out;
  write_value(out, doc);
  return out;
}

}  // namespace modx::core
