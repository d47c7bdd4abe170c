// Test-only reference implementations, deliberately independent of the
// library code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "modx/core/crypto.h"
#include "modx/core/doc_value.h"

namespace modx::test {

// ---------------------------------------------------------------------------
// Independent canonical serializer. Number rule: minimal significant digits
// that round-trip, rendered both fixed and scientific, shorter form wins,
// ties go to fixed. Structure: explicit key extraction + std::sort instead of
// relying on map iteration order.
// ---------------------------------------------------------------------------

inline std::string oracle_format_number(double x) {
  if (x == 0.0) return "0";
  char buf[512];
  int digits = 17;
  for (int d = 1; d <= 17; ++d) {
    std::snprintf(buf, sizeof(buf), "%.*e", d - 1, x);
    if (std::strtod(buf, nullptr) == x) {
      digits = d;
      break;
    }
  }
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, x);
  std::string sci = buf;
  int e10 = std::atoi(sci.c_str() + sci.find('e') + 1);
  int decimals = std::max(0, digits - 1 - e10);
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  std::string fixed = buf;
  if (std::strtod(fixed.c_str(), nullptr) != x) return sci;
  return fixed.size() <= sci.size() ? fixed : sci;
}

inline void oracle_escape(std::string& out, const std::string& s) {
  out += '"';
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c == '"') out += "\\\"";
    else if (c == '\\') out += "\\\\";
    else if (c == 0x08) out += "\\b";
    else if (c == 0x0c) out += "\\f";
    else if (c == 0x0a) out += "\\n";
    else if (c == 0x0d) out += "\\r";
    else if (c == 0x09) out += "\\t";
    else if (c < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '"';
}

inline std::string oracle_canonicalize(const modx::core::DocValue& doc) {
  using modx::core::DocValue;
  std::string out;
  if (doc.is_null()) {
    out = "null";
  } else if (doc.is_bool()) {
    out = doc.as_bool() ? "true" : "false";
  } else if (doc.is_number()) {
    out = oracle_format_number(doc.as_number());
  } else if (doc.is_string()) {
    oracle_escape(out, doc.as_string());
  } else if (doc.is_array()) {
    out = "[";
    const auto& arr = doc.as_array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i) out += ",";
      out += oracle_canonicalize(arr[i]);
    }
    out += "]";
  } else {
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.as_map()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    out = "{";
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out += ",";
      oracle_escape(out, keys[i]);
      out += ":";
      out += oracle_canonicalize(doc.as_map().at(keys[i]));
    }
    out += "}";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random document generator for property tests.
// ---------------------------------------------------------------------------

class DocGen {
 public:
  explicit DocGen(std::uint64_t seed) : rng_(seed) {}

  modx::core::DocValue value(int depth = 0) {
    using modx::core::DocArray;
    using modx::core::DocMap;
    using modx::core::DocValue;
    int kind = pick(0, depth >= 3 ? 3 : 5);
    switch (kind) {
      case 0: return DocValue(nullptr);
      case 1: return DocValue(pick(0, 1) == 1);
      case 2: return DocValue(number());
      case 3: return DocValue(text());
      case 4: {
        DocArray arr;
        int n = pick(0, 4);
        for (int i = 0; i < n; ++i) arr.push_back(value(depth + 1));
        return DocValue(std::move(arr));
      }
      default: {
        DocMap map;
        int n = pick(0, 4);
        for (int i = 0; i < n; ++i) map[key()] = value(depth + 1);
        return DocValue(std::move(map));
      }
    }
  }

  double number() {
    switch (pick(0, 3)) {
      case 0: return static_cast<double>(pick(-1000000, 1000000));
      case 1: return pick(-10000, 10000) / 100.0;
      case 2: return pick(1, 999) * std::pow(10.0, pick(-20, 20));
      default: {
        // random bit pattern, rejecting non-finite values
        for (;;) {
          std::uint64_t bits = rng_();
          double d;
          std::memcpy(&d, &bits, sizeof(d));
          if (std::isfinite(d)) return d;
        }
      }
    }
  }

  std::string text() {
    std::string s;
    int n = pick(0, 12);
    for (int i = 0; i < n; ++i) {
      switch (pick(0, 6)) {
        case 0: s.push_back(static_cast<char>(pick(0x01, 0x1f))); break;  // control
        case 1: s.push_back('"'); break;
        case 2: s.push_back('\\'); break;
        case 3: s += "\xc3\xa9"; break;  // two-byte UTF-8
        default: s.push_back(static_cast<char>(pick(0x20, 0x7e)));
      }
    }
    return s;
  }

  std::string key() {
    static const char* pool = "abcdefgzAZ09_-. ";
    std::string k;
    int n = pick(1, 8);
    for (int i = 0; i < n; ++i) k.push_back(pool[pick(0, 15)]);
    return k;
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Brute-force Merkle tree: independent recursive construction with explicit
// per-level pairing (duplicate-last padding), used against the library's
// level-hashing implementation.
// ---------------------------------------------------------------------------

inline modx::core::Bytes oracle_hash_pair(const modx::core::Bytes& a,
                                          const modx::core::Bytes& b) {
  std::string joined(a.begin(), a.end());
  joined.append(b.begin(), b.end());
  return modx::core::sha256(joined);
}

inline modx::core::Bytes oracle_merkle_root(std::vector<modx::core::Bytes> level) {
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<modx::core::Bytes> parents;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      parents.push_back(oracle_hash_pair(level[i], level[i + 1]));
    }
    level = std::move(parents);
  }
  return level.at(0);
}

}  // namespace modx::test
