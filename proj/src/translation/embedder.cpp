#include "modx/translation/embedder.h"

#include <cmath>

#include "modx/core/errors.h"

namespace modx::translation {

using core::Error;
using core::ErrorCode;

SynonymTable SynonymTable::from_doc(const core::DocValue& doc) {
  SynonymTable table;
  if (!doc.is_map()) return table;
  for (const auto& [token, list] : doc.as_map()) {
    if (!list.is_array()) continue;
    std::vector<std::string> expanded;
    for (const auto& item : list.as_array()) {
      if (item.is_string()) expanded.push_back(item.as_string());
    }
    table.expansions[token] = std::move(expanded);
  }
  return table;
}

std::vector<std::string> Embedder::tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (alnum) {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

namespace {

// Explicit FNV-1a + splitmix finisher; no std::hash so vectors are stable
// across processes and standard libraries.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<double> Embedder::embed(const std::string& text) const {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) {
    throw Error(ErrorCode::EmptyText, "no tokens to embed in \"" + text + "\"");
  }
  if (!synonyms_.empty()) {
    std::vector<std::string> expanded;
    for (const std::string& tok : tokens) {
      expanded.push_back(tok);
      auto it = synonyms_.expansions.find(tok);
      if (it != synonyms_.expansions.end()) {
        for (const std::string& extra : it->second) expanded.push_back(extra);
      }
    }
    tokens = std::move(expanded);
  }

  std::vector<double> vec(dimension_, 0.0);
  for (const std::string& tok : tokens) {
    std::uint64_t h = mix(fnv1a(tok) ^ seed_);
    std::size_t index = static_cast<std::size_t>(h % dimension_);
    double sign = (mix(h) & 1) ? 1.0 : -1.0;
    vec[index] += sign;
  }
  double norm = 0.0;
  for (double v : vec) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    throw Error(ErrorCode::EmbeddingFailure, "token hashes cancelled to the zero vector");
  }
  for (double& v : vec) v /= norm;
  return vec;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cosine over dimensions " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine undefined for zero-norm vector");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace modx::translation
