#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"

namespace modx::translation {

/// Optional token-expansion table: each token contributes its expansion
/// tokens in addition to itself, so "flightbooking" can pull in "flight",
/// "book" etc. Shared between querying and registering sides.
struct SynonymTable {
  std::map<std::string, std::vector<std::string>> expansions;

  static SynonymTable from_doc(const core::DocValue& doc);
  bool empty() const { return expansions.empty(); }
};

/// Deterministic feature-hashed bag-of-tokens embedder: lowercase, split on
/// non-alphanumerics, hash each token (seeded) to an index with a ±1 sign
/// hash, accumulate, L2-normalize. Same text and seed always produce the
/// same vector, across processes; token order never matters.
class Embedder {
 public:
  Embedder(std::size_t dimension, std::uint64_t seed, SynonymTable synonyms = {})
      : dimension_(dimension), seed_(seed), synonyms_(std::move(synonyms)) {}

  std::size_t dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }

  /// Throws EmptyText when the text contains no tokens.
  std::vector<double> embed(const std::string& text) const;

  static std::vector<std::string> tokenize(const std::string& text);

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
  SynonymTable synonyms_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace modx::translation
