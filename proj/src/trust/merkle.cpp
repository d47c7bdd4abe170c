#include "modx/trust/merkle.h"

#include <stdexcept>

#include "modx/core/errors.h"

namespace modx::trust {

namespace {

Bytes hash_pair(const Bytes& left, const Bytes& right) {
  Bytes joined;
  joined.reserve(left.size() + right.size());
  joined.insert(joined.end(), left.begin(), left.end());
  joined.insert(joined.end(), right.begin(), right.end());
  return core::sha256(joined);
}

std::vector<Bytes> next_level_serial(const std::vector<Bytes>& level) {
  std::vector<Bytes> out((level.size() + 1) / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Bytes& left = level[2 * i];
    const Bytes& right = (2 * i + 1 < level.size()) ? level[2 * i + 1] : level[2 * i];
    out[i] = hash_pair(left, right);
  }
  return out;
}

std::vector<Bytes> next_level_parallel(const std::vector<Bytes>& level) {
  std::vector<Bytes> out((level.size() + 1) / 2);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (n > 512)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Bytes& left = level[2 * i];
    const Bytes& right = (static_cast<std::size_t>(2 * i + 1) < level.size())
                             ? level[2 * i + 1]
                             : level[2 * i];
    out[i] = hash_pair(left, right);
  }
  return out;
}

}  // namespace

Bytes merkle_root_serial(const std::vector<Bytes>& leaves) {
  if (leaves.empty()) throw core::Error(core::ErrorCode::EmptyBatch, "no digests to anchor");
  std::vector<Bytes> level = leaves;
  while (level.size() > 1) level = next_level_serial(level);
  return level[0];
}

Bytes merkle_root(const std::vector<Bytes>& leaves) {
  if (leaves.empty()) throw core::Error(core::ErrorCode::EmptyBatch, "no digests to anchor");
  std::vector<Bytes> level = leaves;
  while (level.size() > 1) level = next_level_parallel(level);
  return level[0];
}

InclusionProof merkle_prove(const std::vector<Bytes>& leaves, std::size_t index) {
  if (leaves.empty()) throw core::Error(core::ErrorCode::EmptyBatch, "no digests to anchor");
  if (index >= leaves.size()) throw std::out_of_range("merkle_prove: leaf index out of range");
  InclusionProof proof;
  std::vector<Bytes> level = leaves;
  while (level.size() > 1) {
    std::size_t sibling = (index % 2 == 0) ? index + 1 : index - 1;
    if (sibling >= level.size()) sibling = index;  // duplicated last node
    proof.push_back({level[sibling], index % 2 == 0});
    level = next_level_serial(level);
    index /= 2;
  }
  return proof;
}

bool merkle_verify(const Bytes& leaf, const InclusionProof& proof, const Bytes& root) {
  Bytes node = leaf;
  for (const ProofStep& step : proof) {
    node = step.sibling_is_right ? hash_pair(node, step.hash) : hash_pair(step.hash, node);
  }
  return node == root;
}

}  // namespace modx::trust
