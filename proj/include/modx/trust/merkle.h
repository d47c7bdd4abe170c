#pragma once

#include <cstddef>
#include <vector>

#include "modx/core/crypto.h"

namespace modx::trust {

using core::Bytes;

/// Sibling hash plus its side, bottom-up.
struct ProofStep {
  Bytes hash;
  bool sibling_is_right = false;
};

using InclusionProof = std::vector<ProofStep>;

/// Merkle root over an ordered digest list: SHA-256 inner nodes, odd levels
/// padded by duplicating the last node. A single leaf is its own root.
/// Throws EmptyBatch for an empty list.
Bytes merkle_root(const std::vector<Bytes>& leaves);

/// Serial reference for the OpenMP level-hashing path; kept for tests and
/// the bench tool.
Bytes merkle_root_serial(const std::vector<Bytes>& leaves);

/// Proof of membership for the leaf at `index`; at most ceil(log2 n) steps.
InclusionProof merkle_prove(const std::vector<Bytes>& leaves, std::size_t index);

bool merkle_verify(const Bytes& leaf, const InclusionProof& proof, const Bytes& root);

}  // namespace modx::trust
