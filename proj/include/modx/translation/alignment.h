#pragma once

#include <string>
#include <utility>
#include <vector>

namespace modx::translation {

using Vec = std::vector<double>;

/// Linear map from a foreign embedding space into the shared one, fitted by
/// least squares over anchor pairs. Deterministic for a fixed anchor set.
struct AlignmentMap {
  std::string source_model_id;
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::vector<double> matrix;  // row-major target_dim x source_dim
  double fit_residual = 0.0;   // RMS over residual components across all anchors
};

/// Minimizes sum ||M*s - t||^2 over the anchors. Needs at least source_dim
/// linearly independent source vectors; throws RankDeficient otherwise.
AlignmentMap fit_alignment(const std::vector<std::pair<Vec, Vec>>& anchors,
                           std::string source_model_id = "");

/// Applies the map without normalizing.
Vec apply_alignment(const Vec& v, const AlignmentMap& map);

/// normalize(M*v); throws DimensionMismatch / ZeroVector.
Vec align(const Vec& v, const AlignmentMap& map);

}  // namespace modx::translation
