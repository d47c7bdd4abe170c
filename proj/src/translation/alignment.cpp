#include "modx/translation/alignment.h"

#include <Eigen/Dense>
#include <cmath>

#include "modx/core/errors.h"

namespace modx::translation {

using core::Error;
using core::ErrorCode;

AlignmentMap fit_alignment(const std::vector<std::pair<Vec, Vec>>& anchors,
                           std::string source_model_id) {
  if (anchors.empty()) {
    throw Error(ErrorCode::RankDeficient, "no anchors to fit");
  }
  const std::size_t d_src = anchors.front().first.size();
  const std::size_t d_dst = anchors.front().second.size();
  const std::size_t n = anchors.size();
  if (n < d_src) {
    throw Error(ErrorCode::RankDeficient,
                "need at least " + std::to_string(d_src) + " anchors, got " + std::to_string(n));
  }
  Eigen::MatrixXd S(n, d_src);  // rows are source vectors
  Eigen::MatrixXd T(n, d_dst);
  for (std::size_t i = 0; i < n; ++i) {
    if (anchors[i].first.size() != d_src || anchors[i].second.size() != d_dst) {
      throw Error(ErrorCode::DimensionMismatch, "ragged anchor list");
    }
    for (std::size_t j = 0; j < d_src; ++j) S(i, j) = anchors[i].first[j];
    for (std::size_t j = 0; j < d_dst; ++j) T(i, j) = anchors[i].second[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
  if (qr.rank() < static_cast<Eigen::Index>(d_src)) {
    throw Error(ErrorCode::RankDeficient, "anchor source vectors do not span the space (rank " +
                                              std::to_string(qr.rank()) + " < " +
                                              std::to_string(d_src) + ")");
  }
  Eigen::MatrixXd Mt = qr.solve(T);  // (d_src x d_dst), transpose of the map

  AlignmentMap map;
  map.source_model_id = std::move(source_model_id);
  map.source_dim = d_src;
  map.target_dim = d_dst;
  map.matrix.resize(d_src * d_dst);
  for (std::size_t r = 0; r < d_dst; ++r) {
    for (std::size_t c = 0; c < d_src; ++c) {
      map.matrix[r * d_src + c] = Mt(c, r);
    }
  }
  double sq_sum = (S * Mt - T).squaredNorm();
  map.fit_residual = std::sqrt(sq_sum / static_cast<double>(n * d_dst));
  return map;
}

Vec apply_alignment(const Vec& v, const AlignmentMap& map) {
  if (v.size() != map.source_dim) {
    throw Error(ErrorCode::DimensionMismatch, "vector has dimension " + std::to_string(v.size()) +
                                                  ", map expects " +
                                                  std::to_string(map.source_dim));
  }
  Vec out(map.target_dim, 0.0);
  for (std::size_t r = 0; r < map.target_dim; ++r) {
    double acc = 0.0;
    const double* row = &map.matrix[r * map.source_dim];
    for (std::size_t c = 0; c < map.source_dim; ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

Vec align(const Vec& v, const AlignmentMap& map) {
  Vec out = apply_alignment(v, map);
  double norm = 0.0;
  for (double x : out) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    throw Error(ErrorCode::ZeroVector, "aligned vector has zero norm");
  }
  for (double& x : out) x /= norm;
  return out;
}

}  // namespace modx::translation
