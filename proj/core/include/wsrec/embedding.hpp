#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

namespace wsrec {

/// Row-major dense matrix; one embedding per row.
using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// User matrix P (|U| x d) and item matrix Q (|I| x d) sharing one latent
/// space. `source_tag` records where the embeddings came from (learner name
/// plus hyperparameters, or an import path).
struct EmbeddingPair {
  DenseMatrix users;
  DenseMatrix items;
  std::string source_tag;

  Eigen::Index dim() const { return users.cols(); }

  bool is_finite() const {
    return users.allFinite() && items.allFinite();
  }

  /// Throws DataError unless both matrices share one dimension, are finite,
  /// and have the given row counts.
  void validate(std::size_t user_count, std::size_t item_count) const;
};

}  // namespace wsrec
