#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsrec/embedding.hpp"
#include "wsrec/interaction_matrix.hpp"

namespace wsrec {

enum class Similarity { kDot, kCosine };

std::string to_string(Similarity metric);
Similarity similarity_from_string(std::string_view name);

/// Blend of the user-item score R and the item-item score S:
///   Z = (user_item * R + item_item * S) / (user_item + item_item).
struct WeightConfig {
  double user_item = 1.0;
  double item_item = 1.0;
  Similarity metric = Similarity::kDot;

  /// Throws UsageError unless both weights are non-negative and their sum is
  /// positive.
  void validate() const;
};

/// Ranked top-N items for one user; never contains consumed items, scores
/// are non-increasing, ties broken by ascending item index.
struct RecommendationList {
  std::size_t user = 0;
  std::vector<std::uint32_t> items;
  std::vector<double> scores;
};

/// Similarity between a user embedding and an item embedding. Cosine returns
/// 0 when either vector has zero norm.
double user_item_score(const EmbeddingPair& e, std::size_t user,
                       std::uint32_t item, Similarity metric);

/// Mean similarity between `item` and each item in `history`; 0 for an empty
/// history. This is the per-pair definition; top_n uses the algebraically
/// equivalent consumption-centroid form.
double item_item_score(const EmbeddingPair& e,
                       std::span<const std::uint32_t> history,
                       std::uint32_t item, Similarity metric);

double weighted_score(double user_item, double item_item,
                      const WeightConfig& w);

/// Top-N lists for every user (or the given subset), scoring all items
/// outside each user's history. Per-user work is independent, so output is
/// identical at any worker count.
std::vector<RecommendationList> top_n(
    const EmbeddingPair& e, const InteractionMatrix& m, const WeightConfig& w,
    int n, std::span<const std::size_t> users = {});

/// One line per user: "user_id<TAB>item_id:score,item_id:score,..." with six
/// decimal places, users in map order.
void write_recommendations(std::ostream& out,
                           const std::vector<RecommendationList>& lists,
                           const InteractionMatrix& m);

namespace detail {

/// Users scored per chunk so the item matrix is swept once per chunk instead
/// of once per user. Fixed so that any two scoring passes over the same user
/// sequence produce bitwise identical results.
inline constexpr std::size_t kScoreChunk = 64;

/// Precomputed scoring state for one (embeddings, matrix, metric) triple.
/// For cosine, rows are normalized up front (zero rows stay zero); the
/// item-item score of item i is then dot(q_i_hat, centroid of normalized
/// history), which equals the mean pairwise similarity.
class Scorer {
 public:
  Scorer(const EmbeddingPair& e, const InteractionMatrix& m,
         Similarity metric);

  /// Scores a chunk of at most kScoreChunk users: column c of `user_item`
  /// and `item_item` holds the per-item scores of users[c].
  void score_chunk(std::span<const std::size_t> users,
                   Eigen::MatrixXd& user_item,
                   Eigen::MatrixXd& item_item) const;

  std::size_t item_count() const {
    return static_cast<std::size_t>(items_.rows());
  }

 private:
  DenseMatrix users_;      // metric-adjusted user embeddings
  DenseMatrix items_;      // metric-adjusted item embeddings
  DenseMatrix centroids_;  // per-user mean of consumed item rows
};

/// Z column for one user under normalized blending.
inline Eigen::VectorXd blend(const Eigen::MatrixXd& user_item,
                             const Eigen::MatrixXd& item_item,
                             Eigen::Index column, double w_user_item,
                             double w_item_item) {
  return (w_user_item * user_item.col(column) +
          w_item_item * item_item.col(column)) /
         (w_user_item + w_item_item);
}

/// Selects the n best (score desc, index asc) candidates, skipping consumed
/// items.
RecommendationList select_top_n(std::size_t user, const Eigen::VectorXd& z,
                                std::span<const std::uint32_t> consumed,
                                int n);

}  // namespace detail

}  // namespace wsrec
