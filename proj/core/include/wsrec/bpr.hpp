#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsrec/embedding.hpp"
#include "wsrec/interaction_matrix.hpp"

namespace wsrec {

/// Bayesian personalized ranking via seeded sequential SGD over sampled
/// (user, positive, negative) triplets.
struct BprConfig {
  int epochs = 15;
  double learning_rate = 1e-2;
  double regularization = 1e-2;
  int dim = 32;
  std::uint64_t seed = 0;
};

struct BprTrainStats {
  /// Triplets skipped because the sampled user had consumed every item.
  std::size_t skipped_triplets = 0;
};

/// Runs epochs * |R| SGD steps, sampling a positive interaction uniformly
/// and a negative item uniformly outside the user's history. Deterministic
/// for a fixed seed (single-threaded by design). Throws DataError when fewer
/// than two items exist, TrainingError on divergence.
EmbeddingPair train_bpr(const InteractionMatrix& m, const BprConfig& cfg,
                        BprTrainStats* stats = nullptr);

/// Trains once to max(epoch_marks) and snapshots at each mark; the sampling
/// stream is continuous, so each snapshot is bitwise identical to a
/// standalone run with that epoch count.
std::vector<EmbeddingPair> train_bpr_snapshots(
    const InteractionMatrix& m, const BprConfig& cfg,
    std::span<const int> epoch_marks, BprTrainStats* stats = nullptr);

/// Loss of a single triplet: -ln sigma(x_uij) plus the L2 terms the SGD step
/// descends. Exposed so gradients can be checked against finite differences.
double bpr_triplet_loss(const EmbeddingPair& e, std::size_t user,
                        std::uint32_t pos, std::uint32_t neg,
                        double regularization);

/// Analytic gradient of bpr_triplet_loss with respect to (p_u, q_pos, q_neg),
/// each of length d.
void bpr_triplet_gradient(const EmbeddingPair& e, std::size_t user,
                          std::uint32_t pos, std::uint32_t neg,
                          double regularization, Eigen::VectorXd& grad_user,
                          Eigen::VectorXd& grad_pos, Eigen::VectorXd& grad_neg);

}  // namespace wsrec
