#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wsrec/embedding.hpp"
#include "wsrec/interaction_matrix.hpp"

namespace wsrec {

/// Implicit-feedback alternating least squares. Observed pairs carry
/// preference 1 with confidence 1 + confidence_scale, everything else
/// preference 0 with confidence 1.
struct AlsConfig {
  int epochs = 15;
  double regularization = 1e-2;
  int dim = 32;
  double confidence_scale = 40.0;
  std::uint64_t seed = 0;
};

/// Runs `epochs` alternating passes (users, then items). Initialization is
/// seeded uniform in [-0.01, 0.01]; identical config and seed give bitwise
/// identical embeddings at any worker count. Throws TrainingError if a pass
/// produces non-finite values.
EmbeddingPair train_als(const InteractionMatrix& m, const AlsConfig& cfg);

/// Trains once to max(epoch_marks) and snapshots the embeddings at each
/// mark. Each snapshot is bitwise identical to a standalone run with that
/// epoch count, which is what makes epoch grids cheap.
std::vector<EmbeddingPair> train_als_snapshots(
    const InteractionMatrix& m, const AlsConfig& cfg,
    std::span<const int> epoch_marks);

/// Confidence-weighted squared error plus L2 penalty; the quantity each
/// alternating pass minimizes block-wise.
double als_loss(const InteractionMatrix& m, const EmbeddingPair& e,
                const AlsConfig& cfg);

}  // namespace wsrec
