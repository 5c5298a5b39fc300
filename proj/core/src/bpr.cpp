#include "wsrec/bpr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wsrec/errors.hpp"
#include "wsrec/rng.hpp"

namespace wsrec {

namespace {

DenseMatrix seeded_init(std::mt19937_64& gen, Eigen::Index rows,
                        Eigen::Index cols) {
  DenseMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = uniform_range(gen, -0.01, 0.01);
    }
  }
  return m;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string bpr_tag(const BprConfig& cfg, int epochs) {
  std::ostringstream tag;
  tag << "bpr epochs=" << epochs << " lr=" << cfg.learning_rate
      << " reg=" << cfg.regularization << " dim=" << cfg.dim
      << " seed=" << cfg.seed;
  return tag.str();
}

}  // namespace

std::vector<EmbeddingPair> train_bpr_snapshots(
    const InteractionMatrix& m, const BprConfig& cfg,
    std::span<const int> epoch_marks, BprTrainStats* stats) {
  if (m.user_count() == 0 || m.interaction_count() == 0) {
    throw DataError("BPR needs at least one interaction");
  }
  if (m.item_count() < 2) {
    throw DataError("BPR needs at least two items so a negative exists");
  }
  if (cfg.dim < 1 || cfg.epochs < 0) {
    throw UsageError("invalid BPR config");
  }

  std::vector<int> marks(epoch_marks.begin(), epoch_marks.end());
  const int max_epochs =
      marks.empty() ? 0 : *std::max_element(marks.begin(), marks.end());

  std::mt19937_64 gen(cfg.seed);
  EmbeddingPair e;
  e.users = seeded_init(gen, static_cast<Eigen::Index>(m.user_count()),
                        cfg.dim);
  e.items = seeded_init(gen, static_cast<Eigen::Index>(m.item_count()),
                        cfg.dim);

  const auto pairs = m.index_pairs();
  const std::uint64_t interaction_count = pairs.size();
  const std::uint64_t item_count = m.item_count();
  const double lr = cfg.learning_rate;
  const double reg = cfg.regularization;
  const Eigen::Index d = cfg.dim;

  BprTrainStats local_stats;
  Eigen::VectorXd user_update(d);

  std::vector<EmbeddingPair> snapshots(marks.size());
  auto snapshot_epoch = [&](int epoch) {
    for (std::size_t k = 0; k < marks.size(); ++k) {
      if (marks[k] == epoch) {
        snapshots[k] = e;
        snapshots[k].source_tag = bpr_tag(cfg, epoch);
      }
    }
  };

  snapshot_epoch(0);
  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    for (std::uint64_t step = 0; step < interaction_count; ++step) {
      const auto [u, pos] = pairs[bounded(gen, interaction_count)];
      const auto history = m.items_of(u);
      if (history.size() >= item_count) {
        ++local_stats.skipped_triplets;
        continue;
      }
      std::uint32_t neg;
      do {
        neg = static_cast<std::uint32_t>(bounded(gen, item_count));
      } while (std::binary_search(history.begin(), history.end(), neg));

      auto p = e.users.row(u);
      auto qp = e.items.row(pos);
      auto qn = e.items.row(neg);
      const double x = p.dot(qp) - p.dot(qn);
      const double weight = sigmoid(-x);

      user_update = (weight * (qp - qn) - reg * p).transpose();
      qp += lr * (weight * p - reg * qp);
      qn += lr * (-weight * p - reg * qn);
      p += lr * user_update.transpose();
    }
    if (!e.is_finite()) {
      throw TrainingError("BPR diverged at epoch " + std::to_string(epoch));
    }
    snapshot_epoch(epoch);
  }

  if (stats != nullptr) {
    *stats = local_stats;
  }
  return snapshots;
}

EmbeddingPair train_bpr(const InteractionMatrix& m, const BprConfig& cfg,
                        BprTrainStats* stats) {
  const int marks[] = {cfg.epochs};
  auto snapshots = train_bpr_snapshots(m, cfg, marks, stats);
  return std::move(snapshots.front());
}

double bpr_triplet_loss(const EmbeddingPair& e, std::size_t user,
                        std::uint32_t pos, std::uint32_t neg,
                        double regularization) {
  const auto p = e.users.row(static_cast<Eigen::Index>(user));
  const auto qp = e.items.row(pos);
  const auto qn = e.items.row(neg);
  const double x = p.dot(qp) - p.dot(qn);
  return -std::log(sigmoid(x)) +
         0.5 * regularization *
             (p.squaredNorm() + qp.squaredNorm() + qn.squaredNorm());
}

void bpr_triplet_gradient(const EmbeddingPair& e, std::size_t user,
                          std::uint32_t pos, std::uint32_t neg,
                          double regularization, Eigen::VectorXd& grad_user,
                          Eigen::VectorXd& grad_pos,
                          Eigen::VectorXd& grad_neg) {
  const auto p = e.users.row(static_cast<Eigen::Index>(user));
  const auto qp = e.items.row(pos);
  const auto qn = e.items.row(neg);
  const double x = p.dot(qp) - p.dot(qn);
  const double weight = sigmoid(-x);
  grad_user = (-weight * (qp - qn) + regularization * p).transpose();
  grad_pos = (-weight * p + regularization * qp).transpose();
  grad_neg = (weight * p + regularization * qn).transpose();
}

}  // namespace wsrec
